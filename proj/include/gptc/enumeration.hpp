#pragma once

#include <cstddef>
#include <vector>

namespace gptc {

/// Outcome tuples are linearized row-major with the first factor slowest,
/// matching the kron() convention used throughout.
inline std::size_t linear_index(const std::vector<int>& k, const std::vector<int>& kappa) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < k.size(); ++i)
        idx = idx * static_cast<std::size_t>(k[i]) + static_cast<std::size_t>(kappa[i]);
    return idx;
}

inline std::size_t index_product(const std::vector<int>& k) {
    std::size_t p = 1;
    for (int ki : k) p *= static_cast<std::size_t>(ki);
    return p;
}

/// Visit every kappa in [0,k1) x ... x [0,kg) in linear-index order.
template <class F>
void for_each_multi_index(const std::vector<int>& k, F&& fn) {
    std::vector<int> kappa(k.size(), 0);
    while (true) {
        fn(static_cast<const std::vector<int>&>(kappa));
        std::size_t i = k.size();
        while (i > 0) {
            --i;
            if (++kappa[i] < k[i]) break;
            kappa[i] = 0;
            if (i == 0) return;
        }
        if (k.empty()) return;
    }
}

/// Visit every sign vector in {+1,-1}^g; +1 first in each slot.
template <class F>
void for_each_sign_vector(int g, F&& fn) {
    std::vector<int> eps(static_cast<std::size_t>(g), 1);
    std::size_t count = std::size_t{1} << g;
    for (std::size_t mask = 0; mask < count; ++mask) {
        for (int i = 0; i < g; ++i)
            eps[static_cast<std::size_t>(i)] = (mask >> (g - 1 - i)) & 1 ? -1 : 1;
        fn(static_cast<const std::vector<int>&>(eps));
    }
}

}  // namespace gptc
