#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gptc {

struct ReproduceRow {
    std::string name;
    double computed = 0;
    double expected = 0;
    double tol = 0;
    bool reference_only = false;  // carried constant, not recomputed
    bool pass = false;
};

/// Desk-scale reproduction table: closed-form compatibility degrees against
/// their LP counterparts, the 1-summing constants, and the carried reference
/// bounds.  Deterministic for a fixed seed.
std::vector<ReproduceRow> run_reproduce(int budget, std::uint64_t seed);

std::string reproduce_table(const std::vector<ReproduceRow>& rows);
std::string reproduce_csv(const std::vector<ReproduceRow>& rows);
std::string reproduce_json(const std::vector<ReproduceRow>& rows);

/// CSV of the closed-form degree curves for external plotting: the
/// cross-polytope degree f(g) and the ball-model limit 1/pi_1(l2^n).
std::string degree_curves_csv(int max_x);

inline bool reproduce_all_pass(const std::vector<ReproduceRow>& rows) {
    for (const auto& r : rows)
        if (!r.pass) return false;
    return true;
}

}  // namespace gptc
