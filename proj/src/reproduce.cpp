#include "gptc/reproduce.hpp"

#include <cmath>
#include <cstdio>

#include "gptc/compat.hpp"
#include "gptc/json_io.hpp"
#include "gptc/tensor_norms.hpp"

namespace gptc {

namespace {

ReproduceRow computed_row(const std::string& name, double computed, double expected,
                          double tol) {
    ReproduceRow r{name, computed, expected, tol, false, false};
    r.pass = std::fabs(computed - expected) <= tol;
    return r;
}

ReproduceRow reference_row(const std::string& name, double value) {
    return ReproduceRow{name, value, value, 0.0, true, true};
}

}  // namespace

std::vector<ReproduceRow> run_reproduce(int budget, std::uint64_t seed) {
    std::vector<ReproduceRow> rows;
    Rng rng(seed);

    {  // Hypercube degrees: the LP search must meet 1/min(g, n).
        auto hc = make_hypercube<double>(2);
        auto iv2 = gamma_model(hc, {2, 2}, budget, rng);
        rows.push_back(computed_row("gamma(2; hypercube n=2) [LP]", iv2.upper, 0.5, 1e-6));
        auto iv3 = gamma_model(hc, {2, 2, 2}, budget, rng);
        rows.push_back(computed_row("gamma(3; hypercube n=2) [LP]", iv3.upper, 0.5, 1e-6));
    }
    {  // Euclidean balls.
        auto ball = make_ball<double>(3);
        rows.push_back(computed_row("gamma(2; ball n=3) [pair formula]",
                                    euclidean_pair_gamma(ball, {1, 0, 0}, {0, 1, 0}),
                                    1.0 / std::sqrt(2.0), 1e-12));
        auto iv3 = gamma_model(ball, {2, 2, 2}, 0, rng);
        rows.push_back(computed_row("gamma(3; ball n=3) [closed form]", iv3.upper,
                                    1.0 / std::sqrt(3.0), 1e-12));
    }
    {  // Cross polytopes.
        rows.push_back(
            computed_row("f(2) = gamma(2; crosspolytope) [formula]", gamma_crosspolytope(2),
                         0.5, 1e-15));
        auto cp = make_crosspolytope<double>(2);
        auto iv = gamma_model(cp, {2, 2}, budget, rng);
        rows.push_back(
            computed_row("gamma(2; crosspolytope n=2) [LP]", iv.upper, 0.5, 1e-6));
        rows.push_back(computed_row("f(3) [formula]", gamma_crosspolytope(3), 0.5, 1e-15));
    }
    {  // 1-summing constants.
        double worst = 0;
        for (int n = 1; n <= 10; ++n)
            worst = std::max(worst, std::fabs(one_summing("linf", n) - n));
        rows.push_back(computed_row("pi1(linf, n<=10) - n", worst, 0.0, 0.0));
        rows.push_back(computed_row("pi1(l2, 3)", one_summing("l2", 3), 2.0, 1e-12));
        rows.push_back(computed_row("pi1(l1, 2)", one_summing("l1", 2), 2.0, 1e-12));
    }
    // Reference constants (not recomputed).
    rows.push_back(reference_row("gamma(g>=4; QM_2) lower bound [reference]", 0.5));
    rows.push_back(
        reference_row("gamma(g>=4; QM_2) upper bound [reference]", 1.0 / std::sqrt(3.0)));
    rows.push_back(reference_row("cs upper bound gamma(2) [reference]", 1.0 / std::sqrt(2.0)));
    rows.push_back(reference_row("pi1(S1_d) <= c d, c [reference]", 7.79));
    return rows;
}

std::string reproduce_table(const std::vector<ReproduceRow>& rows) {
    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-44s %18s %18s %9s %s\n", "quantity", "computed",
                  "expected", "tol", "status");
    out += buf;
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%-44s %18.12g %18.12g %9.1e %s\n", r.name.c_str(),
                      r.computed, r.expected, r.tol,
                      r.reference_only ? "REF" : (r.pass ? "PASS" : "FAIL"));
        out += buf;
    }
    return out;
}

std::string reproduce_csv(const std::vector<ReproduceRow>& rows) {
    std::string out = "quantity,computed,expected,tol,reference,pass\n";
    for (const auto& r : rows) {
        out += '"' + r.name + "\"," + format_float(r.computed) + ',' +
               format_float(r.expected) + ',' + format_float(r.tol) + ',' +
               (r.reference_only ? "1" : "0") + ',' + (r.pass ? "1" : "0") + '\n';
    }
    return out;
}

std::string degree_curves_csv(int max_x) {
    std::string out = "x,f_crosspolytope,ball_limit\n";
    for (int x = 1; x <= max_x; ++x) {
        out += std::to_string(x) + ',' + format_float(gamma_crosspolytope(x)) + ',' +
               format_float(1.0 / one_summing("l2", x)) + '\n';
    }
    return out;
}

std::string reproduce_json(const std::vector<ReproduceRow>& rows) {
    JsonWriter w;
    w.begin_object();
    w.key("command").value("reproduce");
    w.key("rows").begin_array();
    for (const auto& r : rows) {
        w.begin_object();
        w.key("name").value(r.name);
        w.key("computed").value(r.computed);
        w.key("expected").value(r.expected);
        w.key("tol").value(r.tol);
        w.key("reference").value(r.reference_only);
        w.key("pass").value(r.pass);
        w.end_object();
    }
    w.end_array();
    w.key("all_pass").value(reproduce_all_pass(rows));
    w.end_object();
    return w.str();
}

}  // namespace gptc
