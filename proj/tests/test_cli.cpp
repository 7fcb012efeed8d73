#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <string>

#include "gptc/json_io.hpp"
#include "gptc/reproduce.hpp"

using namespace gptc;

namespace {

std::string run_cli(const std::string& args, int* exit_code) {
    std::string cmd = std::string(GPTC_CLI) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof(buf), pipe)) out.append(buf, n);
    int rc = pclose(pipe);
    *exit_code = WEXITSTATUS(rc);
    return out;
}

const char* kModel = R"({"model": "hypercube", "n": 2})";
const char* kSharpPair =
    R"({"k": [2, 2],
        "effects": [[[0.5, 0.5, 0.0], [0.5, -0.5, 0.0]],
                    [[0.5, 0.0, 0.5], [0.5, 0.0, -0.5]]]})";

struct Files {
    std::string dir, model, meas;
    Files() {
        dir = "/tmp/gptc_cli_test";
        REQUIRE(std::system(("mkdir -p " + dir).c_str()) == 0);
        model = dir + "/model.json";
        meas = dir + "/meas.json";
        write_file(model, kModel);
        write_file(meas, kSharpPair);
    }
};

}  // namespace

TEST_CASE("json writer is deterministic and prints 17 significant digits") {
    JsonWriter w;
    w.begin_object();
    w.key("x").value(1.0 / 3.0);
    w.key("v").value(Vec<double>{0.1, -2.0});
    w.end_object();
    CHECK(w.str() ==
          "{\"x\":0.33333333333333331,\"v\":[0.10000000000000001,-2]}");
}

TEST_CASE("cone json round trip") {
    auto c = linf_ball_cone<double>(2);
    auto text = cone_to_json(c);
    auto back = parse_cone(text);
    CHECK(back.dim == c.dim);
    CHECK(back.generators == c.generators);
    CHECK(back.facets == c.facets);
}

TEST_CASE("measurement json round trip preserves values exactly") {
    auto hc = make_hypercube<double>(2);
    Rng rng(71);
    auto fam = random_family(hc, {2, 3}, rng);
    auto text = measurements_to_json(fam);
    auto back = parse_measurements(text);
    REQUIRE(back.size() == fam.size());
    for (int i = 0; i < fam.size(); ++i)
        for (int j = 0; j < fam.measurements[i].outcomes(); ++j)
            CHECK(back.measurements[i].effects[j] == fam.measurements[i].effects[j]);
}

TEST_CASE("model parsing and errors") {
    auto spec = parse_model(kModel);
    CHECK(spec.type == "hypercube");
    CHECK(spec.build<double>().dim == 3);
    CHECK_THROWS_AS(parse_model("{\"n\": 2}"), ParseError);
    CHECK_THROWS_AS(parse_model("{\"model\": \"torus\", \"n\": 1}").build<double>(),
                    ParseError);
    CHECK_THROWS_AS(parse_model("not json"), ParseError);
    CHECK_THROWS_AS(parse_measurements(R"({"k": [2], "effects": []})"), ParseError);
}

TEST_CASE("witness json round trip") {
    auto hc = make_hypercube<double>(2);
    Witness<double> w;
    w.z = {{0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}};
    w.z0 = Vec<double>{1.0, 0.0, 0.0};
    auto text = witness_to_json(hc, w);
    auto back = parse_witness(text);
    CHECK(back.z == w.z);
    REQUIRE(back.z0.has_value());
    CHECK(*back.z0 == *w.z0);
    CHECK(text.find("\"strict\":true") != std::string::npos);
}

TEST_CASE("reproduce rows all pass and are deterministic") {
    auto rows = run_reproduce(40, 7);
    CHECK(reproduce_all_pass(rows));
    auto again = run_reproduce(40, 7);
    CHECK(reproduce_json(rows) == reproduce_json(again));
    CHECK(reproduce_csv(rows).substr(0, 9) == "quantity,");
}

TEST_CASE("cli end to end") {
    Files f;
    int rc = -1;
    SUBCASE("compat reports incompatibility with a witness") {
        auto out = run_cli("compat --model " + f.model + " --measurements " + f.meas, &rc);
        CHECK(rc == 0);
        CHECK(out.find("\"compatible\":false") != std::string::npos);
        CHECK(out.find("\"witness\"") != std::string::npos);
    }
    SUBCASE("gamma with rho cross-check") {
        auto out = run_cli("gamma --model " + f.model + " --measurements " + f.meas +
                               " --bisect-tol 1e-7",
                           &rc);
        CHECK(rc == 0);
        CHECK(out.find("\"rho\":2") != std::string::npos);
        CHECK(out.find("\"reciprocal_consistent\":true") != std::string::npos);
    }
    SUBCASE("exact mode agrees") {
        auto out =
            run_cli("compat --model " + f.model + " --measurements " + f.meas + " --exact", &rc);
        CHECK(rc == 0);
        CHECK(out.find("\"exact\":true") != std::string::npos);
        CHECK(out.find("\"compatible\":false") != std::string::npos);
    }
    SUBCASE("same seed gives byte-identical reports") {
        auto a = run_cli("reproduce --seed 5 --budget 30", &rc);
        CHECK(rc == 0);
        auto b = run_cli("reproduce --seed 5 --budget 30", &rc);
        CHECK(a == b);
    }
    SUBCASE("parse failures exit with code 2") {
        write_file(f.dir + "/bad.json", "{broken");
        run_cli("compat --model " + f.dir + "/bad.json --measurements " + f.meas, &rc);
        CHECK(rc == 2);
        run_cli("compat --model " + f.model + " --measurements /nonexistent.json", &rc);
        CHECK(rc == 2);
    }
    SUBCASE("ball models are served by the pair formula") {
        write_file(f.dir + "/ball.json", R"({"model": "ball", "n": 3})");
        write_file(f.dir + "/qpair.json",
                   R"({"k": [2, 2],
                       "effects": [[[0.5, 0.5, 0.0, 0.0], [0.5, -0.5, 0.0, 0.0]],
                                   [[0.5, 0.0, 0.5, 0.0], [0.5, 0.0, -0.5, 0.0]]]})");
        auto out = run_cli("gamma --model " + f.dir + "/ball.json --measurements " +
                               f.dir + "/qpair.json",
                           &rc);
        CHECK(rc == 0);
        CHECK(out.find("\"gamma\":0.70710678118654746") != std::string::npos);
        CHECK(out.find("euclidean-pair") != std::string::npos);
        // LP-based commands reject the model distinctly.
        run_cli("compat --model " + f.dir + "/ball.json --measurements " + f.dir +
                    "/qpair.json",
                &rc);
        CHECK(rc == 2);
    }
    SUBCASE("witness check rejects a non-witness") {
        write_file(f.dir + "/w.json",
                   R"({"z0": [], "z": [[0, 2.0, 0], [0, 0, 2.0]]})");
        auto out = run_cli("witness --model " + f.model + " --measurements " + f.meas +
                               " --check " + f.dir + "/w.json",
                           &rc);
        CHECK(rc == 0);
        CHECK(out.find("\"is_witness\":false") != std::string::npos);
    }
}
