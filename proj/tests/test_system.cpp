#include <doctest.h>

#include <string>

#include "ioss/config_io.hpp"
#include "ioss/system.hpp"
#include "support.hpp"

using namespace ioss;

namespace {

bool mentions(const std::exception& e, const std::string& needle) {
    return std::string(e.what()).find(needle) != std::string::npos;
}

}  // namespace

TEST_SUITE("system") {

TEST_CASE("variable name conventions") {
    CHECK(state_variables(3) == std::vector<std::string>{"x1", "x2", "x3"});
    CHECK(dynamics_variables(2, 2) == std::vector<std::string>{"x1", "x2", "v1", "v2"});
}

TEST_CASE("the bundled example spec loads") {
    const SystemSpec spec = load_spec(IOSS_SEC5_JSON);
    CHECK(spec.state_dim == 2);
    CHECK(spec.input_dim == 1);
    CHECK(spec.output_dim == 1);
    CHECK(spec.subsystems.size() == 3);
    CHECK(spec.edges.size() == 4);
    CHECK(spec.defaults.tolerance == 1e-9);
    CHECK(spec.defaults.rk_step == 1e-3);
    CHECK(spec.defaults.seed == 42);
    CHECK(spec.find(2) != nullptr);
    CHECK(spec.find(2)->stable == false);
    CHECK(spec.find(9) == nullptr);
}

TEST_CASE("validation rejects mu below one with a field path") {
    SystemSpec spec = testing::sec5_spec();
    spec.edges[0].mu = 0.9;
    try {
        validate(spec);
        CHECK(false);
    } catch (const SpecError& e) {
        CHECK(mentions(e, "edges[0].mu"));
    }
}

TEST_CASE("validation rejects inverted dwell bounds") {
    SystemSpec spec = testing::sec5_spec();
    spec.subsystems[1].min_dwell = 5.0;  // above max_dwell = 4
    try {
        validate(spec);
        CHECK(false);
    } catch (const SpecError& e) {
        CHECK(mentions(e, "subsystems[1].Delta"));
    }
}

TEST_CASE("validation catches the remaining structural problems") {
    SUBCASE("duplicate id") {
        SystemSpec spec = testing::sec5_spec();
        spec.subsystems[2].id = 1;
        CHECK_THROWS_AS(validate(spec), SpecError);
    }
    SUBCASE("self loop") {
        SystemSpec spec = testing::sec5_spec();
        spec.edges.push_back({2, 2, 1.0});
        CHECK_THROWS_AS(validate(spec), SpecError);
    }
    SUBCASE("dangling edge endpoint") {
        SystemSpec spec = testing::sec5_spec();
        spec.edges.push_back({1, 9, 1.0});
        CHECK_THROWS_AS(validate(spec), SpecError);
    }
    SUBCASE("nonpositive lambda") {
        SystemSpec spec = testing::sec5_spec();
        spec.subsystems[0].lambda_abs = -3.5;
        CHECK_THROWS_AS(validate(spec), SpecError);
    }
    SUBCASE("dynamics arity") {
        SystemSpec spec = testing::sec5_spec();
        spec.subsystems[0].dynamics.pop_back();
        CHECK_THROWS_AS(validate(spec), SpecError);
    }
    SUBCASE("Lyapunov candidate not vanishing at the origin") {
        SystemSpec spec = testing::sec5_spec();
        spec.subsystems[0].lyapunov =
            parse_expr("x1^2 + 1", state_variables(2));
        CHECK_THROWS_AS(validate(spec), SpecError);
    }
    SUBCASE("Lyapunov candidate negative away from the origin") {
        SystemSpec spec = testing::sec5_spec();
        spec.subsystems[0].lyapunov =
            parse_expr("0 - x1^2 - x2^2", state_variables(2));
        CHECK_THROWS_AS(validate(spec), SpecError);
    }
}

TEST_CASE("json parsing reports the offending path") {
    nlohmann::json doc = spec_to_json(testing::sec5_spec());

    SUBCASE("missing key") {
        doc["subsystems"][1].erase("lambda");
        try {
            parse_spec_json(doc);
            CHECK(false);
        } catch (const SpecError& e) {
            CHECK(mentions(e, "subsystems[1].lambda"));
        }
    }
    SUBCASE("bad expression") {
        doc["subsystems"][0]["f"][0] = "x1 +";
        try {
            parse_spec_json(doc);
            CHECK(false);
        } catch (const SpecError& e) {
            CHECK(mentions(e, "subsystems[0].f[0]"));
        }
    }
    SUBCASE("unknown variable in an output expression") {
        doc["subsystems"][0]["h"][0] = "v1";  // inputs are not visible to h
        CHECK_THROWS_AS(parse_spec_json(doc), SpecError);
    }
    SUBCASE("mu below one") {
        doc["edges"][0]["mu"] = 0.9;
        CHECK_THROWS_AS(parse_spec_json(doc), SpecError);
    }
}

TEST_CASE("spec json round trip") {
    const SystemSpec original = testing::sec5_spec();
    const SystemSpec reloaded = parse_spec_json(spec_to_json(original));
    REQUIRE(reloaded.subsystems.size() == original.subsystems.size());
    for (std::size_t i = 0; i < original.subsystems.size(); ++i) {
        CHECK(reloaded.subsystems[i].id == original.subsystems[i].id);
        CHECK(reloaded.subsystems[i].lambda_abs == original.subsystems[i].lambda_abs);
        CHECK(structurally_equal(reloaded.subsystems[i].lyapunov,
                                 original.subsystems[i].lyapunov));
        for (std::size_t j = 0; j < original.subsystems[i].dynamics.size(); ++j)
            CHECK(structurally_equal(reloaded.subsystems[i].dynamics[j],
                                     original.subsystems[i].dynamics[j]));
    }
    CHECK(reloaded.edges.size() == original.edges.size());
    CHECK(reloaded.defaults.seed == original.defaults.seed);
}

}  // TEST_SUITE
