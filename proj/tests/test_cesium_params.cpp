#include <doctest.h>

#include <cmath>
#include <fstream>

#include "serf/cesium_params.hpp"
#include "serf/constants.hpp"

using namespace serf;

TEST_CASE("default constants satisfy the model invariants") {
    const CesiumParams p = CesiumParams::defaults();
    p.validate();
    CHECK(std::abs(p.p_coeff * p.p_coeff + p.q_coeff * p.q_coeff - 1.0) < 1e-12);
    CHECK(std::abs(p.a_cs * p.b_cs - 4.0 / 7.0) < 1e-12);
    CHECK(p.delta == doctest::Approx(1100e6 * kTwoPi));
    CHECK(p.gamma == doctest::Approx(124e6 * kTwoPi));
    CHECK(p.nuclear_spin == 3.5);
    CHECK(p.q_coeff / p.p_coeff == doctest::Approx(std::sqrt(7.0)).epsilon(1e-14));
}

TEST_CASE("alpha_ellipticity") {
    CesiumParams p = CesiumParams::defaults();
    // f * Gamma / Delta = 0.58 * 124 / 1100
    CHECK(alpha_ellipticity(p) == doctest::Approx(0.58 * 124.0 / 1100.0).epsilon(1e-14));
    CHECK(alpha_ellipticity(p) == doctest::Approx(0.065382).epsilon(1e-4));

    SUBCASE("zero numerator") {
        p.f_cs = 0.0;
        CHECK(alpha_ellipticity(p) == 0.0);
    }
    SUBCASE("linear in 1/delta") {
        const double base = alpha_ellipticity(p);
        p.delta *= 10.0;
        CHECK(alpha_ellipticity(p) == doctest::Approx(base / 10.0).epsilon(1e-14));
    }
    SUBCASE("scale invariance under joint rescaling") {
        const double base = alpha_ellipticity(p);
        p.delta *= 3.7;
        p.gamma *= 3.7;
        CHECK(alpha_ellipticity(p) == doctest::Approx(base).epsilon(1e-14));
    }
    SUBCASE("positivity enforced") {
        p.gamma = -1.0;
        CHECK_THROWS_AS(alpha_ellipticity(p), std::invalid_argument);
    }
}

TEST_CASE("rabi_frequencies") {
    const CesiumParams p = CesiumParams::defaults();

    SUBCASE("no signal") {
        const auto r = rabi_frequencies(100.0, 0.0, 0.3, p);
        CHECK(r.omega_c > 0.0);
        CHECK(std::abs(r.omega_s) == 0.0);
    }
    SUBCASE("amplitude ratio and phase") {
        const auto r = rabi_frequencies(250.0, 1e-3, 0.0, p);
        CHECK(std::abs(r.omega_s) / r.omega_c ==
              doctest::Approx(std::sqrt(2.0) * 1e-3).epsilon(1e-12));
        CHECK(r.omega_s.imag() == doctest::Approx(0.0));
        CHECK(r.omega_s.real() > 0.0);
    }
    SUBCASE("quarter-phase signal is purely imaginary") {
        const auto r = rabi_frequencies(250.0, 1e-3, kPi / 2.0, p);
        CHECK(r.omega_s.real() == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(r.omega_s.imag() > 0.0);
    }
    SUBCASE("omega_c magnitude is d E / (sqrt(2) hbar)") {
        const auto r = rabi_frequencies(1.0, 0.0, 0.0, p);
        CHECK(r.omega_c ==
              doctest::Approx(p.d_cs / (std::sqrt(2.0) * kHbar)).epsilon(1e-14));
    }
    SUBCASE("negative eta rejected") {
        CHECK_THROWS_AS(rabi_frequencies(1.0, -1e-3, 0.0, p), std::invalid_argument);
    }
}

TEST_CASE("spin_exchange_rate") {
    const CesiumParams p = CesiumParams::defaults();
    CHECK(spin_exchange_rate(1.4e11, p) == doctest::Approx(91.0).epsilon(1e-12));
    CHECK(spin_exchange_rate(0.0, p) == 0.0);
    CHECK(spin_exchange_rate(2.8e11, p) ==
          doctest::Approx(2.0 * spin_exchange_rate(1.4e11, p)).epsilon(1e-14));
    // additivity
    CHECK(spin_exchange_rate(1e10, p) + spin_exchange_rate(2e10, p) ==
          doctest::Approx(spin_exchange_rate(3e10, p)).epsilon(1e-14));
    CHECK_THROWS_AS(spin_exchange_rate(-1.0, p), std::invalid_argument);
}

TEST_CASE("config round-trips the default constants bit-exactly") {
    const CesiumParams defaults = CesiumParams::defaults();
    const std::string text = params_to_json_text(defaults);
    const CesiumParams back = params_from_json_text(text);
    CHECK(back.delta == defaults.delta);
    CHECK(back.gamma == defaults.gamma);
    CHECK(back.f_cs == defaults.f_cs);
    CHECK(back.alpha_se == defaults.alpha_se);
    CHECK(back.nuclear_spin == defaults.nuclear_spin);
    CHECK(back.p_coeff == defaults.p_coeff);
    CHECK(back.q_coeff == defaults.q_coeff);

    // a second pass is the identity on the serialized text too
    CHECK(params_to_json_text(back) == text);
}

TEST_CASE("config parsing: partial sections, fallbacks, and errors") {
    SUBCASE("missing keys fall back to defaults") {
        const CesiumParams p = params_from_json_text(R"({"cesium": {"f_cs": 0.5}})");
        CHECK(p.f_cs == 0.5);
        CHECK(p.delta == CesiumParams::defaults().delta);
        CHECK(p.alpha_se == CesiumParams::defaults().alpha_se);
    }
    SUBCASE("empty document is all defaults") {
        const CesiumParams p = params_from_json_text("{}");
        CHECK(p.delta == CesiumParams::defaults().delta);
    }
    SUBCASE("hz keys are converted to rad/s") {
        const CesiumParams p =
            params_from_json_text(R"({"cesium": {"delta_hz": 2.0e9}})");
        CHECK(p.delta == doctest::Approx(2.0e9 * kTwoPi).epsilon(1e-15));
    }
    SUBCASE("unknown keys are rejected") {
        CHECK_THROWS_AS(params_from_json_text(R"({"cesium": {"delta_mhz": 1.0}})"),
                        std::invalid_argument);
    }
    SUBCASE("malformed json is rejected with a position") {
        try {
            params_from_json_text("{\"cesium\": {");
            CHECK(false);
        } catch (const std::invalid_argument& e) {
            CHECK(std::string(e.what()).find("config:") != std::string::npos);
        }
    }
    SUBCASE("invalid physics is rejected") {
        CHECK_THROWS_AS(params_from_json_text(R"({"cesium": {"gamma_hz": -5.0}})"),
                        std::invalid_argument);
        CHECK_THROWS_AS(params_from_json_text(R"({"cesium": {"p_squared": 1.5}})"),
                        std::invalid_argument);
    }
}

TEST_CASE("config file I/O") {
    const std::string path = "/tmp/serf_params_test.json";
    save_params(CesiumParams::defaults(), path);
    const CesiumParams p = load_params(path);
    CHECK(p.delta == CesiumParams::defaults().delta);
    CHECK_THROWS_AS(load_params("/nonexistent/path.json"), std::invalid_argument);
}
