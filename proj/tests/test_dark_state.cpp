#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "serf/angles.hpp"
#include "serf/cesium_params.hpp"
#include "serf/constants.hpp"
#include "serf/dark_state.hpp"
#include "serf/ellipse_fit.hpp"

using namespace serf;
using std::complex;

namespace {

double overlap_defect(const AtomicState4& a, const AtomicState4& b) {
    const complex<double> ov = a.amps.adjoint() * b.amps;
    return 1.0 - std::norm(ov);
}

AtomicState4 numeric_dark_state(const CesiumParams& p, double eta_l, double phi_l,
                                double omega_c_over_gamma = 1e-2) {
    const double omega_c = omega_c_over_gamma * p.gamma;
    const complex<double> omega_s =
        std::sqrt(2.0) * omega_c * eta_l * std::polar(1.0, phi_l);
    return quasi_dark_state_numeric(build_hamiltonian(omega_c, omega_s, p));
}

}  // namespace

TEST_CASE("build_hamiltonian structure") {
    const CesiumParams p = CesiumParams::defaults();

    SUBCASE("no fields: diagonal (0, 0, -iG, D-iG)") {
        const Eigen::Matrix4cd h = build_hamiltonian(0.0, 0.0, p);
        CHECK(h(kG, kG) == complex<double>(0, 0));
        CHECK(h(kR, kR) == complex<double>(0, 0));
        CHECK(h(kE, kE) == complex<double>(0.0, -p.gamma));
        CHECK(h(kP, kP) == complex<double>(p.delta, -p.gamma));
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                if (i != j) CHECK(std::abs(h(i, j)) == 0.0);
    }

    SUBCASE("control only: g couples to p, r couples to e") {
        const double wc = 1e6;
        const Eigen::Matrix4cd h = build_hamiltonian(wc, 0.0, p);
        CHECK(std::abs(h(kG, kP)) == doctest::Approx(p.a_cs * wc));
        CHECK(std::abs(h(kR, kE)) == doctest::Approx(wc));
        CHECK(std::abs(h(kG, kE)) == 0.0);
        CHECK(std::abs(h(kR, kP)) == 0.0);
    }

    SUBCASE("hermitian coupling block, anti-hermitian loss") {
        const complex<double> ws = std::polar(2e4, 0.7);
        const Eigen::Matrix4cd h = build_hamiltonian(1e6, ws, p);
        const Eigen::Matrix4cd anti = h - h.adjoint();
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                if (!((i == j) && (i == kE || i == kP)))
                    CHECK(std::abs(anti(i, j)) == 0.0);
        // signal coupling sits on the g-e element
        const Eigen::Matrix4cd hr = build_hamiltonian(1e6, complex<double>(2e4, 0.0), p);
        CHECK(hr(kG, kE) == complex<double>(2e4, 0.0));
        CHECK(hr(kG, kE) == std::conj(hr(kE, kG)));
    }
}

TEST_CASE("quasi_dark_state_numeric limits and scaling") {
    const CesiumParams p = CesiumParams::defaults();

    SUBCASE("no signal stores nothing") {
        const AtomicState4 s = numeric_dark_state(p, 0.0, 0.0);
        CHECK(std::abs(s.amps(kR)) < 1e-12);
        CHECK(std::norm(s.amps(kG)) > 1.0 - 1e-4);
        // p-admixture driven by the control alone
        const double omega_c = 1e-2 * p.gamma;
        const double expected =
            p.a_cs * omega_c / std::hypot(p.delta, p.gamma);
        CHECK(std::abs(s.amps(kP)) == doctest::Approx(expected).epsilon(1e-3));
        CHECK(s.amps(kG).imag() == 0.0);
        CHECK(s.amps(kG).real() > 0.0);
    }

    SUBCASE("eigenvalue metadata and loss scaling in omega_c") {
        const AtomicState4 full = numeric_dark_state(p, 0.0, 0.0, 1e-2);
        const AtomicState4 half = numeric_dark_state(p, 0.0, 0.0, 5e-3);
        REQUIRE(full.eigenvalue.has_value());
        REQUIRE(half.eigenvalue.has_value());
        CHECK(full.eigenvalue->imag() < 0.0);
        CHECK(full.eigenvalue->imag() / half.eigenvalue->imag() ==
              doctest::Approx(4.0).epsilon(0.01));
    }

    SUBCASE("overlap with the analytic state") {
        const double alpha = alpha_ellipticity(p);
        const AtomicState4 num = numeric_dark_state(p, 1e-3, 0.0);
        const AtomicState4 ana = quasi_dark_state_analytic(1e-3, 0.0, alpha);
        CHECK(overlap_defect(num, ana) <= 1e-4);
    }

    SUBCASE("defect drops by ~4x when Gamma/Delta is halved") {
        const AtomicState4 num1 = numeric_dark_state(p, 1e-3, 0.7);
        const AtomicState4 ana1 =
            quasi_dark_state_analytic(1e-3, 0.7, alpha_ellipticity(p));
        CesiumParams p2 = p;
        p2.delta *= 2.0;
        const AtomicState4 num2 = numeric_dark_state(p2, 1e-3, 0.7);
        const AtomicState4 ana2 =
            quasi_dark_state_analytic(1e-3, 0.7, alpha_ellipticity(p2));
        const double ratio = overlap_defect(num1, ana1) / overlap_defect(num2, ana2);
        CHECK(ratio >= 3.5);
        CHECK(ratio <= 4.5);
    }

    SUBCASE("degenerate spectrum is an error") {
        // Zero couplings leave the two ground states exactly degenerate.
        CHECK_THROWS_AS(quasi_dark_state_numeric(build_hamiltonian(0.0, 0.0, p)),
                        NumericalError);
    }

    SUBCASE("excited admixture bound in the signal-dominated regime") {
        // |amp_e|^2 + |amp_p|^2 < 10 eta^2 (G/D)^2 holds once the control is
        // weak enough that the p-admixture is signal-dominated.
        for (double eta : {1e-3, 3e-3, 1e-2}) {
            const AtomicState4 s = numeric_dark_state(p, eta, 1.1, eta);
            const double excited = std::norm(s.amps(kE)) + std::norm(s.amps(kP));
            const double god = p.gamma / p.delta;
            CHECK(excited < 10.0 * eta * eta * god * god);
        }
    }
}

TEST_CASE("quasi_dark_state_analytic") {
    SUBCASE("alpha = 0 is the ideal dark state") {
        const AtomicState4 s = quasi_dark_state_analytic(1e-3, 0.9, 0.0);
        const complex<double> ratio = s.amps(kR) / s.amps(kG);
        CHECK(std::abs(ratio) ==
              doctest::Approx(std::sqrt(2.0) * 1e-3).epsilon(1e-12));
        CHECK(std::arg(ratio) == doctest::Approx(0.9).epsilon(1e-12));
        CHECK(std::abs(s.amps(kE)) == 0.0);
        CHECK(std::abs(s.amps(kP)) == 0.0);
    }
    SUBCASE("eta = 0 is |g>") {
        const AtomicState4 s = quasi_dark_state_analytic(0.0, 0.3, 0.1);
        CHECK(s.amps(kG) == complex<double>(1.0, 0.0));
    }
    SUBCASE("worked point eta_l = 1e-3, phi_l = 0, alpha = 0.1") {
        const AtomicState4 s = quasi_dark_state_analytic(1e-3, 0.0, 0.1);
        const BlochOrientation b = bloch_from_state(s);
        // |w| = eta sqrt(1 + a^2 - 2a sin(2(phi-a))); the first-order
        // amplitude (without the a^2 term) would read 1.0197e-3.
        CHECK(b.eta_a == doctest::Approx(1.0245652083488938e-3).epsilon(1e-12));
        CHECK(b.phi_a == doctest::Approx(-0.4958033121555927).epsilon(1e-12));
    }
    SUBCASE("unit norm") {
        for (double eta : {0.0, 1e-3, 0.3}) {
            const AtomicState4 s = quasi_dark_state_analytic(eta, 1.0, 0.08);
            CHECK(s.amps.norm() == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("storage_map") {
    SUBCASE("alpha = 0 is the identity") {
        for (double phi = 0.0; phi < kTwoPi; phi += 0.1) {
            const BlochOrientation b = storage_map(1e-3, phi, 0.0);
            CHECK(b.eta_a == doctest::Approx(1e-3).epsilon(1e-14));
            CHECK(b.phi_a == doctest::Approx(phi).epsilon(1e-12));
        }
    }

    SUBCASE("extremes of the amplitude sit at phi_l - alpha = 3pi/4 and pi/4") {
        const double a = 0.1, eta = 1e-3;
        const BlochOrientation bmax = storage_map(eta, a + 3.0 * kPi / 4.0, a);
        const BlochOrientation bmin = storage_map(eta, a + kPi / 4.0, a);
        CHECK(bmax.eta_a == doctest::Approx(eta * (1.0 + a)).epsilon(1e-12));
        CHECK(bmin.eta_a == doctest::Approx(eta * (1.0 - a)).epsilon(1e-12));
        // scan confirms they are global extremes
        for (int i = 0; i < 720; ++i) {
            const double phi = kTwoPi * i / 720;
            const double e = storage_map(eta, phi, a).eta_a;
            CHECK(e <= bmax.eta_a * (1 + 1e-12));
            CHECK(e >= bmin.eta_a * (1 - 1e-12));
        }
    }

    SUBCASE("consistency with the analytic state at 1e-12") {
        for (double phi : {0.0, 1.0, kPi / 3.0, 4.4}) {
            const BlochOrientation via_state =
                bloch_from_state(quasi_dark_state_analytic(1e-3, phi, 0.065));
            const BlochOrientation direct = storage_map(1e-3, phi, 0.065);
            CHECK(via_state.eta_a == doctest::Approx(direct.eta_a).epsilon(1e-12));
            CHECK(std::abs(angle_difference(via_state.phi_a, direct.phi_a)) < 1e-12);
        }
    }

    SUBCASE("phi_a is strictly increasing and continuous") {
        for (double a : {0.05, 0.3, 0.9}) {
            double prev = storage_map(1e-3, -0.1, a).phi_a;
            for (double phi = -0.1 + 1e-3; phi < kTwoPi + 0.1; phi += 1e-3) {
                const double cur = storage_map(1e-3, phi, a).phi_a;
                CHECK(cur > prev);
                CHECK(cur - prev < 0.05);
                prev = cur;
            }
        }
    }

    SUBCASE("mean azimuthal lag over one period is 4 alpha") {
        // The constant -3a in the phase map plus the -a shift of the
        // eccentric anomaly: the grid mean of (phi_l - phi_a) is exactly
        // 4a. (The composed first-order transform's -6a offset = this 4a
        // plus the retrieval map's 2a.)
        const double a = 0.1;
        double mean = 0.0;
        const int n = 360;
        for (int i = 0; i < n; ++i) {
            const double phi = kTwoPi * i / n;
            mean += phi - storage_map(1e-3, phi, a).phi_a;
        }
        mean /= n;
        CHECK(mean == doctest::Approx(4.0 * a).epsilon(1e-9));
    }

    SUBCASE("ellipse geometry: axes eta(1 +- a), minor axis at pi/4 - 3a") {
        const double a = 0.1, eta = 1e-3;
        std::vector<double> xs, ys;
        for (int i = 0; i < 360; ++i) {
            const BlochOrientation b = storage_map(eta, kTwoPi * i / 360, a);
            xs.push_back(2.0 * b.s_x());
            ys.push_back(2.0 * b.s_y());
        }
        const EllipseFit fit = fit_ellipse(xs, ys);
        CHECK(fit.semi_major == doctest::Approx(eta * (1 + a)).epsilon(1e-9));
        CHECK(fit.semi_minor == doctest::Approx(eta * (1 - a)).epsilon(1e-9));
        CHECK(fit.rms_residual < 1e-10 * eta);
        CHECK(std::abs(angle_difference(fit.tilt_minor, kPi / 4 - 3 * a)) < 1e-9);
        CHECK(std::abs(fit.center_x) < 1e-15);
        CHECK(std::abs(fit.center_y) < 1e-15);
    }

    SUBCASE("domain guard") {
        CHECK_THROWS_AS(storage_map(1e-3, 0.0, 1.0), std::invalid_argument);
    }
}

TEST_CASE("bloch_from_state and BlochOrientation") {
    SUBCASE("ground state maps to the pole") {
        AtomicState4 g;
        g.amps << 1.0, 0.0, 0.0, 0.0;
        const BlochOrientation b = bloch_from_state(g);
        CHECK(b.eta_a == 0.0);
        CHECK(b.s_x() == 0.0);
        CHECK(b.s_y() == 0.0);
        CHECK(b.s_z() == 0.5);
    }
    SUBCASE("definition of the amplitude ratio") {
        AtomicState4 s;
        s.amps << 1.0, std::sqrt(2.0) * 1e-3, 0.0, 0.0;
        s.amps.normalize();
        const BlochOrientation b = bloch_from_state(s);
        CHECK(b.eta_a == doctest::Approx(1e-3).epsilon(1e-12));
        CHECK(b.phi_a == 0.0);
    }
    SUBCASE("fully inverted input rejected") {
        AtomicState4 r;
        r.amps << 0.0, 1.0, 0.0, 0.0;
        CHECK_THROWS_AS(bloch_from_state(r), std::invalid_argument);
    }
    SUBCASE("spin components and the quadrature identity") {
        for (double eta : {1e-3, 0.02}) {
            for (double phi : {0.0, 1.1, 4.0}) {
                BlochOrientation b;
                b.eta_a = eta;
                b.phi_a = phi;
                const double sq = 4.0 * (b.s_x() * b.s_x() + b.s_y() * b.s_y());
                CHECK(sq == doctest::Approx(eta * eta).epsilon(1e-12));
                const BlochOrientation back =
                    BlochOrientation::from_transverse_spin(b.s_x(), b.s_y());
                CHECK(back.eta_a == doctest::Approx(eta).epsilon(1e-12));
                CHECK(std::abs(angle_difference(back.phi_a, phi)) < 1e-12);
            }
        }
    }
}

TEST_CASE("numeric/analytic defect falls quadratically in Gamma/Delta") {
    // err(G/D) = 1 - |<num|ana>|^2 at eta_l = 1e-3; halving G/D divides the
    // defect by ~4 (second-order accuracy of the first-order state).
    CesiumParams p = CesiumParams::defaults();
    std::vector<double> defects;
    for (int k = 0; k < 2; ++k) {
        const AtomicState4 num = numeric_dark_state(p, 1e-3, 2.2);
        const AtomicState4 ana =
            quasi_dark_state_analytic(1e-3, 2.2, alpha_ellipticity(p));
        defects.push_back(overlap_defect(num, ana));
        p.delta *= 2.0;
    }
    const double ratio = defects[0] / defects[1];
    CHECK(ratio >= 3.5);
    CHECK(ratio <= 4.5);
}

TEST_CASE("LightState large-signal flag") {
    LightState weak{1e-3, 0.0, 1.0};
    LightState strong{0.2, 0.0, 1.0};
    CHECK_FALSE(weak.large_signal());
    CHECK(strong.large_signal());
}
