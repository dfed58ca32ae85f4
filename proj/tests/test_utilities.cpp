#include <doctest.h>

#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "serf/angles.hpp"
#include "serf/constants.hpp"
#include "serf/ellipse_fit.hpp"
#include "serf/philox.hpp"

using namespace serf;

TEST_CASE("scaled_tan_angle reduces to identity at k = 1") {
    for (double x = -7.0; x <= 7.0; x += 0.037) {
        CHECK(scaled_tan_angle(1.0, x) == doctest::Approx(x).epsilon(1e-14));
    }
}

TEST_CASE("scaled_tan_angle is continuous and monotone through the poles") {
    const double k = 0.7;
    double prev = scaled_tan_angle(k, -10.0);
    for (double x = -10.0 + 1e-3; x <= 10.0; x += 1e-3) {
        const double cur = scaled_tan_angle(k, x);
        CHECK(cur > prev);
        CHECK(cur - prev < 3e-3);  // no branch jumps
        prev = cur;
    }
}

TEST_CASE("scaled_tan_angle shifts by pi per period and is odd") {
    const double k = 0.82;
    for (double x : {0.3, 1.2, 2.9}) {
        CHECK(scaled_tan_angle(k, x + kPi) ==
              doctest::Approx(scaled_tan_angle(k, x) + kPi).epsilon(1e-14));
        CHECK(scaled_tan_angle(k, -x) ==
              doctest::Approx(-scaled_tan_angle(k, x)).epsilon(1e-14));
    }
    // exact at the former tangent poles
    CHECK(scaled_tan_angle(k, kPi / 2) == doctest::Approx(kPi / 2));
    CHECK(std::isfinite(scaled_tan_angle(k, 3 * kPi / 2)));
}

TEST_CASE("principal_angle wraps into (-pi, pi]") {
    CHECK(principal_angle(kPi) == doctest::Approx(kPi));
    CHECK(principal_angle(-kPi) == doctest::Approx(kPi));
    CHECK(principal_angle(3 * kPi) == doctest::Approx(kPi));
    CHECK(principal_angle(0.4 + 6 * kPi) == doctest::Approx(0.4));
    CHECK(angle_difference(0.1, 0.3) == doctest::Approx(-0.2));
}

TEST_CASE("philox4x64 matches the reference generator") {
    // Reference outputs from the standard Philox4x64-10 parameterization
    // (identical to numpy.random.Philox raw streams).
    Philox4x64 rng(0);
    const std::uint64_t expected_key0[8] = {
        0x02f4ba6408e4d89bULL, 0x3dd62b0b9ca8c5b2ULL, 0x1c8667a55d902e79ULL,
        0x907d7a052fd5b4dcULL, 0x809bf322883987c3ULL, 0x471128b9e807f7ddULL,
        0xf250ba0dbec065b7ULL, 0xfc6ed66767a457bcULL};
    for (std::uint64_t e : expected_key0) CHECK(rng.next_u64() == e);

    Philox4x64 rng2(0xdeadbeefcafebabeULL);
    CHECK(rng2.next_u64() == 0xc15b325be5b6c6e8ULL);
    CHECK(rng2.next_u64() == 0x1c148a136ff8a268ULL);

    Philox4x64 rng3(0x0123456789abcdefULL, 0xfedcba9876543210ULL);
    rng3.set_counter(5, 6, 7, 8);
    CHECK(rng3.next_u64() == 0x2398a7f3eb524740ULL);
    CHECK(rng3.next_u64() == 0xaf849716eb8afa44ULL);
    CHECK(rng3.next_u64() == 0xcb2980abf0bfaf33ULL);
    CHECK(rng3.next_u64() == 0x621215e64f5824c5ULL);
}

TEST_CASE("philox uniform and exponential draws are sane and deterministic") {
    Philox4x64 a(42), b(42), c(43);
    double mean = 0.0;
    bool differs = false;
    for (int i = 0; i < 4096; ++i) {
        const double u = a.next_double();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        mean += u;
        const double v = b.next_double();
        CHECK(u == v);
        if (u != c.next_double()) differs = true;
    }
    CHECK(mean / 4096 == doctest::Approx(0.5).epsilon(0.03));
    CHECK(differs);

    Philox4x64 d(7);
    double emean = 0.0;
    for (int i = 0; i < 4096; ++i) {
        const double x = d.next_exponential(50.0);
        CHECK(x > 0.0);
        emean += x;
    }
    CHECK(emean / 4096 == doctest::Approx(1.0 / 50.0).epsilon(0.05));
}

TEST_CASE("philox next_below covers the range uniformly") {
    Philox4x64 rng(11);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 2000; ++i) {
        const std::uint64_t k = rng.next_below(7);
        CHECK(k < 7);
        seen.insert(k);
    }
    CHECK(seen.size() == 7);
}

TEST_CASE("fit_ellipse recovers a synthetic ellipse near machine precision") {
    const double a = 1.3e-3, b = 0.7e-3, tilt = 0.4, cx = 2e-4, cy = -1e-4;
    std::vector<double> xs, ys;
    for (int i = 0; i < 240; ++i) {
        const double u = kTwoPi * i / 240;
        const double ex = a * std::cos(u), ey = b * std::sin(u);
        xs.push_back(cx + ex * std::cos(tilt) - ey * std::sin(tilt));
        ys.push_back(cy + ex * std::sin(tilt) + ey * std::cos(tilt));
    }
    const EllipseFit fit = fit_ellipse(xs, ys);
    CHECK(fit.semi_major == doctest::Approx(a).epsilon(1e-12));
    CHECK(fit.semi_minor == doctest::Approx(b).epsilon(1e-12));
    CHECK(fit.tilt_major == doctest::Approx(tilt).epsilon(1e-10));
    CHECK(fit.center_x == doctest::Approx(cx).epsilon(1e-9));
    CHECK(fit.center_y == doctest::Approx(cy).epsilon(1e-9));
    CHECK(fit.rms_residual < 1e-15);
    CHECK(std::abs(angle_difference(fit.tilt_minor, tilt + kPi / 2)) < 1e-10);
}

TEST_CASE("fit_ellipse rejects degenerate input") {
    std::vector<double> xs = {0, 1, 2, 3, 4, 5};
    std::vector<double> ys = {0, 1, 2, 3, 4, 5};  // collinear
    CHECK_THROWS_AS(fit_ellipse(xs, ys), std::invalid_argument);
    std::vector<double> tiny = {0, 1};
    CHECK_THROWS_AS(fit_ellipse(tiny, tiny), std::invalid_argument);
}
