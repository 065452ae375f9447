#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gplab/gauss.hpp"
#include "gplab/rng.hpp"
#include "oracles.hpp"

using namespace gplab;

TEST_CASE("RealHP basics") {
    RealHP x = RealHP::parse("0.1", 256);
    CHECK(x.prec() == 256);
    CHECK(x.to_double() == doctest::Approx(0.1));
    CHECK_THROWS_AS(RealHP::parse("nonsense"), std::invalid_argument);

    // round-trip through the decimal string
    RealHP y = RealHP::parse(x.str(), 256);
    CHECK(y == x);

    CHECK(RealHP::of(-0.2).dist_to_int().to_double() == doctest::Approx(0.2));
    CHECK(RealHP::of(2.5).dist_to_int().to_double() == doctest::Approx(0.5));
    CHECK(RealHP::of(-0.2).frac01().to_double() == doctest::Approx(0.8));
}

TEST_CASE("nearest integer ties round half toward +inf") {
    CHECK(RealHP::of(1.5).to_long_nearest() == 2);
    CHECK(RealHP::of(2.5).to_long_nearest() == 3);
    CHECK(RealHP::of(-0.5).to_long_nearest() == 0);
    CHECK(RealHP::of(-2.5).to_long_nearest() == -2);
    CHECK(RealHP::of(0.49999999).to_long_nearest() == 0);
}

TEST_CASE("is_gaussian_prime on the stated examples") {
    CHECK(is_gaussian_prime({1, 1}));
    CHECK(is_gaussian_prime({3, 0}));
    CHECK_FALSE(is_gaussian_prime({5, 0}));
    CHECK_FALSE(is_gaussian_prime({1, 0}));
    CHECK_FALSE(is_gaussian_prime({0, 1}));
    CHECK(is_gaussian_prime({0, -3}));
    CHECK(is_gaussian_prime({2, 1}));
    CHECK_FALSE(is_gaussian_prime({2, 2}));
    CHECK_THROWS_AS(is_gaussian_prime({0, 0}), std::invalid_argument);
}

TEST_CASE("primality agrees with trial division up to norm 2000") {
    for (int64_t a = -44; a <= 44; ++a) {
        for (int64_t b = -44; b <= 44; ++b) {
            GaussInt g{a, b};
            if (g.is_zero() || g.norm() > 2000) continue;
            CAPTURE(a);
            CAPTURE(b);
            CHECK(is_gaussian_prime(g) == oracle::is_prime_trial(g));
        }
    }
}

TEST_CASE("norm is multiplicative on random pairs") {
    for (int trial = 0; trial < 10000; ++trial) {
        auto r = [&](int lane) {
            return static_cast<int64_t>(counter_rng(99, trial, lane) % 20001) - 10000;
        };
        GaussInt a{r(0), r(1)}, b{r(2), r(3)};
        CHECK(a.norm() * b.norm() == (a * b).norm());
    }
}

TEST_CASE("checked arithmetic rejects overflow") {
    GaussInt big{int64_t{1} << 62, 0};
    CHECK_THROWS_AS(big * GaussInt(4, 0), std::overflow_error);
    CHECK_THROWS_AS(big + big, std::overflow_error);
    CHECK_NOTHROW(big + GaussInt(1, 1));
}

TEST_CASE("gcd examples") {
    CHECK(gaussian_gcd({5, 0}, {2, 1}) == GaussInt{2, 1});
    CHECK(gaussian_gcd({3, 0}, {7, 0}) == GaussInt{1, 0});
    CHECK(gaussian_gcd({1, 1}, {2, 0}) == GaussInt{1, 1});
    CHECK_THROWS_AS(gaussian_gcd({0, 0}, {0, 0}), std::invalid_argument);
}

TEST_CASE("gcd contract on random instances") {
    for (int trial = 0; trial < 2000; ++trial) {
        auto r = [&](int lane) {
            return static_cast<int64_t>(counter_rng(7, trial, lane) % 81) - 40;
        };
        GaussInt d{r(0), r(1)}, x{r(2), r(3)}, y{r(4), r(5)};
        if (d.is_zero()) d = {1, 2};
        GaussInt a = d * x, b = d * y;
        if (a.is_zero() && b.is_zero()) continue;
        GaussInt g = gaussian_gcd(a, b);
        CAPTURE(trial);
        // g divides both inputs, and the common divisor d divides g
        if (!a.is_zero()) CHECK(divides(g, a));
        if (!b.is_zero()) CHECK(divides(g, b));
        CHECK(divides(d, g));
        // canonical representative
        CHECK(g.re > 0);
        CHECK(g.im >= 0);
    }
}

TEST_CASE("canonical associate is a fixed point of the unit orbit") {
    GaussInt g{3, -7};
    GaussInt c = g.canonical();
    GaussInt u = g;
    for (int k = 0; k < 4; ++k) {
        CHECK(u.canonical() == c);
        u = u.mul_i();
    }
    CHECK(GaussInt{0, 3}.canonical() == GaussInt{3, 0});
    CHECK(GaussInt{0, -1}.canonical() == GaussInt{1, 0});
}

TEST_CASE("nearest_and_dist examples") {
    auto r1 = nearest_and_dist(ComplexHP::of(0.3, 0.4));
    CHECK(r1.nearest == GaussInt{0, 0});
    CHECK(r1.sup_dist == doctest::Approx(0.4));
    CHECK(r1.euclid_dist == doctest::Approx(0.5));

    auto r2 = nearest_and_dist(ComplexHP::of(1.5, 2.5));
    CHECK(r2.nearest == GaussInt{2, 3});
    CHECK(r2.sup_dist == doctest::Approx(0.5));
    CHECK(r2.euclid_dist == doctest::Approx(0.5 * std::sqrt(2.0)));

    auto r3 = nearest_and_dist(ComplexHP::of(-0.2, 0.9));
    CHECK(r3.nearest == GaussInt{0, 1});
    CHECK(r3.sup_dist == doctest::Approx(0.2));
    CHECK(r3.euclid_dist == doctest::Approx(std::sqrt(0.05)));
}

TEST_CASE("nearest point minimizes the sup distance over the 3x3 neighborhood") {
    for (int trial = 0; trial < 3000; ++trial) {
        double x = 20.0 * u01(counter_rng(3, trial, 0)) - 10.0;
        double y = 20.0 * u01(counter_rng(3, trial, 1)) - 10.0;
        ComplexHP z = ComplexHP::of(x, y);
        auto res = nearest_and_dist(z);
        CHECK(res.sup_dist <= 0.5 + 1e-15);
        for (int64_t da = -1; da <= 1; ++da) {
            for (int64_t db = -1; db <= 1; ++db) {
                GaussInt cand = res.nearest + GaussInt{da, db};
                double sup = std::max(std::fabs(x - static_cast<double>(cand.re)),
                                      std::fabs(y - static_cast<double>(cand.im)));
                CHECK(res.sup_dist <= sup + 1e-12);
            }
        }
    }
}

TEST_CASE("two_squares decomposes every split prime up to 1e5") {
    auto [a, b] = two_squares(5);
    CHECK(a == 2);
    CHECK(b == 1);
    for (uint64_t p = 5; p <= 100000; p += 4) {
        if (!is_prime_u64(p)) continue;
        auto [x, y] = two_squares(p);
        CAPTURE(p);
        REQUIRE(x * x + y * y == p);
        REQUIRE(x > y);
        REQUIRE(y > 0);
    }
    CHECK_THROWS_AS(two_squares(7), std::invalid_argument);
}

TEST_CASE("rounding and gcd guard the 64-bit range") {
    CHECK_THROWS_AS(RealHP::of(1e20).to_long_nearest(), std::overflow_error);
    GaussInt huge{int64_t{1} << 62, 1};
    CHECK_THROWS_AS(gaussian_gcd(huge, {3, 1}), std::overflow_error);
    CHECK_THROWS_AS(GaussInt(int64_t{3} << 62, 0).norm64(), std::overflow_error);
}
