#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gplab/expsum.hpp"
#include "gplab/rng.hpp"
#include "oracles.hpp"

using namespace gplab;
using std::numbers::pi;

namespace {

ComplexHP sqrt2_i(mpfr_prec_t prec = 256) {
    return {RealHP::of_int(0, prec), RealHP::sqrt(RealHP::of_int(2, prec))};
}

ComplexHP irrational(uint64_t seed, uint64_t index, mpfr_prec_t prec = 256) {
    double a = 2.0 * u01(counter_rng(seed, index, 0)) - 1.0;
    double b = 2.0 * u01(counter_rng(seed, index, 1)) - 1.0;
    RealHP re = RealHP::of(a, prec) + RealHP::sqrt(RealHP::of_int(2, prec)) * RealHP::of(1e-3, prec);
    RealHP im = RealHP::of(b, prec) + RealHP::sqrt(RealHP::of_int(3, prec)) * RealHP::of(1e-3, prec);
    return {re, im};
}

} // namespace

TEST_CASE("vaaler examples") {
    VaalerParams j1{1, 1, 1};
    auto at_quarter = vaaler_eval(j1, 0.25);
    CHECK(at_quarter.psi == doctest::Approx(-0.25).epsilon(1e-14));
    // closed form at J = 1: psi*(x) = -sin(2 pi x)/(2 pi) since W(1/2) = 1/2
    CHECK(at_quarter.psi_star == doctest::Approx(-1.0 / (2.0 * pi)).epsilon(1e-13));

    for (int64_t j : {1, 4, 16, 64}) {
        VaalerParams vp{j, 1, 1};
        auto at_zero = vaaler_eval(vp, 0.0);
        CHECK(at_zero.sigma == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(at_zero.psi == doctest::Approx(-0.5));
    }
    CHECK_THROWS_AS(vaaler_eval(VaalerParams{0, 1, 1}, 0.1), std::invalid_argument);
}

TEST_CASE("vaaler envelope on a moderate grid") {
    for (int64_t j : {1, 4, 16}) {
        VaalerParams vp{j, 1, 1};
        for (int k = 0; k < 2000; ++k) {
            double x = static_cast<double>(k) / 2000.0;
            auto ev = vaaler_eval(vp, x);
            CHECK(ev.sigma >= -1e-12);
            CHECK(std::fabs(ev.psi_star - ev.psi) <= ev.sigma + 1e-12);
        }
    }
}

TEST_CASE("linear sum with kappa = 0 counts the region") {
    ComplexHP zero = ComplexHP::of(0.0, 0.0);
    LinearSumResult r = linear_expsum(zero, 4.0, 100.0, -pi, pi);
    // lattice points with 4 < norm <= 100
    int64_t expected = 0;
    for (int64_t a = -10; a <= 10; ++a)
        for (int64_t b = -10; b <= 10; ++b) {
            int64_t n = a * a + b * b;
            if (n > 4 && n <= 100) ++expected;
        }
    CHECK(r.exact.real() == doctest::Approx(static_cast<double>(expected)).epsilon(1e-12));
    CHECK(r.exact.imag() == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(r.terms == expected);
}

TEST_CASE("full-sector linear sums are real by symmetry") {
    for (int trial = 0; trial < 8; ++trial) {
        ComplexHP kappa = irrational(61, trial);
        LinearSumResult r = linear_expsum(kappa, 0.0, 400.0 + 100.0 * trial, -pi, pi);
        CHECK(std::fabs(r.exact.imag()) < 1e-9 * (1.0 + std::fabs(r.exact.real())));
    }
}

TEST_CASE("linear sum matches the row-geometric closed form on full sectors") {
    for (int trial = 0; trial < 10; ++trial) {
        ComplexHP kappa = irrational(67, trial);
        double y_hi = 200.0 + 700.0 * u01(counter_rng(68, trial, 0));
        double y_lo = trial % 2 == 0 ? 0.0 : y_hi * 0.4;
        LinearSumResult r = linear_expsum(kappa, y_lo, y_hi, -pi, pi);
        std::complex<double> want = oracle::linear_sum_rowform(kappa, y_lo, y_hi);
        CAPTURE(trial);
        CHECK(std::abs(r.exact - want) <= 1e-9 * (1.0 + std::abs(want)));
    }
}

TEST_CASE("linear bound audit over a quick randomized battery") {
    double max_ratio = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        ComplexHP kappa = irrational(71, trial);
        double y_hi = 16.0 + 2000.0 * u01(counter_rng(72, trial, 0));
        double y_lo = y_hi * 0.9 * u01(counter_rng(72, trial, 1));
        double f1 = -pi + 2.0 * pi * u01(counter_rng(72, trial, 2));
        double f2 = f1 + 2.0 * pi * std::max(0.05, u01(counter_rng(72, trial, 3)));
        if (f2 > f1 + 2.0 * pi) f2 = f1 + 2.0 * pi;
        LinearSumResult r = linear_expsum(kappa, y_lo, y_hi, f1, f2);
        double ratio = std::abs(r.exact) / r.bound;
        max_ratio = std::max(max_ratio, ratio);
        CHECK(ratio <= 16.0);
    }
    MESSAGE("max |exact|/bound ratio: ", max_ratio);
}

TEST_CASE("g_c_profile unit example") {
    // c = 0.1+0.2i, z = 1, y = 100: each unit contributes sqrt(5)*sqrt(10)
    ComplexHP c = ComplexHP::of(0.1, 0.2);
    // 1/c = 2-4i exactly, so q = 2-4i is a convergent denominator of c
    GcProfile prof = g_c_profile(c, 100.0, 1.0, {2, -4});
    CHECK(prof.exact == doctest::Approx(4.0 * std::sqrt(50.0)).epsilon(1e-9));
    CHECK(prof.terms == 4);

    GcProfile empty = g_c_profile(c, 100.0, 0.5, {2, -4});
    CHECK(empty.exact == 0.0);
}

TEST_CASE("g_c_profile bounds over convergents of i*sqrt2") {
    ComplexHP c = sqrt2_i();
    HurwitzExpansion exp = hurwitz_expansion(c, 16, 401.0);
    int cells = 0;
    for (const auto& [a, q] : exp.convergents) {
        (void)a;
        if (q.abs() > 20.0) break;
        double qn = static_cast<double>(q.norm64());
        for (double y : {4.0, 100.0, 2500.0}) {
            for (double zf : {0.12, 1.0, 4.0}) {
                GcProfile prof = g_c_profile(c, y, zf * qn, q);
                CAPTURE(q.re);
                CAPTURE(q.im);
                CAPTURE(y);
                CAPTURE(zf);
                CHECK(prof.exact <= 32.0 * prof.bound_general);
                if (prof.bound_small_z) CHECK(prof.exact <= 32.0 * *prof.bound_small_z);
                if (zf * qn <= qn / 8.0) CHECK(prof.bound_small_z.has_value());
                ++cells;
            }
        }
    }
    CHECK(cells >= 27);
}

TEST_CASE("e3 equals E1 at H2 = 1/2 and the naive quadruple loop") {
    ComplexHP c = irrational(73, 0);
    TypeSumParams p;
    p.x1 = 50.0;
    p.x2 = 400.0;
    p.m_max = 16.0;
    p.h1 = 2.0;
    p.h2 = 0.5;
    p.sector = SectorAnnulus::full_circle(1.0);

    double via_e3 = e3_exact(c, p);
    double via_e1 = oracle::e1_reference(c, p);
    CHECK(via_e3 == doctest::Approx(via_e1).epsilon(1e-9));

    p.h2 = 2.0;
    double full = e3_exact(c, p);
    double naive = oracle::e3_naive(c, p);
    CHECK(full == doctest::Approx(naive).epsilon(1e-9));
}

TEST_CASE("e3 on an empty window is zero") {
    ComplexHP c = irrational(73, 1);
    TypeSumParams p;
    p.x1 = 400.0;
    p.x2 = 400.0;
    p.m_max = 16.0;
    p.h1 = 2.0;
    p.h2 = 2.0;
    CHECK(e3_exact(c, p) == 0.0);
}

TEST_CASE("rotation identity: E2 over a sector equals E1 over the shifted sector") {
    ComplexHP c = irrational(73, 2);
    TypeSumParams p;
    p.x1 = 30.0;
    p.x2 = 300.0;
    p.m_max = 10.0;
    p.h1 = 2.0;
    p.h2 = 0.5;
    p.sector = {0.0, 1.0, -2.0, 0.7};

    double e2 = oracle::e2_reference(c, p);
    TypeSumParams shifted = p;
    shifted.sector = {0.0, 1.0, -2.0 + pi / 2.0, 0.7 + pi / 2.0};
    double e1 = oracle::e1_reference(c, shifted);
    CHECK(e2 == doctest::Approx(e1).epsilon(1e-9));
}

TEST_CASE("budget errors are reported") {
    ComplexHP c = irrational(73, 3);
    TypeSumParams p;
    p.x1 = 0.0;
    p.x2 = 1e7;
    p.m_max = 1e4;
    p.h1 = 8.0;
    p.h2 = 8.0;
    p.work_budget = 1000;
    CHECK_THROWS_AS(e3_exact(c, p), budget_error);
}

TEST_CASE("f3 equals F1 at H2 = 1/2 and the naive loop, unit coefficients") {
    ComplexHP c = irrational(79, 0);
    TypeSumParams p;
    p.x1 = 512.0;
    p.x2 = 4096.0;
    p.alpha = 1.0 / 3.0;
    p.beta = 0.5;
    p.m_max = 17.0;
    p.h1 = 2.0;
    p.h2 = 0.5;
    p.delta = 0.3;

    double via_f3 = f3_exact(c, p, unit_coeffs(), unit_coeffs());
    double via_f1 = oracle::f1_reference(c, p, unit_coeffs(), unit_coeffs());
    CHECK(via_f3 == doctest::Approx(via_f1).epsilon(1e-9));

    p.h2 = 2.0;
    double full = f3_exact(c, p, unit_coeffs(), unit_coeffs());
    double naive = oracle::f3_naive(c, p, unit_coeffs(), unit_coeffs());
    CHECK(full == doctest::Approx(naive).epsilon(1e-9));
}

TEST_CASE("f3 with adversarial +-1 coefficients still matches the naive loop") {
    ComplexHP c = irrational(79, 1);
    TypeSumParams p;
    p.x1 = 256.0;
    p.x2 = 2048.0;
    p.alpha = 1.0 / 3.0;
    p.beta = 0.5;
    p.m_max = 14.0;
    p.h1 = 2.0;
    p.h2 = 2.0;
    p.delta = 0.4;
    CoeffFn a = pm1_coeffs(1234);
    CoeffFn b = pm1_coeffs(9876);
    CHECK(f3_exact(c, p, a, b) ==
          doctest::Approx(oracle::f3_naive(c, p, a, b)).epsilon(1e-9));
    // coefficients really are +-1 and deterministic
    CHECK(std::abs(a({3, -2})) == doctest::Approx(1.0));
    CHECK(a({3, -2}) == a({3, -2}));
}

TEST_CASE("f3 with an unreachable delta is zero") {
    ComplexHP c = sqrt2_i();
    TypeSumParams p;
    p.x1 = 64.0;
    p.x2 = 512.0;
    p.alpha = 0.3;
    p.beta = 0.5;
    p.m_max = 7.0;
    p.h1 = 1.0;
    p.h2 = 1.0;
    p.delta = 1e-9;
    CHECK(f3_exact(c, p, unit_coeffs(), unit_coeffs()) == 0.0);
}

TEST_CASE("e3/f3 results are independent of the worker count") {
    ComplexHP c = irrational(83, 0);
    TypeSumParams p;
    p.x1 = 100.0;
    p.x2 = 900.0;
    p.m_max = 12.0;
    p.h1 = 2.0;
    p.h2 = 2.0;
    double v1 = e3_exact(c, p, 1);
    double v4 = e3_exact(c, p, 4);
    CHECK(v1 == v4); // bitwise: per-j slots reduced in fixed order

    p.delta = 0.35;
    double w1 = f3_exact(c, p, unit_coeffs(), unit_coeffs(), 1);
    double w4 = f3_exact(c, p, unit_coeffs(), unit_coeffs(), 4);
    CHECK(w1 == w4);
}

TEST_CASE("type_sum_report at the |q| = 2 scale point") {
    // engineered constant with q_1 = 2: c = 1/(2 + i/sqrt(8)) has z_1 = 2 + i/sqrt(8)
    mpfr_prec_t prec = 256;
    RealHP inv_s8 = RealHP::of_int(1, prec) / RealHP::sqrt(RealHP::of_int(8, prec));
    ComplexHP z1{RealHP::of_int(2, prec), inv_s8};
    ComplexHP c = z1.reciprocal();
    HurwitzExpansion exp = hurwitz_expansion(c, 8, 100.0);
    REQUIRE(exp.convergents.size() >= 2);
    auto [a, q] = exp.convergents[1];
    REQUIRE(q.norm64() == 4);

    TypeSumReport rep = type_sum_report(c, q, a, 0.3, 0.01, -pi, pi);
    CHECK(rep.x2 == 4096.0);
    CHECK(rep.m_max == 256.0);
    CHECK(std::fabs(static_cast<double>(rep.lhs_type1) - rep.main_type1) <=
          32.0 * rep.budget_type1);
    CHECK(std::fabs(static_cast<double>(rep.lhs_type2) - rep.main_type2) <=
          32.0 * rep.budget_type2);
    CHECK(rep.lhs_type1 > 0);
    CHECK(rep.lhs_type2 > 0);
}

TEST_CASE("type_sum_report saturates at delta = 1/2") {
    mpfr_prec_t prec = 256;
    RealHP inv_s8 = RealHP::of_int(1, prec) / RealHP::sqrt(RealHP::of_int(8, prec));
    ComplexHP c = ComplexHP{RealHP::of_int(2, prec), inv_s8}.reciprocal();
    HurwitzExpansion exp = hurwitz_expansion(c, 8, 100.0);
    auto [a, q] = exp.convergents[1];
    TypeSumReport rep = type_sum_report(c, q, a, 0.5, 0.01, -pi, pi);
    CHECK(static_cast<double>(rep.lhs_type1) == rep.main_type1);
    CHECK(static_cast<double>(rep.lhs_type2) == rep.main_type2);
}

TEST_CASE("type_sum_report on an empty window is all zeros") {
    mpfr_prec_t prec = 256;
    RealHP inv_s8 = RealHP::of_int(1, prec) / RealHP::sqrt(RealHP::of_int(8, prec));
    ComplexHP c = ComplexHP{RealHP::of_int(2, prec), inv_s8}.reciprocal();
    HurwitzExpansion exp = hurwitz_expansion(c, 8, 100.0);
    auto [a, q] = exp.convergents[1];
    TypeSumReport rep = type_sum_report(c, q, a, 0.3, 0.01, -pi, pi, 4096.0);
    CHECK(rep.lhs_type1 == 0);
    CHECK(rep.main_type1 == 0.0);
    CHECK(rep.lhs_type2 == 0);
    CHECK(rep.main_type2 == 0.0);
}
