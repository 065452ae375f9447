#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gplab/hurwitz.hpp"
#include "gplab/rng.hpp"
#include "oracles.hpp"

using namespace gplab;

namespace {

ComplexHP sqrt2_i(mpfr_prec_t prec = 256) {
    return {RealHP::of_int(0, prec), RealHP::sqrt(RealHP::of_int(2, prec))};
}

std::vector<ComplexHP> test_constants(mpfr_prec_t prec = 256) {
    std::vector<ComplexHP> out;
    out.push_back(sqrt2_i(prec));
    out.push_back({RealHP::sqrt(RealHP::of_int(3, prec)).add_int(-1),
                   RealHP::sqrt(RealHP::of_int(5, prec)).add_int(-2)});
    out.push_back({RealHP::of_int(1, prec) / RealHP::pi(prec),
                   RealHP::sqrt(RealHP::of_int(7, prec)).add_int(-2)});
    out.push_back({RealHP::sqrt(RealHP::of_int(11, prec)).add_int(-3),
                   RealHP::of_int(1, prec) / RealHP::sqrt(RealHP::of_int(13, prec))});
    out.push_back({RealHP::sqrt(RealHP::of_int(6, prec)).add_int(-2),
                   RealHP::sqrt(RealHP::of_int(10, prec)).add_int(-3)});
    return out;
}

} // namespace

TEST_CASE("c = i terminates immediately") {
    HurwitzExpansion exp = hurwitz_expansion(ComplexHP::of(0.0, 1.0), 8);
    CHECK(exp.terminated);
    REQUIRE(exp.quotients.size() == 1);
    CHECK(exp.quotients[0] == GaussInt{0, 1});
}

TEST_CASE("c = 0.5 + 1.5i gives quotients [1+2i, -1+i]") {
    HurwitzExpansion exp = hurwitz_expansion(ComplexHP::of(0.5, 1.5), 8);
    CHECK(exp.terminated);
    REQUIRE(exp.quotients.size() == 2);
    CHECK(exp.quotients[0] == GaussInt{1, 2});
    CHECK(exp.quotients[1] == GaussInt{-1, 1});
    // a0 + 1/a1 reproduces c exactly: (a0*a1 + 1)/a1 = (1/2, 3/2)
    oracle::GaussRat value = oracle::cf_evaluate(exp.quotients);
    CHECK(oracle::rat_equal(value, oracle::GaussRat{{1, 3}, {2, 0}}));
}

TEST_CASE("approximation invariant for i*sqrt(2), five terms") {
    ComplexHP c = sqrt2_i();
    HurwitzExpansion exp = hurwitz_expansion(c, 5);
    CHECK(exp.convergents.size() >= 4);
    for (const auto& [p, q] : exp.convergents) {
        // extended-precision oracle: |c - p/q| * |q|^2 <= 1
        ComplexHP diff = c - div(to_complex_hp(p, c.prec()), q);
        RealHP defect = diff.abs_hp() * RealHP::of_int(static_cast<long>(q.norm64()), c.prec());
        CHECK(defect.cmp(1.0) <= 0);
    }
}

TEST_CASE("recurrence reconstruction in exact rational arithmetic") {
    for (const ComplexHP& c : test_constants()) {
        HurwitzExpansion exp = hurwitz_expansion(c, 10, 1e8);
        REQUIRE(exp.quotients.size() >= 3);
        for (size_t n = 0; n < exp.convergents.size(); ++n) {
            std::vector<GaussInt> head(exp.quotients.begin(), exp.quotients.begin() + n + 1);
            oracle::GaussRat value = oracle::cf_evaluate(head);
            oracle::GaussRat conv{exp.convergents[n].first, exp.convergents[n].second};
            CAPTURE(n);
            CHECK(oracle::rat_equal(value, conv));
        }
    }
}

TEST_CASE("denominator norms increase strictly and pairs are coprime") {
    for (const ComplexHP& c : test_constants()) {
        HurwitzExpansion exp = hurwitz_expansion(c, 24, 1e10);
        unsigned __int128 prev = 0;
        for (const auto& [p, q] : exp.convergents) {
            CHECK(q.norm() > prev);
            prev = q.norm();
            CHECK(gaussian_gcd(p, q).is_unit());
        }
    }
}

TEST_CASE("defect stays below one for all stored convergents of the test battery") {
    for (const ComplexHP& c : test_constants()) {
        HurwitzExpansion exp = hurwitz_expansion(c, 40, 1e12);
        CHECK(exp.convergents.size() >= 5);
        for (const auto& [p, q] : exp.convergents)
            CHECK(convergent_defect(c, p, q).cmp(1.0) <= 0);
    }
}

TEST_CASE("defect and monotonicity over a randomized constant battery") {
    for (int trial = 0; trial < 40; ++trial) {
        double a = 4.0 * u01(counter_rng(1001, trial, 0)) - 2.0;
        double b = 4.0 * u01(counter_rng(1001, trial, 1)) - 2.0;
        ComplexHP c = ComplexHP::of(a, b, 256);
        HurwitzExpansion exp = hurwitz_expansion(c, 48, 1e8);
        CAPTURE(trial);
        unsigned __int128 prev = 0;
        for (const auto& [p, q] : exp.convergents) {
            REQUIRE(convergent_defect(c, p, q).cmp(1.0) <= 0);
            REQUIRE(q.norm() > prev);
            prev = q.norm();
        }
    }
}

TEST_CASE("precision exhaustion is a distinct loud failure") {
    ComplexHP c = sqrt2_i(48); // far too small for deep expansion
    CHECK_THROWS_AS(hurwitz_expansion(c, 40, 1e14), precision_error);
}

TEST_CASE("require_convergent accepts convergents and rejects non-convergents") {
    ComplexHP c = sqrt2_i();
    HurwitzExpansion exp = hurwitz_expansion(c, 8);
    auto [p, q] = exp.convergents.at(2);
    CHECK_NOTHROW(require_convergent(c, p, q));
    CHECK_THROWS_AS(require_convergent(c, p + GaussInt{5, 5}, q), std::invalid_argument);
}

TEST_CASE("expansion serializes to the documented JSON shape") {
    HurwitzExpansion exp = hurwitz_expansion(sqrt2_i(), 4);
    nlohmann::json j = exp.to_json();
    CHECK(j["constant"].is_array());
    CHECK(j["constant"].size() == 2);
    CHECK(j["quotients"].is_array());
    CHECK(j["quotients"][0].size() == 2);
    CHECK(j["convergents"][0].size() == 2);
    CHECK(j["convergents"][0][0].size() == 2);
    CHECK(j["terminated"] == false);
    // i*sqrt2 starts with a0 = i, q1 = -2i
    CHECK(j["quotients"][0][0] == 0);
    CHECK(j["quotients"][0][1] == 1);
}

TEST_CASE("min_q_norm stops after storing the crossing convergent") {
    ComplexHP c = sqrt2_i();
    HurwitzExpansion exp = hurwitz_expansion(c, 64, 100.0);
    REQUIRE_FALSE(exp.convergents.empty());
    // the last stored convergent is the first with |q|^2 >= 100, all earlier
    // ones are strictly below
    CHECK(static_cast<double>(exp.convergents.back().second.norm()) >= 100.0);
    for (size_t k = 0; k + 1 < exp.convergents.size(); ++k)
        CHECK(static_cast<double>(exp.convergents[k].second.norm()) < 100.0);
}

TEST_CASE("rational test double: expansion of a convergent fraction terminates") {
    // c = (1+3i)/(2) from the 0.5+1.5i example
    ComplexHP c = ComplexHP::of(0.5, 1.5);
    HurwitzExpansion exp = hurwitz_expansion(c, 16);
    CHECK(exp.terminated);
}
