#pragma once

// Independent brute-force oracles used only by the test suites. Everything
// here goes out of its way NOT to share logic with the library: primality is
// decided by trial division over Gaussian divisors, counts by naive loops.

#include <cstdint>
#include <vector>

#include "gplab/expsum.hpp"
#include "gplab/gauss.hpp"
#include "gplab/hp.hpp"
#include "gplab/metrical.hpp"

namespace gplab::oracle {

// Gaussian primality by trial division: g is prime iff it is neither zero
// nor a unit and no d with 1 < norm(d) <= sqrt(norm(g)) divides it.
bool is_prime_trial(GaussInt g);

// Every Gaussian prime with 0 < norm <= max_norm, sorted by (norm, re, im).
std::vector<GaussInt> enumerate_primes_trial(int64_t max_norm);

// Rational Gaussian fraction with exact reduction, for continued-fraction
// back-evaluation.
struct GaussRat {
    GaussInt num{0, 0};
    GaussInt den{1, 0};

    void reduce();
    static GaussRat of(GaussInt g) { return {g, {1, 0}}; }
};
// a + 1/t
GaussRat cf_step(GaussInt a, const GaussRat& t);
// evaluates a_0 + 1/(a_1 + 1/(...)) exactly
GaussRat cf_evaluate(const std::vector<GaussInt>& quotients);
// fractions equal up to a unit
bool rat_equal(const GaussRat& x, const GaussRat& y);

// Sigma_c by a square-box double loop (membership decided per point).
int64_t sigma_count_naive(const ComplexHP& c, double z, double d1, double d2);

// E1(H) from its own definition: rational 1 <= |j| <= H, phases j Im(mnc).
double e1_reference(const ComplexHP& c, const TypeSumParams& p);
// E2(H): same with j Re(mnc) in the phase.
double e2_reference(const ComplexHP& c, const TypeSumParams& p);
// E3 by a literal quadruple loop over (j1, j2, m, n).
double e3_naive(const ComplexHP& c, const TypeSumParams& p);

// F1(H) from its own definition.
double f1_reference(const ComplexHP& c, const TypeSumParams& p, const CoeffFn& a,
                    const CoeffFn& b);
// F3 by a literal quadruple loop.
double f3_naive(const ComplexHP& c, const TypeSumParams& p, const CoeffFn& a, const CoeffFn& b);

// Row-closed-form evaluation of the full-sector linear sum: per m_re row the
// inner geometric sum over m_im is evaluated in closed form.
std::complex<double> linear_sum_rowform(const ComplexHP& kappa, double y_lo, double y_hi);

// F_N by naive loops: p over a trial-division prime list, r over the full
// prime list, q over a full lattice box.
int64_t count_f_n_naive(const std::vector<GaussInt>& primes, const ComplexHP& c, double epsilon,
                        double n_bound, const ComplexHP& alpha);

// T_P by a naive full-box loop.
int64_t t_p_naive(const ComplexHP& alpha, const ComplexHP& c, double p_scale, GaussInt d1,
                  GaussInt d2, double mu);

// Prime-factor count (with multiplicity) via rational trial division of the
// norm, written independently of the library.
int64_t omega_from_norm_trial(GaussInt w);
// Same by literal repeated Gaussian trial division; small norms only.
int64_t omega_gaussian_trial(GaussInt w);

// Two-prime-product count by naive loops and trial-division factor counting.
int64_t a_p_two_prime_naive(const ComplexHP& alpha, const ComplexHP& c, double p_scale,
                            double mu);

} // namespace gplab::oracle
