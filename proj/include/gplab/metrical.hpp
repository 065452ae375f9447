#pragma once

#include <optional>

#include <json.hpp>

#include "gplab/dioph.hpp"
#include "gplab/sieve.hpp"

namespace gplab {

// Parameters of the F_N / G_N counting experiment: the line constant c, the
// threshold exponent knob epsilon (eta = |p|^(epsilon - 1/12)), the radius
// bound N and the annulus (A, B) with the G_N constant C.
struct MetricalParams {
    ComplexHP c;
    double epsilon = 0.01;
    double n_bound = 0.0;
    double a_radius = 0.0;
    double b_radius = 0.0;
    double c_const = 1.0;

    void validate() const; // throws std::invalid_argument
};

// Number of triples (p, q, r): p prime with |p| <= N, r prime with
// |p alpha - r| <= |p|^(eps - 1/12), q lattice with |p c alpha - q| below the
// same threshold. r = p alpha coincidences count as solutions.
int64_t count_F_N(const PrimeTable& table, const MetricalParams& params, const ComplexHP& alpha,
                  int threads = 0);

// G_N(A, B) = C (A/B) N^(5/3 + 4 eps) / log^2 N
double g_n_value(const MetricalParams& params);

struct MonteCarloResult {
    double integral_estimate = 0.0;
    double rhs = 0.0;       // (g2 - g1)(b^2 - a^2) G_N(A, B)
    double stderr_est = 0.0;
    int64_t samples = 0;
    uint64_t seed = 0;
    bool degenerate = false; // rational constant or alpha = 0 seen

    nlohmann::json to_json() const;
};

// Monte-Carlo estimate of the double integral of F_N over the sector,
// uniform in (R, theta) to match the dR dtheta measure. Reports both sides
// of the integral inequality without a verdict (the constant C is
// existential).
MonteCarloResult monte_carlo_theo_i(const PrimeTable& table, const MetricalParams& params,
                                    const SectorAnnulus& sector, int64_t samples, uint64_t seed,
                                    int threads = 0);

// Parameters of the sieve-error counts T_P / E_P: the scale P, the moduli
// d1, d2, and the window width mu (defaults to (P/2)^(eps - 1/12); any value
// must stay below 1/2).
struct SieveErrorParams {
    double p_scale = 0.0;
    GaussInt d1{1, 0};
    GaussInt d2{1, 0};
    double epsilon = 0.01;
    std::optional<double> mu;
    ComplexHP alpha;

    double mu_value() const;
    void validate() const;
};

struct TpResult {
    int64_t t_p = 0;
    double main = 0.0; // 12 pi P^2 mu^4 / (|d1|^2 |d2|^2)
    double e_p = 0.0;  // t_p - main
    bool degenerate_alpha = false;

    nlohmann::json to_json() const;
};

// T_P(alpha; d1, d2): lattice n with P/(2|d1|) < |n| <= P/|d1|,
// ||n d1 alpha / d2|| <= mu/|d2| and ||n d1 c alpha|| <= mu.
TpResult t_p_and_e_p(const SieveErrorParams& sp, const ComplexHP& c, int threads = 0);

// Count of n with P/2 < |n| <= P, max(||n alpha||, ||n c alpha||) <= mu such
// that n * f(n alpha) is a product of exactly two Gaussian primes (with
// multiplicity, units disregarded).
int64_t a_p_two_prime_count(const SieveErrorParams& sp, const ComplexHP& c);

// Gaussian prime factors of w counted with multiplicity (units excluded).
int64_t gaussian_omega(GaussInt w);

// Lattice points in the closed disc |z - center| <= radius.
int64_t lattice_count_in_disc(const ComplexHP& center, double radius);
// Gaussian primes in the closed disc, found by direct primality testing.
int64_t prime_count_in_disc(const ComplexHP& center, double radius);

} // namespace gplab
