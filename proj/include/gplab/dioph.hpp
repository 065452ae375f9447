#pragma once

#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "gplab/hurwitz.hpp"
#include "gplab/sieve.hpp"

namespace gplab {

enum class DistMetric { kSup, kEuclid };

// Argument bundle for the constrained prime counts pi_c / pi*_c / S_c:
// an annulus sector, a distance threshold, and the metric. When norm_window
// is set it replaces the radial condition by x1 < norm(p) <= x2.
struct ConstraintQuery {
    SectorAnnulus region;
    double delta = 0.5;
    DistMetric metric = DistMetric::kSup;
    std::optional<std::pair<double, double>> norm_window;

    void validate() const; // throws std::invalid_argument
};

// dist(p*c, Z[i]) <= delta under the metric. Computed at the working
// precision of c; decisions within 1e-15 of the threshold are re-made at
// doubled precision.
bool constraint_holds(const ComplexHP& c, GaussInt p, double delta, DistMetric metric);
// ||Im(nc)|| <= delta_im and ||Re(nc)|| <= delta_re, same escalation rule.
bool axis_dists_within(const ComplexHP& c, GaussInt n, double delta_im, double delta_re);

// Exact count of table primes in the query window with dist(p*c) <= delta.
int64_t count_constrained_primes(const PrimeTable& table, const ComplexHP& c,
                                 const ConstraintQuery& query, int threads = 0);
// Same window without the distance constraint.
int64_t count_primes_plain(const PrimeTable& table, const ConstraintQuery& query);

// pi_c(delta) >= pi*_c(delta/sqrt(2)); must hold for every query.
bool relation_check_pi_star(const PrimeTable& table, const ComplexHP& c,
                            const ConstraintQuery& query);

// Sigma_c(z, d1, d2): lattice n with 0 < norm(n) <= z, ||Im(nc)|| <= d1,
// ||Re(nc)|| <= d2.
int64_t sigma_count(const ComplexHP& c, double z, double delta1, double delta2);

struct SpacingAudit {
    double min_pair_dist = 0.0; // +inf when the box holds at most one point
    double dist2_bound = 0.0;   // 1/(2 sqrt(2) |q|)
    bool pair_bound_ok = false;
    bool zero_window_ok = false;
    double zero_window_delta = 0.0;

    nlohmann::json to_json() const;
};

// Verifies (a, q) is a convergent pair of c, then audits the spacing of the
// points n*c mod 1: minimum sup-distance over distinct pairs in a box of
// side |q|/4, and emptiness of Sigma_c(|q|^2/8, D, D) just below 1/(sqrt8 |q|).
SpacingAudit spacing_audit(const ComplexHP& c, GaussInt q, GaussInt a);

// Elements of the set with no Gaussian-prime factor of norm <= z, decided by
// factorization of the element norms over rational primes.
int64_t sieve_count_S(std::span<const GaussInt> elements, double z);

// Scales N_k = norm(q_k)^6 (that is |q_k|^12) from the Hurwitz denominators.
struct ScaleSchedule {
    struct Scale {
        GaussInt q;
        int64_t n_k = 0; // norm(q)^6
        int64_t m_k = 0; // norm(q)^3 = sqrt(N_k)
    };

    ComplexHP c;
    std::vector<Scale> scales;
    bool rational_constant = false;

    static ScaleSchedule build(const ComplexHP& c, int64_t max_n_k);
};

struct EquidReport {
    int64_t observed = 0;  // S_c
    int64_t baseline = 0;  // S
    double predicted = 0.0; // 4 delta^2 S
    double ratio = 0.0;
    bool ratio_defined = false;
    bool admissible = false;        // delta >= N_k^(-1/24 + eps)
    bool rational_constant = false;
    // echoed parameters
    double x = 0.0;
    int64_t n_k = 0;
    double delta = 0.0;
    double theta_min = 0.0, theta_max = 0.0;
    double epsilon = 0.0;

    nlohmann::json to_json() const;
    static std::string csv_header();
    std::string csv_row() const;
};

EquidReport equid_report(const PrimeTable& table, const ScaleSchedule& schedule, size_t k,
                         double x, double delta, const SectorAnnulus& region,
                         double epsilon = 0.01, int threads = 0);
// Same report against a fixed norm bound instead of a schedule entry.
EquidReport equid_report_window(const PrimeTable& table, const ComplexHP& c, double x,
                                int64_t norm_bound, double delta, const SectorAnnulus& region,
                                double epsilon = 0.01, int threads = 0,
                                bool rational_constant = false);

struct ApproxPrime {
    GaussInt p;
    double dist; // ||pc|| in the sup metric
};

// Primes p in the table with ||pc|| <= |p|^e, sorted by norm.
std::vector<ApproxPrime> find_approx_primes(const PrimeTable& table, const ComplexHP& c,
                                            double e, int threads = 0);

} // namespace gplab
