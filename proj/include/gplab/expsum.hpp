#pragma once

#include <complex>
#include <functional>
#include <optional>

#include <json.hpp>

#include "gplab/dioph.hpp"

namespace gplab {

// Degree and truncation parameters of the Vaaler approximation. When the
// polynomial detects a threshold delta, J must satisfy J >= 1/delta.
struct VaalerParams {
    int64_t j = 1;
    int64_t j1 = 1;
    int64_t j2 = 1;

    void validate() const; // throws std::invalid_argument
};

struct VaalerEval {
    double psi;      // x - floor(x) - 1/2
    double psi_star; // degree-J trigonometric approximation
    double sigma;    // non-negative error envelope, |psi* - psi| <= sigma
};

VaalerEval vaaler_eval(const VaalerParams& params, double x);

struct LinearSumResult {
    std::complex<double> exact;
    double bound; // y^(1/2) min{||Im k||^-1, sqrt y}^(1/2) min{||Re k||^-1, sqrt y}^(1/2)
    int64_t terms = 0;
};

// Sum of e(Im(m kappa)) over lattice m with y_lo < norm(m) <= y_hi and
// f1 < arg(m) <= f2, evaluated exactly, next to the slicing bound.
LinearSumResult linear_expsum(const ComplexHP& kappa, double y_lo, double y_hi, double f1,
                              double f2);

struct GcProfile {
    double exact = 0.0;
    double bound_general = 0.0;              // (1 + z/|q|^2)(sqrt y + |q|^2) log^2(2y)
    std::optional<double> bound_small_z;     // (|q| y^(1/4) + |q|^2) log^2(2|q|), iff z <= |q|^2/8
    int64_t terms = 0;
};

// G_c(y, z) = sum over 0 < norm(n) <= z of
// min{||Im(nc)||^-1, sqrt y}^(1/2) min{||Re(nc)||^-1, sqrt y}^(1/2);
// q must be a convergent denominator of c (verified against nearest(c q)).
GcProfile g_c_profile(const ComplexHP& c, double y, double z, GaussInt q);

// Parameters of the frequency-box sums E3/F3. Radial fields of the sector
// are ignored; the angle window constrains arg(mn).
struct TypeSumParams {
    double x1 = 0.0, x2 = 0.0; // norm window of the product mn
    double m_max = 0.0;        // M, type-I inner range
    double alpha = 1.0 / 3.0;
    double beta = 0.5;
    double h1 = 1.0, h2 = 0.5; // frequency box |Re j| <= H1, |Im j| <= H2
    double delta = 0.5;        // A-membership threshold ||mn c|| <= delta
    SectorAnnulus sector = SectorAnnulus::full_circle(1.0);
    uint64_t work_budget = 200'000'000;

    void validate() const;
};

// E3(H1, H2): sum over Gaussian j != 0 in the frequency box and norm(m) <= M
// of |sum over n in the product annulus and sector of e(Im(j m n c))|.
double e3_exact(const ComplexHP& c, const TypeSumParams& params, int threads = 0);

using CoeffFn = std::function<std::complex<double>(GaussInt)>;
CoeffFn unit_coeffs();
CoeffFn pm1_coeffs(uint64_t seed); // deterministic +-1 per lattice index

// F3(H1, H2): bilinear variant with mn in A (norm window, sector,
// ||mn c|| <= delta) and x2^alpha < norm(m) <= x2^(alpha+beta).
double f3_exact(const ComplexHP& c, const TypeSumParams& params, const CoeffFn& a_seq,
                const CoeffFn& b_seq, int threads = 0);

struct TypeSumReport {
    // exact two sides of the type-I/II relations at a == b == 1
    int64_t lhs_type1 = 0;
    double main_type1 = 0.0;
    int64_t lhs_type2 = 0;
    double main_type2 = 0.0;
    double budget_type1 = 0.0; // delta^2 x^(1-eps) + x^(5/6 + 8 eps)
    double budget_type2 = 0.0; // delta^2 x^(1-eps) + x^(11/12 + 8 eps)
    // echoed parameters
    double x2 = 0.0, x1 = 0.0, m_max = 0.0;
    double delta = 0.0, epsilon = 0.0;
    int64_t vaaler_j = 0; // J = [delta^-1 x^(3 eps)]
    GaussInt q;

    nlohmann::json to_json() const;
    static std::string csv_header();
    std::string csv_row() const;
};

// Evaluates both sides of the type-I and type-II relations exactly at the
// x = |q|^12 parameter point (x2 = norm(q)^6, M = x2^(2/3), alpha = 1/3,
// beta = 1/2) for a verified convergent denominator q.
TypeSumReport type_sum_report(const ComplexHP& c, GaussInt q, GaussInt a, double delta,
                              double epsilon, double omega1, double omega2,
                              std::optional<double> x1_override = std::nullopt,
                              int threads = 0);

} // namespace gplab
