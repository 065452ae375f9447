#include "gplab/expsum.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "gplab/errors.hpp"
#include "gplab/parallel.hpp"
#include "gplab/rng.hpp"

namespace gplab {

using std::numbers::pi;

void VaalerParams::validate() const {
    if (j < 1) throw std::invalid_argument("VaalerParams: J must be >= 1");
    if (j1 < 1 || j2 < 1) throw std::invalid_argument("VaalerParams: J1, J2 must be >= 1");
}

VaalerEval vaaler_eval(const VaalerParams& params, double x) {
    params.validate();
    const int64_t J = params.j;
    const double psi = x - std::floor(x) - 0.5;

    // psi*(x) = -sum_{j=1..J} W(j/(J+1)) sin(2 pi j x) / (pi j),
    // W(t) = pi t (1-t) cot(pi t) + t on (0, 1)
    double psi_star = 0.0;
    double sigma = 1.0;
    for (int64_t j = 1; j <= J; ++j) {
        double t = static_cast<double>(j) / static_cast<double>(J + 1);
        double w = pi * t * (1.0 - t) * (std::cos(pi * t) / std::sin(pi * t)) + t;
        psi_star -= w * std::sin(2.0 * pi * j * x) / (pi * static_cast<double>(j));
        sigma += 2.0 * (1.0 - t) * std::cos(2.0 * pi * j * x);
    }
    sigma /= 2.0 * static_cast<double>(J + 1);
    return {psi, psi_star, sigma};
}

// --- phase evaluation -------------------------------------------------------

namespace {

// Workspace for phases e(n_re * fi + n_im * fr) where (fr, fi) are the mod-1
// reductions of a fixed complex frequency. The argument is reduced mod 1 at
// full precision before conversion to double.
class PhaseCtx {
public:
    explicit PhaseCtx(mpfr_prec_t prec) : prec_(prec) {
        mpfr_inits2(prec_, fr_, fi_, t_, u_, static_cast<mpfr_ptr>(nullptr));
    }
    ~PhaseCtx() { mpfr_clears(fr_, fi_, t_, u_, static_cast<mpfr_ptr>(nullptr)); }
    PhaseCtx(const PhaseCtx&) = delete;
    PhaseCtx& operator=(const PhaseCtx&) = delete;

    void set_frequency(const ComplexHP& kappa) {
        mpfr_frac(fr_, kappa.re.raw(), MPFR_RNDN);
        mpfr_frac(fi_, kappa.im.raw(), MPFR_RNDN);
    }

    std::complex<double> phase(int64_t n_re, int64_t n_im) {
        mpfr_mul_si(t_, fi_, n_re, MPFR_RNDN);
        mpfr_mul_si(u_, fr_, n_im, MPFR_RNDN);
        mpfr_add(t_, t_, u_, MPFR_RNDN);
        mpfr_frac(t_, t_, MPFR_RNDN);
        double x = mpfr_get_d(t_, MPFR_RNDN);
        double ang = 2.0 * pi * x;
        return {std::cos(ang), std::sin(ang)};
    }

private:
    mpfr_prec_t prec_;
    mpfr_t fr_, fi_, t_, u_;
};

bool norm_window_ld(unsigned __int128 n, double x1, double x2) {
    long double v = static_cast<long double>(n);
    return v > static_cast<long double>(x1) && v <= static_cast<long double>(x2);
}

// lattice points m != 0 with norm in (n_lo, n_hi], deterministic order
std::vector<GaussInt> lattice_annulus(double n_lo, double n_hi) {
    std::vector<GaussInt> out;
    if (n_hi < 1.0) return out;
    int64_t r = isqrt_floor(static_cast<int64_t>(std::floor(n_hi)));
    for (int64_t a = -r; a <= r; ++a) {
        int64_t row = isqrt_floor(static_cast<int64_t>(std::floor(n_hi)) - a * a);
        for (int64_t b = -row; b <= row; ++b) {
            if (a == 0 && b == 0) continue;
            GaussInt g{a, b};
            if (norm_window_ld(g.norm(), n_lo, n_hi)) out.push_back(g);
        }
    }
    return out;
}

} // namespace

// --- linear sums --------------------------------------------------------------

LinearSumResult linear_expsum(const ComplexHP& kappa, double y_lo, double y_hi, double f1,
                              double f2) {
    if (!(y_lo >= 0.0) || !(y_lo < y_hi))
        throw std::invalid_argument("linear_expsum: need 0 <= y_lo < y_hi");
    if (!(f1 < f2) || f2 > f1 + 2.0 * pi * (1.0 + 1e-12))
        throw std::invalid_argument("linear_expsum: need f1 < f2 <= f1 + 2pi");

    PhaseCtx ctx(kappa.prec());
    ctx.set_frequency(kappa);

    std::complex<double> sum{0.0, 0.0};
    int64_t terms = 0;
    int64_t r = isqrt_floor(static_cast<int64_t>(std::floor(y_hi)));
    for (int64_t a = -r; a <= r; ++a) {
        int64_t row = isqrt_floor(static_cast<int64_t>(std::floor(y_hi)) - a * a);
        for (int64_t b = -row; b <= row; ++b) {
            if (a == 0 && b == 0) continue;
            GaussInt m{a, b};
            if (!norm_window_ld(m.norm(), y_lo, y_hi)) continue;
            if (!angle_in_window(m, f1, f2)) continue;
            sum += ctx.phase(a, b);
            ++terms;
        }
    }

    double sy = std::sqrt(y_hi);
    double dim = kappa.im.dist_to_int().to_double();
    double dre = kappa.re.dist_to_int().to_double();
    double m1 = dim <= 1.0 / sy ? sy : 1.0 / dim;
    double m2 = dre <= 1.0 / sy ? sy : 1.0 / dre;
    double bound = sy * std::sqrt(m1) * std::sqrt(m2);
    return {sum, bound, terms};
}

// --- G_c profile ---------------------------------------------------------------

GcProfile g_c_profile(const ComplexHP& c, double y, double z, GaussInt q) {
    if (!(y >= 1.0)) throw std::invalid_argument("g_c_profile: y must be >= 1");
    if (!(z >= 0.0)) throw std::invalid_argument("g_c_profile: z must be >= 0");
    GaussInt a = nearest_gauss(c * q);
    require_convergent(c, a, q);

    const double sy = std::sqrt(y);
    GcProfile out;
    int64_t zi = static_cast<int64_t>(std::floor(z));
    if (zi >= 1) {
        int64_t r = isqrt_floor(zi);
        for (int64_t are = -r; are <= r; ++are) {
            int64_t row = isqrt_floor(zi - are * are);
            for (int64_t aim = -row; aim <= row; ++aim) {
                if (are == 0 && aim == 0) continue;
                ComplexHP w = c * GaussInt{are, aim};
                double dim = w.im.dist_to_int().to_double();
                double dre = w.re.dist_to_int().to_double();
                double t1 = (dim <= 1.0 / sy) ? sy : 1.0 / dim;
                double t2 = (dre <= 1.0 / sy) ? sy : 1.0 / dre;
                out.exact += std::sqrt(t1) * std::sqrt(t2);
                ++out.terms;
            }
        }
    }

    double qn = static_cast<double>(q.norm64()); // |q|^2
    double lg = std::log(2.0 * y);
    out.bound_general = (1.0 + z / qn) * (sy + qn) * lg * lg;
    if (z <= qn / 8.0) {
        double q_abs = std::sqrt(qn);
        double lq = std::log(2.0 * q_abs);
        out.bound_small_z = (q_abs * std::pow(y, 0.25) + qn) * lq * lq;
    }
    return out;
}

// --- frequency-box sums ---------------------------------------------------------

void TypeSumParams::validate() const {
    if (!(x1 >= 0.0) || !(x1 <= x2))
        throw std::invalid_argument("TypeSumParams: need 0 <= x1 <= x2");
    if (!(beta > 0.0) || beta > 0.5)
        throw std::invalid_argument("TypeSumParams: need 0 < beta <= 1/2");
    if (!(alpha > 0.0)) throw std::invalid_argument("TypeSumParams: need alpha > 0");
    if (x2 > 0.0 && !(m_max > std::pow(x2, alpha)))
        throw std::invalid_argument("TypeSumParams: need M > x2^alpha");
    if (!(h1 >= 1.0) || !(h2 >= 0.5))
        throw std::invalid_argument("TypeSumParams: need H1 >= 1 and H2 >= 1/2");
    if (!(delta > 0.0) || delta > 0.5)
        throw std::invalid_argument("TypeSumParams: delta must lie in (0, 1/2]");
    if (!(sector.theta_min < sector.theta_max) ||
        sector.theta_max > sector.theta_min + 2.0 * pi * (1.0 + 1e-12))
        throw std::invalid_argument("TypeSumParams: bad sector angles");
}

namespace {

// frequency box j != 0, |Re j| <= h1, |Im j| <= h2, deterministic order
std::vector<GaussInt> frequency_box(double h1, double h2) {
    int64_t b1 = static_cast<int64_t>(std::floor(h1));
    int64_t b2 = static_cast<int64_t>(std::floor(h2));
    std::vector<GaussInt> out;
    for (int64_t jr = -b1; jr <= b1; ++jr)
        for (int64_t ji = -b2; ji <= b2; ++ji)
            if (jr != 0 || ji != 0) out.push_back({jr, ji});
    return out;
}

double annulus_work_estimate(double n_lo, double n_hi) {
    (void)n_lo;
    return pi * std::max(0.0, n_hi) + 8.0 * std::sqrt(std::max(1.0, n_hi)) + 8.0;
}

} // namespace

double e3_exact(const ComplexHP& c, const TypeSumParams& params, int threads) {
    params.validate();
    auto jbox = frequency_box(params.h1, params.h2);
    auto mlist = lattice_annulus(0.0, params.m_max);

    double work = 0.0;
    for (const GaussInt& m : mlist)
        work += annulus_work_estimate(params.x1 / static_cast<double>(m.norm64()),
                                      params.x2 / static_cast<double>(m.norm64()));
    work *= static_cast<double>(jbox.size());
    if (work > static_cast<double>(params.work_budget))
        throw budget_error("e3_exact: estimated " + std::to_string(work) +
                           " term evaluations exceed budget " + std::to_string(params.work_budget));

    const double w1 = params.sector.theta_min, w2 = params.sector.theta_max;
    std::vector<double> per_j(jbox.size(), 0.0);

    parallel_chunks(static_cast<int64_t>(jbox.size()), threads, [&](int64_t lo, int64_t hi) {
        PhaseCtx ctx(c.prec());
        for (int64_t ji = lo; ji < hi; ++ji) {
            const GaussInt j = jbox[static_cast<size_t>(ji)];
            double acc = 0.0;
            for (const GaussInt& m : mlist) {
                ctx.set_frequency(c * (j * m));
                int64_t mn = m.norm64();
                double n_hi = params.x2 / static_cast<double>(mn);
                int64_t nhi_i = static_cast<int64_t>(std::floor(n_hi + 0.5));
                int64_t r = isqrt_floor(nhi_i);
                std::complex<double> inner{0.0, 0.0};
                for (int64_t a = -r; a <= r; ++a) {
                    int64_t row = isqrt_floor(nhi_i - a * a);
                    for (int64_t b = -row; b <= row; ++b) {
                        if (a == 0 && b == 0) continue;
                        GaussInt n{a, b};
                        // product-norm window is exact in integers
                        if (!norm_window_ld(m.norm() * n.norm(), params.x1, params.x2)) continue;
                        if (!angle_in_window(m * n, w1, w2)) continue;
                        inner += ctx.phase(a, b);
                    }
                }
                acc += std::abs(inner);
            }
            per_j[static_cast<size_t>(ji)] = acc;
        }
    });

    double total = 0.0;
    for (double v : per_j) total += v; // deterministic j-order reduction
    return total;
}

CoeffFn unit_coeffs() {
    return [](GaussInt) { return std::complex<double>(1.0, 0.0); };
}

CoeffFn pm1_coeffs(uint64_t seed) {
    return [seed](GaussInt g) {
        uint64_t h = counter_rng(seed, static_cast<uint64_t>(g.re) * 0x9e3779b97f4a7c15ull ^
                                           static_cast<uint64_t>(g.im));
        return std::complex<double>((h & 1) ? 1.0 : -1.0, 0.0);
    };
}

namespace {

struct BilinearPair {
    RealHP fr, fi; // mod-1 reductions of Re(mnc), Im(mnc)
    std::complex<double> coeff;
};

} // namespace

double f3_exact(const ComplexHP& c, const TypeSumParams& params, const CoeffFn& a_seq,
                const CoeffFn& b_seq, int threads) {
    params.validate();
    auto jbox = frequency_box(params.h1, params.h2);
    const double m_lo = std::pow(params.x2, params.alpha);
    const double m_hi = std::pow(params.x2, params.alpha + params.beta);
    auto mlist = lattice_annulus(m_lo, m_hi);

    double work = 0.0;
    for (const GaussInt& m : mlist)
        work += annulus_work_estimate(params.x1 / static_cast<double>(m.norm64()),
                                      params.x2 / static_cast<double>(m.norm64()));
    if (work > static_cast<double>(params.work_budget))
        throw budget_error("f3_exact: pair enumeration exceeds work budget");

    const double w1 = params.sector.theta_min, w2 = params.sector.theta_max;

    // collect pairs (m, n) with mn in A once; phases per j reuse the reductions
    std::vector<BilinearPair> pairs;
    for (const GaussInt& m : mlist) {
        int64_t mn_norm = m.norm64();
        double n_hi = params.x2 / static_cast<double>(mn_norm);
        int64_t nhi_i = static_cast<int64_t>(std::floor(n_hi + 0.5));
        int64_t r = isqrt_floor(nhi_i);
        std::complex<double> am = a_seq(m);
        for (int64_t a = -r; a <= r; ++a) {
            int64_t row = isqrt_floor(nhi_i - a * a);
            for (int64_t b = -row; b <= row; ++b) {
                if (a == 0 && b == 0) continue;
                GaussInt n{a, b};
                if (!norm_window_ld(m.norm() * n.norm(), params.x1, params.x2)) continue;
                GaussInt prod = m * n;
                if (!angle_in_window(prod, w1, w2)) continue;
                if (!constraint_holds(c, prod, params.delta, DistMetric::kSup)) continue;
                ComplexHP w = c * prod;
                pairs.push_back({w.re.frac01(), w.im.frac01(), am * b_seq(n)});
            }
        }
    }

    if (static_cast<double>(pairs.size()) * static_cast<double>(jbox.size()) >
        static_cast<double>(params.work_budget))
        throw budget_error("f3_exact: phase evaluation exceeds work budget");

    std::vector<double> per_j(jbox.size(), 0.0);
    parallel_chunks(static_cast<int64_t>(jbox.size()), threads, [&](int64_t lo, int64_t hi) {
        mpfr_t t, u;
        mpfr_inits2(c.prec() + 2, t, u, static_cast<mpfr_ptr>(nullptr));
        for (int64_t ji = lo; ji < hi; ++ji) {
            const GaussInt j = jbox[static_cast<size_t>(ji)];
            std::complex<double> inner{0.0, 0.0};
            for (const BilinearPair& pr : pairs) {
                // Im(j * mnc) = Re(j) Im(mnc) + Im(j) Re(mnc), mod 1
                mpfr_mul_si(t, pr.fi.raw(), j.re, MPFR_RNDN);
                mpfr_mul_si(u, pr.fr.raw(), j.im, MPFR_RNDN);
                mpfr_add(t, t, u, MPFR_RNDN);
                mpfr_frac(t, t, MPFR_RNDN);
                double ang = 2.0 * pi * mpfr_get_d(t, MPFR_RNDN);
                inner += pr.coeff * std::complex<double>(std::cos(ang), std::sin(ang));
            }
            per_j[static_cast<size_t>(ji)] = std::abs(inner);
        }
        mpfr_clears(t, u, static_cast<mpfr_ptr>(nullptr));
    });

    double total = 0.0;
    for (double v : per_j) total += v;
    return total;
}

// --- type-sum report --------------------------------------------------------------

nlohmann::json TypeSumReport::to_json() const {
    return {{"lhs_type1", lhs_type1}, {"main_type1", main_type1},
            {"lhs_type2", lhs_type2}, {"main_type2", main_type2},
            {"budget_type1", budget_type1}, {"budget_type2", budget_type2},
            {"x2", x2}, {"x1", x1}, {"m_max", m_max},
            {"delta", delta}, {"epsilon", epsilon}, {"vaaler_j", vaaler_j},
            {"q", {q.re, q.im}}};
}

std::string TypeSumReport::csv_header() {
    return "q_re,q_im,x1,x2,m_max,delta,epsilon,vaaler_j,"
           "lhs_type1,main_type1,diff_type1,budget_type1,"
           "lhs_type2,main_type2,diff_type2,budget_type2";
}

std::string TypeSumReport::csv_row() const {
    char buf[768];
    std::snprintf(buf, sizeof(buf),
                  "%lld,%lld,%.17g,%.17g,%.17g,%.17g,%.17g,%lld,"
                  "%lld,%.17g,%.17g,%.17g,%lld,%.17g,%.17g,%.17g",
                  static_cast<long long>(q.re), static_cast<long long>(q.im), x1, x2, m_max,
                  delta, epsilon, static_cast<long long>(vaaler_j),
                  static_cast<long long>(lhs_type1), main_type1,
                  static_cast<double>(lhs_type1) - main_type1, budget_type1,
                  static_cast<long long>(lhs_type2), main_type2,
                  static_cast<double>(lhs_type2) - main_type2, budget_type2);
    return buf;
}

namespace {

// pairs (m, n) with norm(m) in (m_lo, m_hi], product norm in (x1, x2], sector
// window on arg(mn); counts with and without the distance constraint
struct PairCounts {
    int64_t constrained = 0;
    int64_t unconstrained = 0;
};

PairCounts count_bilinear_pairs(const ComplexHP& c, double m_lo, double m_hi, double x1,
                                double x2, double w1, double w2, double delta, int threads) {
    auto mlist = lattice_annulus(m_lo, m_hi);
    std::vector<PairCounts> per_m(mlist.size());
    parallel_chunks(static_cast<int64_t>(mlist.size()), threads, [&](int64_t lo, int64_t hi) {
        for (int64_t mi = lo; mi < hi; ++mi) {
            const GaussInt m = mlist[static_cast<size_t>(mi)];
            PairCounts pc;
            double n_hi = x2 / static_cast<double>(m.norm64());
            int64_t nhi_i = static_cast<int64_t>(std::floor(n_hi + 0.5));
            int64_t r = isqrt_floor(nhi_i);
            for (int64_t a = -r; a <= r; ++a) {
                int64_t row = isqrt_floor(nhi_i - a * a);
                for (int64_t b = -row; b <= row; ++b) {
                    if (a == 0 && b == 0) continue;
                    GaussInt n{a, b};
                    if (!norm_window_ld(m.norm() * n.norm(), x1, x2)) continue;
                    GaussInt prod = m * n;
                    if (!angle_in_window(prod, w1, w2)) continue;
                    ++pc.unconstrained;
                    if (constraint_holds(c, prod, delta, DistMetric::kSup)) ++pc.constrained;
                }
            }
            per_m[static_cast<size_t>(mi)] = pc;
        }
    });
    PairCounts total;
    for (const auto& pc : per_m) {
        total.constrained += pc.constrained;
        total.unconstrained += pc.unconstrained;
    }
    return total;
}

} // namespace

TypeSumReport type_sum_report(const ComplexHP& c, GaussInt q, GaussInt a, double delta,
                              double epsilon, double omega1, double omega2,
                              std::optional<double> x1_override, int threads) {
    require_convergent(c, a, q);
    if (!(delta > 0.0) || delta > 0.5)
        throw std::invalid_argument("type_sum_report: delta must lie in (0, 1/2]");
    if (!(epsilon > 0.0)) throw std::invalid_argument("type_sum_report: epsilon must be > 0");

    int64_t qn = q.norm64();
    if (qn > 1438) throw std::invalid_argument("type_sum_report: norm(q)^6 exceeds 64-bit range");
    int64_t n3 = qn * qn * qn;
    double x2 = static_cast<double>(n3) * static_cast<double>(n3); // norm(q)^6
    double x1 = x1_override ? *x1_override : x2 / 2.0;
    if (!(x1 >= 0.0) || x1 > x2)
        throw std::invalid_argument("type_sum_report: need 0 <= x1 <= x2");
    double m_max = std::pow(static_cast<double>(qn), 4.0); // x2^(2/3)

    TypeSumReport rep;
    rep.q = q;
    rep.x1 = x1;
    rep.x2 = x2;
    rep.m_max = m_max;
    rep.delta = delta;
    rep.epsilon = epsilon;
    rep.vaaler_j = static_cast<int64_t>(std::floor(std::pow(x2, 3.0 * epsilon) / delta));

    PairCounts t1 = count_bilinear_pairs(c, 0.0, m_max, x1, x2, omega1, omega2, delta, threads);
    rep.lhs_type1 = t1.constrained;
    rep.main_type1 = 4.0 * delta * delta * static_cast<double>(t1.unconstrained);

    double m2_lo = std::pow(x2, 1.0 / 3.0);
    double m2_hi = std::pow(x2, 1.0 / 3.0 + 0.5);
    PairCounts t2 = count_bilinear_pairs(c, m2_lo, m2_hi, x1, x2, omega1, omega2, delta, threads);
    rep.lhs_type2 = t2.constrained;
    rep.main_type2 = 4.0 * delta * delta * static_cast<double>(t2.unconstrained);

    rep.budget_type1 =
        delta * delta * std::pow(x2, 1.0 - epsilon) + std::pow(x2, 5.0 / 6.0 + 8.0 * epsilon);
    rep.budget_type2 =
        delta * delta * std::pow(x2, 1.0 - epsilon) + std::pow(x2, 11.0 / 12.0 + 8.0 * epsilon);
    return rep;
}

} // namespace gplab
