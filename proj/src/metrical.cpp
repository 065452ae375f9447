#include "gplab/metrical.hpp"

#include <cmath>
#include <numbers>

#include "gplab/errors.hpp"
#include "gplab/parallel.hpp"
#include "gplab/rng.hpp"

namespace gplab {

using std::numbers::pi;

void MetricalParams::validate() const {
    if (!(epsilon > 0.0) || epsilon >= 1.0 / 12.0)
        throw std::invalid_argument("MetricalParams: epsilon must lie in (0, 1/12)");
    if (!(n_bound >= 2.0))
        throw std::invalid_argument("MetricalParams: N must be >= 2");
    if (!(a_radius > 0.0) || !(a_radius <= b_radius))
        throw std::invalid_argument("MetricalParams: need 0 < A <= B");
    if (!(c_const > 0.0)) throw std::invalid_argument("MetricalParams: C must be > 0");
}

// --- disc scans --------------------------------------------------------------

namespace {

template <typename Pred>
int64_t scan_disc(const ComplexHP& center, double radius, Pred&& keep) {
    const double cre = center.re.to_double();
    const double cim = center.im.to_double();
    const double r2 = radius * radius;
    RealHP r2_hp = RealHP::of(radius, center.prec()).sqr();

    int64_t count = 0;
    int64_t re_lo = static_cast<int64_t>(std::floor(cre - radius)) - 1;
    int64_t re_hi = static_cast<int64_t>(std::ceil(cre + radius)) + 1;
    int64_t im_lo = static_cast<int64_t>(std::floor(cim - radius)) - 1;
    int64_t im_hi = static_cast<int64_t>(std::ceil(cim + radius)) + 1;
    for (int64_t a = re_lo; a <= re_hi; ++a) {
        for (int64_t b = im_lo; b <= im_hi; ++b) {
            double dx = static_cast<double>(a) - cre;
            double dy = static_cast<double>(b) - cim;
            double d2 = dx * dx + dy * dy;
            if (d2 > r2 + 1e-6) continue; // clear miss at double precision
            if (d2 < r2 - 1e-6) {
                if (keep(GaussInt{a, b})) ++count;
                continue;
            }
            RealHP dre = RealHP::of_int(static_cast<long>(a), center.prec()) - center.re;
            RealHP dim = RealHP::of_int(static_cast<long>(b), center.prec()) - center.im;
            if ((dre.sqr() + dim.sqr()).cmp(r2_hp) <= 0 && keep(GaussInt{a, b})) ++count;
        }
    }
    return count;
}

} // namespace

int64_t lattice_count_in_disc(const ComplexHP& center, double radius) {
    if (radius < 0.0) return 0;
    return scan_disc(center, radius, [](GaussInt) { return true; });
}

int64_t prime_count_in_disc(const ComplexHP& center, double radius) {
    if (radius < 0.0) return 0;
    return scan_disc(center, radius,
                     [](GaussInt g) { return !g.is_zero() && is_gaussian_prime(g); });
}

// --- F_N and G_N ----------------------------------------------------------------

int64_t count_F_N(const PrimeTable& table, const MetricalParams& params, const ComplexHP& alpha,
                  int threads) {
    params.validate();
    const double n2 = params.n_bound * params.n_bound;
    table.require_norm(n2);

    const ComplexHP c_alpha = params.c * alpha;
    auto entries = table.entries();
    size_t end = table.upper_bound_norm(n2);

    std::atomic<int64_t> total{0};
    parallel_chunks(static_cast<int64_t>(end), threads, [&](int64_t lo, int64_t hi) {
        int64_t local = 0;
        for (int64_t i = lo; i < hi; ++i) {
            const PrimeEntry& e = entries[static_cast<size_t>(i)];
            double eta = std::pow(std::sqrt(static_cast<double>(e.norm)),
                                  params.epsilon - 1.0 / 12.0);
            int64_t r_count = prime_count_in_disc(alpha * e.p, eta);
            if (r_count == 0) continue;
            int64_t q_count = lattice_count_in_disc(c_alpha * e.p, eta);
            local += r_count * q_count;
        }
        total.fetch_add(local, std::memory_order_relaxed);
    });
    return total.load();
}

double g_n_value(const MetricalParams& params) {
    if (!(params.n_bound >= 2.0)) throw std::invalid_argument("g_n_value: N must be >= 2");
    double n = params.n_bound;
    double lg = std::log(n);
    return params.c_const * (params.a_radius / params.b_radius) *
           std::pow(n, 5.0 / 3.0 + 4.0 * params.epsilon) / (lg * lg);
}

nlohmann::json MonteCarloResult::to_json() const {
    return {{"integral_estimate", integral_estimate}, {"rhs", rhs},
            {"stderr", stderr_est},                   {"samples", samples},
            {"seed", seed},                           {"degenerate", degenerate}};
}

MonteCarloResult monte_carlo_theo_i(const PrimeTable& table, const MetricalParams& params,
                                    const SectorAnnulus& sector, int64_t samples, uint64_t seed,
                                    int threads) {
    params.validate();
    sector.validate();
    if (samples <= 0) throw std::invalid_argument("monte_carlo_theo_i: samples must be >= 1");
    if (sector.r_min < params.a_radius - 1e-12 || sector.r_max > params.b_radius + 1e-12)
        throw std::invalid_argument("monte_carlo_theo_i: sector radii must lie within [A, B]");

    const double r_span = sector.r_max - sector.r_min;
    const double t_span = sector.angle_width();

    std::vector<int64_t> values(static_cast<size_t>(samples));
    parallel_chunks(samples, threads, [&](int64_t lo, int64_t hi) {
        for (int64_t i = lo; i < hi; ++i) {
            double u1 = u01(counter_rng(seed, static_cast<uint64_t>(i), 0));
            double u2 = u01(counter_rng(seed, static_cast<uint64_t>(i), 1));
            double radius = sector.r_min + r_span * u1;
            double theta = sector.theta_min + t_span * u2;
            ComplexHP alpha = ComplexHP::of(radius * std::cos(theta), radius * std::sin(theta),
                                            params.c.prec());
            values[static_cast<size_t>(i)] = count_F_N(table, params, alpha, 1);
        }
    });

    double mean = 0.0;
    for (int64_t v : values) mean += static_cast<double>(v);
    mean /= static_cast<double>(samples);
    double var = 0.0;
    for (int64_t v : values) {
        double d = static_cast<double>(v) - mean;
        var += d * d;
    }
    var = samples > 1 ? var / static_cast<double>(samples - 1) : 0.0;

    const double measure = r_span * t_span;
    MonteCarloResult result;
    result.integral_estimate = mean * measure;
    result.stderr_est = std::sqrt(var / static_cast<double>(samples)) * measure;
    result.rhs = t_span * (sector.r_max * sector.r_max - sector.r_min * sector.r_min) *
                 g_n_value(params);
    result.samples = samples;
    result.seed = seed;
    return result;
}

// --- sieve-error counts -----------------------------------------------------------

double SieveErrorParams::mu_value() const {
    if (mu) return *mu;
    return std::pow(p_scale / 2.0, epsilon - 1.0 / 12.0);
}

void SieveErrorParams::validate() const {
    if (!(p_scale > 2.0)) throw std::invalid_argument("SieveErrorParams: P must be > 2");
    if (d1.is_zero() || d2.is_zero())
        throw std::invalid_argument("SieveErrorParams: d1, d2 must be nonzero");
    if (!(epsilon > 0.0) || epsilon >= 1.0 / 12.0)
        throw std::invalid_argument("SieveErrorParams: epsilon must lie in (0, 1/12)");
    double m = mu_value();
    if (!(m > 0.0) || m >= 0.5)
        throw std::invalid_argument("SieveErrorParams: mu must lie in (0, 1/2); at the default "
                                    "mu = (P/2)^(eps-1/12) this requires P > 2^(1+1/(1/12-eps))");
}

nlohmann::json TpResult::to_json() const {
    return {{"t_p", t_p}, {"main", main}, {"e_p", e_p}, {"degenerate_alpha", degenerate_alpha}};
}

TpResult t_p_and_e_p(const SieveErrorParams& sp, const ComplexHP& c, int threads) {
    sp.validate();
    const double mu = sp.mu_value();
    const double d2_abs = std::sqrt(static_cast<double>(sp.d2.norm64()));
    // P/(2|d1|) < |n| <= P/|d1| in norm form, so boundary rings with integer
    // norms are classified without a sqrt round-trip
    const double norm_hi = sp.p_scale * sp.p_scale / static_cast<double>(sp.d1.norm64());
    const double norm_lo = norm_hi / 4.0;

    // ||n d1 alpha / d2|| <= mu/|d2| and ||n d1 c alpha|| <= mu
    const ComplexHP base1 = div(sp.alpha * sp.d1, sp.d2);
    const ComplexHP base2 = (c * sp.alpha) * sp.d1;
    const double thr1 = mu / d2_abs;

    int64_t hi_norm = static_cast<int64_t>(std::floor(norm_hi));
    int64_t r = isqrt_floor(hi_norm);
    std::atomic<int64_t> count{0};
    parallel_chunks(2 * r + 1, threads, [&](int64_t lo, int64_t hi) {
        int64_t local = 0;
        for (int64_t idx = lo; idx < hi; ++idx) {
            int64_t a = idx - r;
            int64_t row = isqrt_floor(hi_norm - a * a);
            for (int64_t b = -row; b <= row; ++b) {
                GaussInt n{a, b};
                double norm = static_cast<double>(n.norm64());
                if (!(norm > norm_lo) || !(norm <= norm_hi)) continue;
                if (!constraint_holds(base1, n, thr1, DistMetric::kSup)) continue;
                if (!constraint_holds(base2, n, mu, DistMetric::kSup)) continue;
                ++local;
            }
        }
        count.fetch_add(local, std::memory_order_relaxed);
    });

    TpResult result;
    result.t_p = count.load();
    result.main = 12.0 * pi * sp.p_scale * sp.p_scale * mu * mu * mu * mu /
                  (static_cast<double>(sp.d1.norm64()) * static_cast<double>(sp.d2.norm64()));
    result.e_p = static_cast<double>(result.t_p) - result.main;
    result.degenerate_alpha = sp.alpha.is_zero();
    return result;
}

int64_t gaussian_omega(GaussInt w) {
    if (w.is_zero()) throw std::invalid_argument("gaussian_omega: zero input");
    unsigned __int128 norm = w.norm();
    if (norm > static_cast<unsigned __int128>(100'000'000'000'000ull))
        throw std::overflow_error("gaussian_omega: norm exceeds factorization range");
    uint64_t n = static_cast<uint64_t>(norm);
    int64_t omega = 0;
    while (n % 2 == 0) { n /= 2; ++omega; }
    for (uint64_t d = 3; d * d <= n; d += 2) {
        if (n % d != 0) continue;
        int64_t e = 0;
        while (n % d == 0) { n /= d; ++e; }
        if (d % 4 == 1) {
            omega += e;
        } else {
            // inert prime: even valuation in the norm, each pair is one factor
            if (e % 2 != 0) throw std::logic_error("gaussian_omega: odd inert valuation");
            omega += e / 2;
        }
    }
    if (n > 1) {
        if (n % 4 != 1) throw std::logic_error("gaussian_omega: leftover inert prime");
        omega += 1;
    }
    return omega;
}

int64_t a_p_two_prime_count(const SieveErrorParams& sp, const ComplexHP& c) {
    sp.validate();
    const double mu = sp.mu_value();
    const double norm_hi = sp.p_scale * sp.p_scale;
    const double norm_lo = norm_hi / 4.0;
    const ComplexHP c_alpha = c * sp.alpha;

    int64_t hi_norm = static_cast<int64_t>(std::floor(norm_hi));
    int64_t r = isqrt_floor(hi_norm);
    int64_t count = 0;
    for (int64_t a = -r; a <= r; ++a) {
        int64_t row = isqrt_floor(hi_norm - a * a);
        for (int64_t b = -row; b <= row; ++b) {
            GaussInt n{a, b};
            double norm = static_cast<double>(n.norm64());
            if (!(norm > norm_lo) || !(norm <= norm_hi)) continue;
            if (!constraint_holds(sp.alpha, n, mu, DistMetric::kSup)) continue;
            if (!constraint_holds(c_alpha, n, mu, DistMetric::kSup)) continue;
            GaussInt f = nearest_gauss(sp.alpha * n);
            if (f.is_zero()) continue; // n*f = 0 is not a two-prime product
            if (gaussian_omega(n * f) == 2) ++count;
        }
    }
    return count;
}

} // namespace gplab
