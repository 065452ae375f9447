#include "gplab/dioph.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>

#include "gplab/errors.hpp"
#include "gplab/parallel.hpp"

namespace gplab {

void ConstraintQuery::validate() const {
    region.validate();
    if (!(delta > 0.0) || delta > 0.5)
        throw std::invalid_argument("ConstraintQuery: delta must lie in (0, 1/2]");
    if (norm_window) {
        auto [x1, x2] = *norm_window;
        if (!(x1 >= 1.0) || !(x1 < x2))
            throw std::invalid_argument("ConstraintQuery: norm window needs 1 <= x1 < x2");
    }
}

bool constraint_holds(const ComplexHP& c, GaussInt p, double delta, DistMetric metric) {
    for (int attempt = 0; attempt < 2; ++attempt) {
        ComplexHP cc = attempt == 0 ? c : c.with_prec(c.prec() * 2);
        ComplexHP w = cc * p;
        if (metric == DistMetric::kSup) {
            RealHP d = sup_dist_hp(w);
            bool ok = d.cmp(delta) <= 0;
            if (attempt == 1 || std::fabs(d.to_double() - delta) >= 1e-15) return ok;
        } else {
            RealHP d2 = euclid_dist_sq_hp(w);
            double t = delta * delta;
            bool ok = d2.cmp(t) <= 0;
            if (attempt == 1 || std::fabs(d2.to_double() - t) >= 1e-15) return ok;
        }
    }
    return false; // unreachable
}

bool axis_dists_within(const ComplexHP& c, GaussInt n, double delta_im, double delta_re) {
    for (int attempt = 0; attempt < 2; ++attempt) {
        ComplexHP cc = attempt == 0 ? c : c.with_prec(c.prec() * 2);
        ComplexHP w = cc * n;
        RealHP dim = w.im.dist_to_int();
        RealHP dre = w.re.dist_to_int();
        bool ok = dim.cmp(delta_im) <= 0 && dre.cmp(delta_re) <= 0;
        if (attempt == 1) return ok;
        if (std::fabs(dim.to_double() - delta_im) >= 1e-15 &&
            std::fabs(dre.to_double() - delta_re) >= 1e-15)
            return ok;
    }
    return false; // unreachable
}

namespace {

struct WindowRange {
    size_t begin, end;
    double theta_min, theta_max;
};

WindowRange resolve_window(const PrimeTable& table, const ConstraintQuery& query) {
    double n_lo, n_hi;
    if (query.norm_window) {
        n_lo = query.norm_window->first;
        n_hi = query.norm_window->second;
        table.require_norm(n_hi);
    } else {
        n_lo = query.region.r_min * query.region.r_min;
        n_hi = query.region.r_max * query.region.r_max;
        table.require_radius(query.region.r_max);
    }
    return {table.upper_bound_norm(n_lo), table.upper_bound_norm(n_hi),
            query.region.theta_min, query.region.theta_max};
}

} // namespace

int64_t count_constrained_primes(const PrimeTable& table, const ComplexHP& c,
                                 const ConstraintQuery& query, int threads) {
    query.validate();
    WindowRange w = resolve_window(table, query);
    auto entries = table.entries();

    std::atomic<int64_t> total{0};
    parallel_chunks(static_cast<int64_t>(w.end - w.begin), threads, [&](int64_t lo, int64_t hi) {
        int64_t local = 0;
        for (int64_t i = lo; i < hi; ++i) {
            const PrimeEntry& e = entries[w.begin + static_cast<size_t>(i)];
            if (!angle_in_window(e.p, w.theta_min, w.theta_max)) continue;
            if (constraint_holds(c, e.p, query.delta, query.metric)) ++local;
        }
        total.fetch_add(local, std::memory_order_relaxed);
    });
    return total.load();
}

int64_t count_primes_plain(const PrimeTable& table, const ConstraintQuery& query) {
    query.region.validate();
    WindowRange w = resolve_window(table, query);
    auto entries = table.entries();
    int64_t total = 0;
    for (size_t i = w.begin; i < w.end; ++i)
        if (angle_in_window(entries[i].p, w.theta_min, w.theta_max)) ++total;
    return total;
}

bool relation_check_pi_star(const PrimeTable& table, const ComplexHP& c,
                            const ConstraintQuery& query) {
    ConstraintQuery euclid = query;
    euclid.metric = DistMetric::kEuclid;
    ConstraintQuery sup = query;
    sup.metric = DistMetric::kSup;
    sup.delta = query.delta / std::sqrt(2.0);
    return count_constrained_primes(table, c, euclid) >= count_constrained_primes(table, c, sup);
}

int64_t sigma_count(const ComplexHP& c, double z, double delta1, double delta2) {
    if (z < 0.0) throw std::invalid_argument("sigma_count: z must be >= 0");
    if (delta1 < 0.0 || delta1 > 0.5 || delta2 < 0.0 || delta2 > 0.5)
        throw std::invalid_argument("sigma_count: thresholds must lie in [0, 1/2]");
    int64_t zi = static_cast<int64_t>(std::floor(z));
    if (zi < 1) return 0;
    int64_t r = isqrt_floor(zi);
    int64_t count = 0;
    for (int64_t a = -r; a <= r; ++a) {
        int64_t row = isqrt_floor(zi - a * a);
        for (int64_t b = -row; b <= row; ++b) {
            if (a == 0 && b == 0) continue;
            if (axis_dists_within(c, {a, b}, delta1, delta2)) ++count;
        }
    }
    return count;
}

nlohmann::json SpacingAudit::to_json() const {
    return {{"min_pair_dist", min_pair_dist},
            {"dist2_bound", dist2_bound},
            {"pair_bound_ok", pair_bound_ok},
            {"zero_window_ok", zero_window_ok},
            {"zero_window_delta", zero_window_delta}};
}

SpacingAudit spacing_audit(const ComplexHP& c, GaussInt q, GaussInt a) {
    require_convergent(c, a, q);
    double q_abs = std::sqrt(static_cast<double>(q.norm64()));
    int64_t box = static_cast<int64_t>(std::floor(q_abs / 4.0));

    SpacingAudit audit;
    audit.dist2_bound = 1.0 / (2.0 * std::sqrt(2.0) * q_abs);
    audit.min_pair_dist = std::numeric_limits<double>::infinity();

    // pair differences in a box of side |q|/4; ||(-d)c|| = ||dc||, so scan a half-plane
    for (int64_t dr = 0; dr <= box; ++dr) {
        for (int64_t di = (dr == 0 ? 1 : -box); di <= box; ++di) {
            RealHP d = sup_dist_hp(c * GaussInt{dr, di});
            double v = d.to_double();
            if (v < audit.min_pair_dist) audit.min_pair_dist = v;
        }
    }
    audit.pair_bound_ok = box == 0 || audit.min_pair_dist >= audit.dist2_bound;

    audit.zero_window_delta = 0.999 / (std::sqrt(8.0) * q_abs);
    double z = static_cast<double>(q.norm64()) / 8.0;
    audit.zero_window_ok =
        sigma_count(c, z, audit.zero_window_delta, audit.zero_window_delta) == 0;
    return audit;
}

// --- sieve counts -----------------------------------------------------------

namespace {

// true iff some Gaussian prime of norm <= z divides an element of norm n
bool has_small_gaussian_factor(uint64_t n, double z) {
    if (n % 2 == 0 && 2.0 <= z) return true;
    while (n % 2 == 0) n /= 2;
    for (uint64_t d = 3; d * d <= n; d += 2) {
        if (n % d != 0) continue;
        if (d % 4 == 1) {
            if (static_cast<double>(d) <= z) return true;
        } else {
            if (static_cast<double>(d) * static_cast<double>(d) <= z) return true;
        }
        while (n % d == 0) n /= d;
    }
    if (n > 1) {
        // leftover prime factor
        if (n % 4 == 1) return static_cast<double>(n) <= z;
        return static_cast<double>(n) * static_cast<double>(n) <= z;
    }
    return false;
}

} // namespace

int64_t sieve_count_S(std::span<const GaussInt> elements, double z) {
    if (z < 0.0) throw std::invalid_argument("sieve_count_S: z must be >= 0");
    int64_t survivors = 0;
    for (const GaussInt& w : elements) {
        if (w.is_zero()) throw std::invalid_argument("sieve_count_S: zero element");
        unsigned __int128 norm = w.norm();
        if (norm > static_cast<unsigned __int128>(100'000'000'000'000ull))
            throw std::overflow_error("sieve_count_S: element norm exceeds factorization range");
        if (!has_small_gaussian_factor(static_cast<uint64_t>(norm), z)) ++survivors;
    }
    return survivors;
}

// --- schedules and equidistribution ------------------------------------------

ScaleSchedule ScaleSchedule::build(const ComplexHP& c, int64_t max_n_k) {
    if (max_n_k < 1) throw std::invalid_argument("ScaleSchedule: max_n_k must be >= 1");
    // norm(q)^6 <= max_n_k, and norm(q)^6 must stay in int64 range
    int64_t limit = static_cast<int64_t>(std::floor(std::pow(static_cast<double>(max_n_k), 1.0 / 6.0)));
    while (std::pow(static_cast<double>(limit + 1), 6.0) <= static_cast<double>(max_n_k)) ++limit;
    limit = std::min<int64_t>(limit, 1438); // 1438^6 < 2^63

    ScaleSchedule schedule;
    schedule.c = c;
    HurwitzExpansion exp =
        hurwitz_expansion(c, 64, static_cast<double>(limit) + 0.5);
    schedule.rational_constant = exp.terminated;
    for (const auto& [p, q] : exp.convergents) {
        (void)p;
        int64_t norm = q.norm64();
        if (norm > limit) break;
        int64_t n3 = norm * norm * norm;
        schedule.scales.push_back({q, n3 * n3, n3});
    }
    return schedule;
}

nlohmann::json EquidReport::to_json() const {
    nlohmann::json j{{"observed", observed},
                     {"baseline", baseline},
                     {"predicted", predicted},
                     {"admissible", admissible},
                     {"rational_constant", rational_constant},
                     {"x", x},
                     {"n_k", n_k},
                     {"delta", delta},
                     {"theta_min", theta_min},
                     {"theta_max", theta_max},
                     {"epsilon", epsilon}};
    if (ratio_defined)
        j["ratio"] = ratio;
    else
        j["ratio"] = nullptr;
    return j;
}

std::string EquidReport::csv_header() {
    return "x,n_k,delta,theta_min,theta_max,epsilon,observed,baseline,predicted,ratio,admissible,rational_constant";
}

std::string EquidReport::csv_row() const {
    char buf[512];
    std::snprintf(buf, sizeof(buf), "%.17g,%lld,%.17g,%.17g,%.17g,%.17g,%lld,%lld,%.17g,", x,
                  static_cast<long long>(n_k), delta, theta_min, theta_max, epsilon,
                  static_cast<long long>(observed), static_cast<long long>(baseline), predicted);
    std::string row(buf);
    if (ratio_defined) {
        std::snprintf(buf, sizeof(buf), "%.17g", ratio);
        row += buf;
    } else {
        row += "undefined";
    }
    row += admissible ? ",1" : ",0";
    row += rational_constant ? ",1" : ",0";
    return row;
}

EquidReport equid_report_window(const PrimeTable& table, const ComplexHP& c, double x,
                                int64_t norm_bound, double delta, const SectorAnnulus& region,
                                double epsilon, int threads, bool rational_constant) {
    if (!(delta > 0.0) || delta > 0.5)
        throw std::invalid_argument("equid_report: delta must lie in (0, 1/2]");
    if (!(x >= 0.0) || x > static_cast<double>(norm_bound))
        throw std::invalid_argument("equid_report: need 0 <= x <= N_k");
    table.require_norm(static_cast<double>(norm_bound));

    EquidReport rep;
    rep.x = x;
    rep.n_k = norm_bound;
    rep.delta = delta;
    rep.theta_min = region.theta_min;
    rep.theta_max = region.theta_max;
    rep.epsilon = epsilon;
    rep.rational_constant = rational_constant;
    rep.admissible =
        delta >= std::pow(static_cast<double>(norm_bound), -1.0 / 24.0 + epsilon);

    ConstraintQuery query;
    query.region = region;
    query.delta = delta;
    query.metric = DistMetric::kSup;
    query.norm_window = {std::max(x, 1.0), static_cast<double>(norm_bound)};

    if (x >= static_cast<double>(norm_bound)) {
        // empty window
        rep.observed = rep.baseline = 0;
    } else {
        rep.observed = count_constrained_primes(table, c, query, threads);
        rep.baseline = count_primes_plain(table, query);
    }
    rep.predicted = 4.0 * delta * delta * static_cast<double>(rep.baseline);
    if (rep.predicted > 0.0) {
        rep.ratio = static_cast<double>(rep.observed) / rep.predicted;
        rep.ratio_defined = true;
    }
    return rep;
}

EquidReport equid_report(const PrimeTable& table, const ScaleSchedule& schedule, size_t k,
                         double x, double delta, const SectorAnnulus& region, double epsilon,
                         int threads) {
    if (k >= schedule.scales.size())
        throw std::invalid_argument("equid_report: scale index out of range");
    return equid_report_window(table, schedule.c, x, schedule.scales[k].n_k, delta, region,
                               epsilon, threads, schedule.rational_constant);
}

std::vector<ApproxPrime> find_approx_primes(const PrimeTable& table, const ComplexHP& c,
                                            double e, int threads) {
    auto entries = table.entries();
    std::vector<uint8_t> keep(entries.size(), 0);
    std::vector<double> dist(entries.size(), 0.0);
    parallel_chunks(static_cast<int64_t>(entries.size()), threads, [&](int64_t lo, int64_t hi) {
        for (int64_t i = lo; i < hi; ++i) {
            const PrimeEntry& entry = entries[static_cast<size_t>(i)];
            double threshold = std::pow(std::sqrt(static_cast<double>(entry.norm)), e);
            RealHP d = sup_dist_hp(c * entry.p);
            if (d.cmp(threshold) <= 0) {
                keep[static_cast<size_t>(i)] = 1;
                dist[static_cast<size_t>(i)] = d.to_double();
            }
        }
    });
    std::vector<ApproxPrime> out;
    for (size_t i = 0; i < entries.size(); ++i)
        if (keep[i]) out.push_back({entries[i].p, dist[i]});
    return out;
}

} // namespace gplab
