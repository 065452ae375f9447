#include "gplab/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

#include "gplab/errors.hpp"
#include "gplab/parallel.hpp"

namespace gplab {

SectorAnnulus SectorAnnulus::full_circle(double r_max, double r_min) {
    return {r_min, r_max, -std::numbers::pi, std::numbers::pi};
}

void SectorAnnulus::validate() const {
    if (!(r_min >= 0.0) || !(r_min < r_max))
        throw std::invalid_argument("SectorAnnulus: need 0 <= r_min < r_max");
    if (!(theta_min < theta_max))
        throw std::invalid_argument("SectorAnnulus: need theta_min < theta_max");
    if (theta_max - theta_min > 2.0 * std::numbers::pi * (1.0 + 1e-12))
        throw std::invalid_argument("SectorAnnulus: angle width exceeds 2pi");
}

bool norm_in_window(int64_t n, double x1, double x2) {
    long double v = static_cast<long double>(n);
    return v > static_cast<long double>(x1) && v <= static_cast<long double>(x2);
}

// Slow path: decide the window membership with 256-bit argument reduction.
// A point within 1e-12 of a boundary counts as exactly on it: on theta_max it
// is inside, on theta_min (or its 2pi image) outside. Adjacent half-open
// sectors therefore classify each point exactly once even when the double
// boundary values straddle the true angle.
static bool angle_in_window_hp(GaussInt g, double theta_min, double theta_max) {
    const mpfr_prec_t prec = 256;
    RealHP arg = RealHP::atan2(RealHP::of_int(static_cast<long>(g.im), prec),
                               RealHP::of_int(static_cast<long>(g.re), prec), prec);
    RealHP two_pi = RealHP::pi(prec).mul_int(2);
    RealHP lo = RealHP::of(theta_min, prec);
    RealHP hi_wrap = lo + two_pi;
    while (arg.cmp(lo) <= 0) arg = arg + two_pi;
    while (arg.cmp(hi_wrap) > 0) arg = arg - two_pi;
    constexpr double kSnap = 1e-12;
    RealHP hi = RealHP::of(theta_max, prec);
    if ((arg - hi).abs().cmp(kSnap) < 0) return true;
    if ((arg - lo).abs().cmp(kSnap) < 0) return false;
    if ((arg - hi_wrap).abs().cmp(kSnap) < 0) return false;
    return arg.cmp(hi) <= 0;
}

bool angle_in_window(GaussInt g, double theta_min, double theta_max) {
    constexpr double kBoundaryEps = 1e-12;
    const double two_pi = 2.0 * std::numbers::pi;
    // a window of full width is the whole circle
    if (theta_max - theta_min >= two_pi * (1.0 - 1e-15)) return true;
    double t = std::atan2(static_cast<double>(g.im), static_cast<double>(g.re));
    while (t <= theta_min) t += two_pi;
    while (t > theta_min + two_pi) t -= two_pi;
    if (std::fabs(t - theta_max) < kBoundaryEps || std::fabs(t - theta_min) < kBoundaryEps ||
        std::fabs(t - (theta_min + two_pi)) < kBoundaryEps)
        return angle_in_window_hp(g, theta_min, theta_max);
    return t <= theta_max;
}

// --- table construction ----------------------------------------------------

namespace {

// simple odd-only bit sieve
std::vector<uint64_t> sieve_bits(int64_t n) {
    int64_t words = (n / 2 + 64) / 64;
    std::vector<uint64_t> bits(static_cast<size_t>(words), ~0ull); // bit k <-> odd number 2k+1
    auto clear = [&](int64_t odd) { bits[static_cast<size_t>(odd / 2 / 64)] &= ~(1ull << ((odd / 2) % 64)); };
    clear(1);
    for (int64_t i = 3; i * i <= n; i += 2) {
        if (bits[static_cast<size_t>(i / 2 / 64)] >> ((i / 2) % 64) & 1) {
            for (int64_t j = i * i; j <= n; j += 2 * i) clear(j);
        }
    }
    return bits;
}

inline bool odd_prime_bit(const std::vector<uint64_t>& bits, int64_t p) {
    return bits[static_cast<size_t>(p / 2 / 64)] >> ((p / 2) % 64) & 1;
}

void push_associates(std::vector<PrimeEntry>& out, GaussInt g) {
    for (int k = 0; k < 4; ++k) {
        out.push_back({g, g.norm64(), g.arg()});
        g = g.mul_i();
    }
}

} // namespace

PrimeTable PrimeTable::build(int64_t max_norm, const BuildOptions& opts) {
    if (max_norm < 2) throw std::invalid_argument("build_prime_table: max_norm must be >= 2");

    // entry estimate ~ 4 x / log x plus the sieve bitmap
    double est_entries = 4.0 * static_cast<double>(max_norm) / std::log(static_cast<double>(max_norm)) * 1.3 + 64;
    double est_bytes = est_entries * sizeof(PrimeEntry) + static_cast<double>(max_norm) / 8.0;
    if (est_bytes > static_cast<double>(opts.mem_budget_bytes))
        throw resource_error("build_prime_table: estimated " + std::to_string(static_cast<uint64_t>(est_bytes)) +
                             " bytes exceeds budget of " + std::to_string(opts.mem_budget_bytes));

    auto bits = sieve_bits(max_norm);

    std::vector<int64_t> split; // rational primes = 1 mod 4
    for (int64_t p = 5; p <= max_norm; p += 4)
        if (odd_prime_bit(bits, p)) split.push_back(p);

    PrimeTable table;
    table.max_norm_ = max_norm;
    auto& entries = table.entries_;
    entries.reserve(static_cast<size_t>(est_entries));

    push_associates(entries, {1, 1}); // ramified, norm 2

    for (int64_t q = 3; q * q <= max_norm; q += 4)
        if (odd_prime_bit(bits, q)) push_associates(entries, {q, 0});

    // split primes: Cornacchia per prime, parallel; each prime owns a fixed
    // 8-entry slot (two conjugates x four associates) so the result is
    // independent of scheduling
    std::vector<PrimeEntry> split_entries(split.size() * 8);
    parallel_chunks(static_cast<int64_t>(split.size()), opts.threads, [&](int64_t lo, int64_t hi) {
        std::vector<PrimeEntry> local;
        for (int64_t i = lo; i < hi; ++i) {
            local.clear();
            auto [a, b] = two_squares(static_cast<uint64_t>(split[static_cast<size_t>(i)]));
            push_associates(local, {static_cast<int64_t>(a), static_cast<int64_t>(b)});
            push_associates(local, {static_cast<int64_t>(a), -static_cast<int64_t>(b)});
            std::copy(local.begin(), local.end(), split_entries.begin() + i * 8);
        }
    });
    entries.insert(entries.end(), split_entries.begin(), split_entries.end());

    std::sort(entries.begin(), entries.end(), [](const PrimeEntry& x, const PrimeEntry& y) {
        if (x.norm != y.norm) return x.norm < y.norm;
        if (x.arg != y.arg) return x.arg < y.arg;
        return std::pair(x.p.re, x.p.im) < std::pair(y.p.re, y.p.im);
    });
    return table;
}

size_t PrimeTable::upper_bound_norm(double x) const {
    auto it = std::upper_bound(entries_.begin(), entries_.end(), x,
                               [](double v, const PrimeEntry& e) {
                                   return static_cast<long double>(v) < static_cast<long double>(e.norm);
                               });
    return static_cast<size_t>(it - entries_.begin());
}

void PrimeTable::require_radius(double r) const {
    if (static_cast<long double>(r) * r > static_cast<long double>(max_norm_))
        throw coverage_error("region radius " + std::to_string(r) + " exceeds table coverage (max_norm " +
                             std::to_string(max_norm_) + ")");
}

void PrimeTable::require_norm(double n) const {
    if (static_cast<long double>(n) > static_cast<long double>(max_norm_))
        throw coverage_error("norm bound " + std::to_string(n) + " exceeds table coverage (max_norm " +
                             std::to_string(max_norm_) + ")");
}

// --- cache file ------------------------------------------------------------
//
// layout (little endian): magic "GPRIMTBL", u32 version, i64 max_norm,
// u64 count, count x (i64 re, i64 im). Norms and args are recomputed on load.

static constexpr char kMagic[8] = {'G', 'P', 'R', 'I', 'M', 'T', 'B', 'L'};
static constexpr uint32_t kCacheVersion = 1;

namespace {

template <typename T>
void put_le(std::string& buf, T v) {
    for (size_t i = 0; i < sizeof(T); ++i)
        buf.push_back(static_cast<char>((static_cast<uint64_t>(v) >> (8 * i)) & 0xff));
}

template <typename T>
T get_le(const char* p) {
    uint64_t v = 0;
    for (size_t i = 0; i < sizeof(T); ++i)
        v |= static_cast<uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
    return static_cast<T>(v);
}

} // namespace

void PrimeTable::save(const std::string& path) const {
    std::string buf;
    buf.reserve(28 + entries_.size() * 16);
    buf.append(kMagic, sizeof(kMagic));
    put_le<uint32_t>(buf, kCacheVersion);
    put_le<int64_t>(buf, max_norm_);
    put_le<uint64_t>(buf, entries_.size());
    for (const auto& e : entries_) {
        put_le<int64_t>(buf, e.p.re);
        put_le<int64_t>(buf, e.p.im);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw cache_error("cannot open cache file for writing: " + path);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw cache_error("short write to cache file: " + path);
}

PrimeTable PrimeTable::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw cache_error("cannot open cache file: " + path);
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (buf.size() < 28) throw cache_error("cache file truncated: " + path);
    if (std::memcmp(buf.data(), kMagic, sizeof(kMagic)) != 0)
        throw cache_error("bad cache magic: " + path);
    uint32_t version = get_le<uint32_t>(buf.data() + 8);
    if (version != kCacheVersion)
        throw cache_error("cache version mismatch: file has v" + std::to_string(version) +
                          ", artifact expects v" + std::to_string(kCacheVersion));
    int64_t max_norm = get_le<int64_t>(buf.data() + 12);
    uint64_t count = get_le<uint64_t>(buf.data() + 20);
    if (buf.size() != 28 + count * 16) throw cache_error("cache size mismatch: " + path);

    PrimeTable table;
    table.max_norm_ = max_norm;
    table.entries_.reserve(count);
    for (uint64_t i = 0; i < count; ++i) {
        const char* p = buf.data() + 28 + i * 16;
        GaussInt g{get_le<int64_t>(p), get_le<int64_t>(p + 8)};
        table.entries_.push_back({g, g.norm64(), g.arg()});
    }
    std::sort(table.entries_.begin(), table.entries_.end(), [](const PrimeEntry& x, const PrimeEntry& y) {
        if (x.norm != y.norm) return x.norm < y.norm;
        if (x.arg != y.arg) return x.arg < y.arg;
        return std::pair(x.p.re, x.p.im) < std::pair(y.p.re, y.p.im);
    });
    return table;
}

// --- queries -----------------------------------------------------------------

SectorCount count_primes_sector(const PrimeTable& table, const SectorAnnulus& region) {
    region.validate();
    table.require_radius(region.r_max);

    const double n_lo = region.r_min * region.r_min;
    const double n_hi = region.r_max * region.r_max;
    size_t begin = table.upper_bound_norm(n_lo);
    size_t end = table.upper_bound_norm(n_hi);
    auto entries = table.entries();

    int64_t observed = 0;
    for (size_t i = begin; i < end; ++i)
        if (angle_in_window(entries[i].p, region.theta_min, region.theta_max)) ++observed;

    double main = 2.0 / std::numbers::pi * region.angle_width() * (n_hi - n_lo) / std::log(n_hi);
    return {observed, main};
}

std::vector<GaussInt> primes_in_disc(const PrimeTable& table, const ComplexHP& center,
                                     double radius) {
    if (radius < 0) throw std::invalid_argument("primes_in_disc: negative radius");
    double c_abs = center.abs_d();
    table.require_norm((c_abs + radius + 1e-9) * (c_abs + radius + 1e-9));

    const double cre = center.re.to_double();
    const double cim = center.im.to_double();
    RealHP r2 = RealHP::of(radius, center.prec()).sqr();

    std::vector<GaussInt> found;
    int64_t re_lo = static_cast<int64_t>(std::floor(cre - radius)) - 1;
    int64_t re_hi = static_cast<int64_t>(std::ceil(cre + radius)) + 1;
    for (int64_t a = re_lo; a <= re_hi; ++a) {
        int64_t im_lo = static_cast<int64_t>(std::floor(cim - radius)) - 1;
        int64_t im_hi = static_cast<int64_t>(std::ceil(cim + radius)) + 1;
        for (int64_t b = im_lo; b <= im_hi; ++b) {
            GaussInt g{a, b};
            if (g.is_zero()) continue;
            RealHP dre = RealHP::of_int(static_cast<long>(a), center.prec()) - center.re;
            RealHP dim = RealHP::of_int(static_cast<long>(b), center.prec()) - center.im;
            if ((dre.sqr() + dim.sqr()).cmp(r2) > 0) continue;
            if (is_gaussian_prime(g)) found.push_back(g);
        }
    }
    std::sort(found.begin(), found.end(), [](GaussInt x, GaussInt y) {
        auto nx = x.norm(), ny = y.norm();
        if (nx != ny) return nx < ny;
        if (x.arg() != y.arg()) return x.arg() < y.arg();
        return std::pair(x.re, x.im) < std::pair(y.re, y.im);
    });
    return found;
}

} // namespace gplab
