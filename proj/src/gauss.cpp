#include "gplab/gauss.hpp"

#include <cmath>
#include <cstdlib>

namespace gplab {

double GaussInt::abs() const {
    return std::sqrt(static_cast<double>(norm()));
}

double GaussInt::arg() const {
    return std::atan2(static_cast<double>(im), static_cast<double>(re));
}

GaussInt GaussInt::canonical() const {
    if (is_zero()) return {0, 0};
    GaussInt g = *this;
    for (int k = 0; k < 4; ++k) {
        if (g.re > 0 && g.im >= 0) return g;
        g = g.mul_i();
    }
    throw std::logic_error("canonical associate not found");
}

std::string GaussInt::str() const {
    return std::to_string(re) + (im < 0 ? "" : "+") + std::to_string(im) + "i";
}

// --- rational primality --------------------------------------------------

static uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

static uint64_t powmod_u64(uint64_t b, uint64_t e, uint64_t m) {
    uint64_t r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, b, m);
        b = mulmod_u64(b, b, m);
        e >>= 1;
    }
    return r;
}

bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    // deterministic witness set for n < 3.3e24
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

bool is_gaussian_prime(GaussInt g) {
    if (g.is_zero()) throw std::invalid_argument("is_gaussian_prime: zero input");
    unsigned __int128 n = g.norm();
    if (n == 1) return false;
    if (n > static_cast<unsigned __int128>(UINT64_MAX))
        throw std::overflow_error("is_gaussian_prime: norm exceeds 64-bit range");
    if (g.re == 0 || g.im == 0) {
        uint64_t v = static_cast<uint64_t>(std::llabs(g.re) + std::llabs(g.im));
        return v % 4 == 3 && is_prime_u64(v);
    }
    return is_prime_u64(static_cast<uint64_t>(n));
}

bool divides(GaussInt d, GaussInt g) {
    if (d.is_zero()) throw std::invalid_argument("divides: zero divisor");
    __int128 nr = static_cast<__int128>(g.re) * d.re + static_cast<__int128>(g.im) * d.im;
    __int128 ni = static_cast<__int128>(g.im) * d.re - static_cast<__int128>(g.re) * d.im;
    __int128 nd = static_cast<__int128>(d.re) * d.re + static_cast<__int128>(d.im) * d.im;
    return nr % nd == 0 && ni % nd == 0;
}

// floor(n/d) for d > 0
static __int128 floordiv_i128(__int128 n, __int128 d) {
    __int128 q = n / d;
    if (n % d != 0 && ((n < 0) != (d < 0))) --q;
    return q;
}

// round(n/d) with ties toward +inf, d > 0
static __int128 round_div_half_up(__int128 n, __int128 d) {
    __int128 q = floordiv_i128(n, d);
    __int128 r = n - q * d; // in [0, d)
    if (r >= d - r) ++q;
    return q;
}

GaussInt gaussian_gcd(GaussInt a, GaussInt b) {
    if (a.is_zero() && b.is_zero()) throw std::invalid_argument("gcd(0, 0) undefined");
    constexpr int64_t kLimit = int64_t{1} << 62;
    if (std::llabs(a.re) >= kLimit || std::llabs(a.im) >= kLimit ||
        std::llabs(b.re) >= kLimit || std::llabs(b.im) >= kLimit)
        throw std::overflow_error("gaussian_gcd: inputs too large");
    while (!b.is_zero()) {
        __int128 nd = static_cast<__int128>(b.re) * b.re + static_cast<__int128>(b.im) * b.im;
        __int128 nr = static_cast<__int128>(a.re) * b.re + static_cast<__int128>(a.im) * b.im;
        __int128 ni = static_cast<__int128>(a.im) * b.re - static_cast<__int128>(a.re) * b.im;
        GaussInt q{static_cast<int64_t>(round_div_half_up(nr, nd)),
                   static_cast<int64_t>(round_div_half_up(ni, nd))};
        GaussInt r = a - q * b;
        a = b;
        b = r;
    }
    return a.canonical();
}

std::pair<uint64_t, uint64_t> two_squares(uint64_t p) {
    if (p % 4 != 1) throw std::invalid_argument("two_squares: p must be 1 mod 4");
    // sqrt(-1) mod p from a quadratic non-residue
    uint64_t t = 0;
    for (uint64_t g = 2;; ++g) {
        if (powmod_u64(g, (p - 1) / 2, p) == p - 1) {
            t = powmod_u64(g, (p - 1) / 4, p);
            break;
        }
    }
    // Cornacchia descent: first Euclid remainder below sqrt(p)
    uint64_t a = p, b = t;
    while (static_cast<unsigned __int128>(b) * b > p) {
        uint64_t r = a % b;
        a = b;
        b = r;
    }
    uint64_t x = b;
    uint64_t y2 = p - x * x;
    uint64_t y = static_cast<uint64_t>(std::sqrt(static_cast<double>(y2)));
    while (y * y > y2) --y;
    while ((y + 1) * (y + 1) <= y2) ++y;
    if (y * y != y2) throw std::logic_error("two_squares: descent failed");
    return x > y ? std::make_pair(x, y) : std::make_pair(y, x);
}

// --- lattice rounding ----------------------------------------------------

GaussInt nearest_gauss(const ComplexHP& z) {
    return {z.re.to_long_nearest(), z.im.to_long_nearest()};
}

NearestResult nearest_and_dist(const ComplexHP& z) {
    GaussInt f = nearest_gauss(z);
    RealHP dr = z.re.dist_to_int();
    RealHP di = z.im.dist_to_int();
    double sup = std::max(dr.to_double(), di.to_double());
    double euclid = RealHP::hypot(dr, di).to_double();
    return {f, sup, euclid};
}

RealHP sup_dist_hp(const ComplexHP& z) {
    RealHP dr = z.re.dist_to_int();
    RealHP di = z.im.dist_to_int();
    return dr.cmp(di) >= 0 ? dr : di;
}

RealHP euclid_dist_sq_hp(const ComplexHP& z) {
    RealHP dr = z.re.dist_to_int();
    RealHP di = z.im.dist_to_int();
    return dr.sqr() + di.sqr();
}

ComplexHP operator*(const ComplexHP& z, GaussInt g) {
    return {z.re.mul_int(g.re) - z.im.mul_int(g.im), z.re.mul_int(g.im) + z.im.mul_int(g.re)};
}

ComplexHP operator*(GaussInt g, const ComplexHP& z) { return z * g; }

ComplexHP div(const ComplexHP& z, GaussInt g) {
    if (g.is_zero()) throw std::invalid_argument("division by zero GaussInt");
    ComplexHP num = z * g.conj();
    RealHP nr = RealHP::of_int(static_cast<long>(g.re), z.prec());
    RealHP ni = RealHP::of_int(static_cast<long>(g.im), z.prec());
    RealHP n = nr.sqr() + ni.sqr();
    return {num.re / n, num.im / n};
}

ComplexHP to_complex_hp(GaussInt g, mpfr_prec_t prec) {
    return {RealHP::of_int(static_cast<long>(g.re), prec), RealHP::of_int(static_cast<long>(g.im), prec)};
}

} // namespace gplab
