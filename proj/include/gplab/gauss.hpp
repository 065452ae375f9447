#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "gplab/hp.hpp"

namespace gplab {

// floor(sqrt(n)) for n >= 0, exact; returns -1 for negative input
inline int64_t isqrt_floor(int64_t n) {
    if (n < 0) return -1;
    auto r = static_cast<int64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

namespace detail {
inline int64_t checked_add(int64_t a, int64_t b) {
    int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("GaussInt add overflow");
    return r;
}
inline int64_t checked_sub(int64_t a, int64_t b) {
    int64_t r;
    if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("GaussInt sub overflow");
    return r;
}
inline int64_t checked_mul(int64_t a, int64_t b) {
    int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("GaussInt mul overflow");
    return r;
}
} // namespace detail

// Exact lattice point a+bi. Components are 64-bit; arithmetic is checked and
// throws std::overflow_error instead of wrapping.
struct GaussInt {
    int64_t re = 0;
    int64_t im = 0;

    constexpr GaussInt() = default;
    constexpr GaussInt(int64_t r, int64_t i) : re(r), im(i) {}

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_unit() const { return norm() == 1; }

    // re^2 + im^2, exact for the full 64-bit component range.
    unsigned __int128 norm() const {
        auto r = static_cast<unsigned __int128>(static_cast<__int128>(re) * re);
        auto i = static_cast<unsigned __int128>(static_cast<__int128>(im) * im);
        return r + i;
    }
    // Norm as int64; throws when it does not fit.
    int64_t norm64() const {
        unsigned __int128 n = norm();
        if (n > static_cast<unsigned __int128>(INT64_MAX))
            throw std::overflow_error("GaussInt norm exceeds 64-bit range");
        return static_cast<int64_t>(n);
    }
    double abs() const;
    double arg() const; // in (-pi, pi]

    GaussInt conj() const { return {re, -im}; }
    GaussInt mul_i() const { return {detail::checked_sub(0, im), re}; }
    // First-quadrant associate (re > 0, im >= 0); 0 maps to 0, units to 1.
    GaussInt canonical() const;

    GaussInt operator-() const { return {detail::checked_sub(0, re), detail::checked_sub(0, im)}; }
    friend GaussInt operator+(GaussInt a, GaussInt b) {
        return {detail::checked_add(a.re, b.re), detail::checked_add(a.im, b.im)};
    }
    friend GaussInt operator-(GaussInt a, GaussInt b) {
        return {detail::checked_sub(a.re, b.re), detail::checked_sub(a.im, b.im)};
    }
    friend GaussInt operator*(GaussInt a, GaussInt b) {
        using detail::checked_add;
        using detail::checked_mul;
        using detail::checked_sub;
        return {checked_sub(checked_mul(a.re, b.re), checked_mul(a.im, b.im)),
                checked_add(checked_mul(a.re, b.im), checked_mul(a.im, b.re))};
    }
    friend bool operator==(GaussInt a, GaussInt b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(GaussInt a, GaussInt b) { return !(a == b); }

    std::string str() const;
};

// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime_u64(uint64_t n);

// True iff g is a Gaussian prime: norm(g) is a rational prime, or g is a
// unit multiple of a rational prime = 3 (mod 4). Throws on g = 0.
bool is_gaussian_prime(GaussInt g);

// True iff d divides g exactly in Z[i]; d must be nonzero.
bool divides(GaussInt d, GaussInt g);

// Euclidean algorithm with nearest-lattice-point quotients; result is the
// canonical first-quadrant associate. Throws on (0, 0).
GaussInt gaussian_gcd(GaussInt a, GaussInt b);

// Decomposes a rational prime p = 1 (mod 4) as a^2 + b^2 with a > b > 0.
std::pair<uint64_t, uint64_t> two_squares(uint64_t p);

// --- lattice rounding and distances ------------------------------------

// Component-wise nearest lattice point; ties round half toward +inf in each
// component. Throws std::overflow_error when a component leaves long range.
GaussInt nearest_gauss(const ComplexHP& z);

struct NearestResult {
    GaussInt nearest;
    double sup_dist;    // max(||Re z||, ||Im z||), in [0, 1/2]
    double euclid_dist; // min over lattice q of |z - q|
};
NearestResult nearest_and_dist(const ComplexHP& z);

// ||Re z||, ||Im z|| and the sup distance at full working precision.
RealHP sup_dist_hp(const ComplexHP& z);
RealHP euclid_dist_sq_hp(const ComplexHP& z);

ComplexHP operator*(const ComplexHP& z, GaussInt g);
ComplexHP operator*(GaussInt g, const ComplexHP& z);
// z / g, exact division in C; g must be nonzero.
ComplexHP div(const ComplexHP& z, GaussInt g);
ComplexHP to_complex_hp(GaussInt g, mpfr_prec_t prec = RealHP::kDefaultPrec);

} // namespace gplab
