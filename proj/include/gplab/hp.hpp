#pragma once

#include <mpfr.h>

#include <cstdint>
#include <string>
#include <string_view>

#include "gplab/errors.hpp"

namespace gplab {

// Extended-precision real backed by MPFR. Every arithmetic operation is
// correctly rounded (RNDN) at the result precision, which is the maximum of
// the operand precisions unless stated otherwise.
class RealHP {
public:
    static constexpr mpfr_prec_t kDefaultPrec = 256;

    RealHP() { mpfr_init2(v_, kDefaultPrec); mpfr_set_zero(v_, 1); }
    explicit RealHP(mpfr_prec_t prec) { mpfr_init2(v_, clamp(prec)); mpfr_set_zero(v_, 1); }

    RealHP(const RealHP& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    RealHP(RealHP&& o) noexcept { mpfr_init2(v_, MPFR_PREC_MIN); mpfr_swap(v_, o.v_); }
    RealHP& operator=(const RealHP& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    RealHP& operator=(RealHP&& o) noexcept {
        if (this != &o) mpfr_swap(v_, o.v_);
        return *this;
    }
    ~RealHP() { mpfr_clear(v_); }

    static RealHP of(double x, mpfr_prec_t prec = kDefaultPrec);
    static RealHP of_int(long x, mpfr_prec_t prec = kDefaultPrec);
    // Parses a decimal string; throws std::invalid_argument on malformed input.
    static RealHP parse(std::string_view dec, mpfr_prec_t prec = kDefaultPrec);

    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
    // Same numeric value re-homed at a new precision (exact when widening).
    RealHP with_prec(mpfr_prec_t prec) const;

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    // Nearest integer with ties rounded toward +inf; throws on overflow.
    long to_long_nearest() const;

    bool is_zero() const { return mpfr_zero_p(v_); }
    int sign() const { return mpfr_sgn(v_); }
    int cmp(const RealHP& o) const { return mpfr_cmp(v_, o.v_); }
    int cmp(double d) const { return mpfr_cmp_d(v_, d); }
    bool operator<(const RealHP& o) const { return cmp(o) < 0; }
    bool operator<=(const RealHP& o) const { return cmp(o) <= 0; }
    bool operator==(const RealHP& o) const { return cmp(o) == 0; }

    RealHP operator-() const;
    RealHP operator+(const RealHP& o) const;
    RealHP operator-(const RealHP& o) const;
    RealHP operator*(const RealHP& o) const;
    RealHP operator/(const RealHP& o) const;
    RealHP mul_int(long k) const;
    RealHP add_int(long k) const;
    RealHP abs() const;
    RealHP sqr() const;

    static RealHP sqrt(const RealHP& x);
    static RealHP hypot(const RealHP& x, const RealHP& y);
    static RealHP atan2(const RealHP& y, const RealHP& x, mpfr_prec_t prec);
    static RealHP pi(mpfr_prec_t prec);

    // x - floor(x), exact, in [0, 1).
    RealHP frac01() const;
    // Distance to the nearest integer, in [0, 1/2].
    RealHP dist_to_int() const;

    // Decimal string with enough digits to round-trip at this precision.
    std::string str() const;

    mpfr_srcptr raw() const { return v_; }
    mpfr_ptr raw() { return v_; }

private:
    static mpfr_prec_t clamp(mpfr_prec_t p) { return p < MPFR_PREC_MIN ? MPFR_PREC_MIN : p; }
    mpfr_t v_;
};

// Complex value with extended-precision components.
struct ComplexHP {
    RealHP re, im;

    ComplexHP() = default;
    explicit ComplexHP(mpfr_prec_t prec) : re(prec), im(prec) {}
    ComplexHP(RealHP r, RealHP i) : re(std::move(r)), im(std::move(i)) {}

    static ComplexHP of(double r, double i, mpfr_prec_t prec = RealHP::kDefaultPrec) {
        return {RealHP::of(r, prec), RealHP::of(i, prec)};
    }

    mpfr_prec_t prec() const { return re.prec() > im.prec() ? re.prec() : im.prec(); }
    ComplexHP with_prec(mpfr_prec_t p) const { return {re.with_prec(p), im.with_prec(p)}; }

    bool is_zero() const { return re.is_zero() && im.is_zero(); }

    ComplexHP operator+(const ComplexHP& o) const { return {re + o.re, im + o.im}; }
    ComplexHP operator-(const ComplexHP& o) const { return {re - o.re, im - o.im}; }
    ComplexHP operator*(const ComplexHP& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    // 1/z; throws std::invalid_argument on zero.
    ComplexHP reciprocal() const;

    RealHP norm_hp() const { return re.sqr() + im.sqr(); }
    RealHP abs_hp() const { return RealHP::hypot(re, im); }
    double abs_d() const { return abs_hp().to_double(); }
};

} // namespace gplab
