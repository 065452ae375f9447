#include "gplab/hp.hpp"

#include <cstdio>
#include <memory>
#include <stdexcept>
#include <vector>

namespace gplab {

RealHP RealHP::of(double x, mpfr_prec_t prec) {
    RealHP r(prec);
    mpfr_set_d(r.v_, x, MPFR_RNDN);
    return r;
}

RealHP RealHP::of_int(long x, mpfr_prec_t prec) {
    RealHP r(prec);
    mpfr_set_si(r.v_, x, MPFR_RNDN);
    return r;
}

RealHP RealHP::parse(std::string_view dec, mpfr_prec_t prec) {
    RealHP r(prec);
    std::string s(dec);
    if (s.empty() || mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0)
        throw std::invalid_argument("not a decimal number: '" + s + "'");
    return r;
}

RealHP RealHP::with_prec(mpfr_prec_t prec) const {
    RealHP r(prec);
    mpfr_set(r.v_, v_, MPFR_RNDN);
    return r;
}

long RealHP::to_long_nearest() const {
    // floor(x + 1/2) with enough precision that the sum is exact.
    mpfr_exp_t e = mpfr_zero_p(v_) ? 0 : mpfr_get_exp(v_);
    if (e > 62) throw std::overflow_error("nearest integer exceeds 64-bit range");
    mpfr_prec_t p = prec() + (e > 0 ? e : 0) + 8;
    mpfr_t t;
    mpfr_init2(t, p);
    mpfr_add_d(t, v_, 0.5, MPFR_RNDN);
    mpfr_floor(t, t);
    if (!mpfr_fits_slong_p(t, MPFR_RNDZ)) {
        mpfr_clear(t);
        throw std::overflow_error("nearest integer exceeds long range");
    }
    long n = mpfr_get_si(t, MPFR_RNDZ);
    mpfr_clear(t);
    return n;
}

#define GPLAB_HP_BINOP(name, fn)                                   \
    RealHP RealHP::operator name(const RealHP& o) const {          \
        RealHP r(prec() > o.prec() ? prec() : o.prec());           \
        fn(r.v_, v_, o.v_, MPFR_RNDN);                             \
        return r;                                                  \
    }

GPLAB_HP_BINOP(+, mpfr_add)
GPLAB_HP_BINOP(-, mpfr_sub)
GPLAB_HP_BINOP(*, mpfr_mul)
#undef GPLAB_HP_BINOP

RealHP RealHP::operator/(const RealHP& o) const {
    if (o.is_zero()) throw std::invalid_argument("division by zero");
    RealHP r(prec() > o.prec() ? prec() : o.prec());
    mpfr_div(r.v_, v_, o.v_, MPFR_RNDN);
    return r;
}

RealHP RealHP::operator-() const {
    RealHP r(prec());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
}

RealHP RealHP::mul_int(long k) const {
    RealHP r(prec());
    mpfr_mul_si(r.v_, v_, k, MPFR_RNDN);
    return r;
}

RealHP RealHP::add_int(long k) const {
    RealHP r(prec());
    mpfr_add_si(r.v_, v_, k, MPFR_RNDN);
    return r;
}

RealHP RealHP::abs() const {
    RealHP r(prec());
    mpfr_abs(r.v_, v_, MPFR_RNDN);
    return r;
}

RealHP RealHP::sqr() const {
    RealHP r(prec());
    mpfr_sqr(r.v_, v_, MPFR_RNDN);
    return r;
}

RealHP RealHP::sqrt(const RealHP& x) {
    RealHP r(x.prec());
    mpfr_sqrt(r.v_, x.v_, MPFR_RNDN);
    return r;
}

RealHP RealHP::hypot(const RealHP& x, const RealHP& y) {
    RealHP r(x.prec() > y.prec() ? x.prec() : y.prec());
    mpfr_hypot(r.v_, x.v_, y.v_, MPFR_RNDN);
    return r;
}

RealHP RealHP::atan2(const RealHP& y, const RealHP& x, mpfr_prec_t prec) {
    RealHP r(prec);
    mpfr_atan2(r.v_, y.v_, x.v_, MPFR_RNDN);
    return r;
}

RealHP RealHP::pi(mpfr_prec_t prec) {
    RealHP r(prec);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
}

RealHP RealHP::frac01() const {
    RealHP r(prec() + 2);
    mpfr_frac(r.v_, v_, MPFR_RNDN);         // exact, keeps sign of v_
    if (mpfr_sgn(r.v_) < 0) mpfr_add_ui(r.v_, r.v_, 1, MPFR_RNDN);
    return r;
}

RealHP RealHP::dist_to_int() const {
    RealHP f = frac01();
    mpfr_t one_minus;
    mpfr_init2(one_minus, f.prec());
    mpfr_ui_sub(one_minus, 1, f.raw(), MPFR_RNDN);
    if (mpfr_cmp(one_minus, f.raw()) < 0) mpfr_set(f.raw(), one_minus, MPFR_RNDN);
    mpfr_clear(one_minus);
    return f;
}

std::string RealHP::str() const {
    // digits10 = ceil(prec * log10(2)) + 2 guarantees value round-trip
    long digits = static_cast<long>(static_cast<double>(prec()) * 0.30103) + 3;
    char* out = nullptr;
    if (mpfr_asprintf(&out, "%.*Rg", static_cast<int>(digits), v_) < 0)
        throw std::runtime_error("mpfr_asprintf failed");
    std::string s(out);
    mpfr_free_str(out);
    return s;
}

ComplexHP ComplexHP::reciprocal() const {
    if (is_zero()) throw std::invalid_argument("reciprocal of zero");
    RealHP n = norm_hp();
    return {re / n, (-im) / n};
}

} // namespace gplab
