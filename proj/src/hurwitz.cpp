#include "gplab/hurwitz.hpp"

#include <cmath>

namespace gplab {

nlohmann::json HurwitzExpansion::to_json() const {
    nlohmann::json j;
    j["constant"] = {constant.re.str(), constant.im.str()};
    j["precision_bits"] = static_cast<long>(constant.prec());
    j["terminated"] = terminated;
    auto& qs = j["quotients"] = nlohmann::json::array();
    for (const auto& a : quotients) qs.push_back({a.re, a.im});
    auto& cv = j["convergents"] = nlohmann::json::array();
    for (const auto& [p, q] : convergents)
        cv.push_back({{p.re, p.im}, {q.re, q.im}});
    return j;
}

RealHP convergent_defect(const ComplexHP& c, GaussInt a, GaussInt q) {
    // |c*q - a| * |q|; equals |c - a/q| * |q|^2
    ComplexHP r = c * q - to_complex_hp(a, c.prec());
    RealHP nq = RealHP::of_int(static_cast<long>(q.re), c.prec()).sqr() +
                RealHP::of_int(static_cast<long>(q.im), c.prec()).sqr();
    return r.abs_hp() * RealHP::sqrt(nq);
}

void require_convergent(const ComplexHP& c, GaussInt a, GaussInt q) {
    if (q.is_zero()) throw std::invalid_argument("convergent denominator is zero");
    if (!gaussian_gcd(a, q).is_unit())
        throw std::invalid_argument("convergent check failed: (a, q) not coprime");
    RealHP defect = convergent_defect(c, a, q);
    if (defect.cmp(1.0) > 0)
        throw std::invalid_argument("convergent check failed: |c - a/q| > |q|^-2 (defect " +
                                    std::to_string(defect.to_double()) + ")");
}

static int bit_length_u128(unsigned __int128 n) {
    int b = 0;
    while (n) { n >>= 1; ++b; }
    return b;
}

HurwitzExpansion hurwitz_expansion(const ComplexHP& c, int max_terms,
                                   std::optional<double> min_q_norm) {
    if (max_terms < 1) throw std::invalid_argument("hurwitz_expansion: max_terms must be >= 1");
    const mpfr_prec_t prec = c.prec();
    HurwitzExpansion out;
    out.constant = c;

    ComplexHP z = c;
    GaussInt p_prev{1, 0}, p_prev2{0, 0}; // p_{-1}, p_{-2}
    GaussInt q_prev{0, 0}, q_prev2{1, 0}; // q_{-1}, q_{-2}
    unsigned __int128 last_qnorm = 0;

    // remainder below this threshold certifies c in Q(i) at working precision
    RealHP tiny = RealHP::of(1.0, prec);
    mpfr_mul_2si(tiny.raw(), tiny.raw(), -static_cast<long>(prec / 2), MPFR_RNDN);

    for (int n = 0; n < max_terms; ++n) {
        GaussInt a = nearest_gauss(z);
        out.quotients.push_back(a);

        GaussInt p = a * p_prev + p_prev2;
        GaussInt q = a * q_prev + q_prev2;
        p_prev2 = p_prev; p_prev = p;
        q_prev2 = q_prev; q_prev = q;

        unsigned __int128 qn = q.norm();
        if (qn > 0) {
            if (qn <= last_qnorm)
                throw std::runtime_error("hurwitz_expansion: |q_n| not strictly increasing");
            last_qnorm = qn;
            // honest failure instead of silently emitting garbage convergents
            int qbits = (bit_length_u128(qn) + 1) / 2;
            if (4 * static_cast<mpfr_prec_t>(qbits) > prec)
                throw precision_error(
                    "hurwitz_expansion: working precision " + std::to_string(prec) +
                    " bits cannot certify convergents of bit length " + std::to_string(qbits));
            RealHP defect = convergent_defect(c, p, q);
            if (defect.cmp(1.0) > 0)
                throw std::runtime_error("hurwitz_expansion: approximation invariant violated at term " +
                                         std::to_string(n) + " (defect " +
                                         std::to_string(defect.to_double()) + ")");
            out.convergents.emplace_back(p, q);
        }

        ComplexHP w = z - to_complex_hp(a, prec);
        RealHP wr = w.re.abs(), wi = w.im.abs();
        const RealHP& rem = wr.cmp(wi) >= 0 ? wr : wi;
        if (rem.cmp(tiny) < 0) {
            out.terminated = true;
            break;
        }
        if (min_q_norm && static_cast<double>(qn) >= *min_q_norm) break;
        z = w.reciprocal();
    }
    return out;
}

} // namespace gplab
