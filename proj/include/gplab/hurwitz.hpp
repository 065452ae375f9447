#pragma once

#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gplab/gauss.hpp"
#include "gplab/hp.hpp"

namespace gplab {

// Hurwitz continued fraction of a complex constant: partial quotients a_n and
// convergents (p_n, q_n) with the recurrence
//   p_n = a_n p_{n-1} + p_{n-2},  q_n = a_n q_{n-1} + q_{n-2},
// seeded p_{-1} = 1, p_{-2} = 0, q_{-1} = 0, q_{-2} = 1. Every stored
// convergent is checked to satisfy |c - p_n/q_n| <= |q_n|^-2 and |q_n| is
// strictly increasing.
struct HurwitzExpansion {
    ComplexHP constant;
    std::vector<GaussInt> quotients;
    std::vector<std::pair<GaussInt, GaussInt>> convergents; // (p_n, q_n)
    bool terminated = false; // c is in Q(i) at the working precision

    nlohmann::json to_json() const;
};

// Expands c until max_terms quotients are generated, |q_n|^2 reaches
// min_q_norm, or the remainder vanishes at working precision. Throws
// precision_error when the working precision of c cannot support the depth
// (prec(c) must stay >= 4x the bit length of |q_n|), and std::runtime_error
// if a convergent violates the approximation invariant.
HurwitzExpansion hurwitz_expansion(const ComplexHP& c, int max_terms,
                                   std::optional<double> min_q_norm = std::nullopt);

// |c - a/q| * |q|^2 evaluated at the working precision of c.
RealHP convergent_defect(const ComplexHP& c, GaussInt a, GaussInt q);

// Checks (a, q) coprime and |c - a/q| <= |q|^-2; throws std::invalid_argument
// with a diagnostic otherwise.
void require_convergent(const ComplexHP& c, GaussInt a, GaussInt q);

} // namespace gplab
