#include "hyperlc/coefficients.hpp"

#include <algorithm>
#include <cmath>

#include "hyperlc/grid.hpp"

namespace hlc {

std::string Coefficients::admissibility_violation(double nu1, double nu4, double nu5) {
    if (!std::isfinite(nu1) || !std::isfinite(nu4) || !std::isfinite(nu5))
        return "coefficients must be finite";
    if (!(nu4 > 0.0)) return "inadmissible coefficients: nu4 > 0 violated";
    if (!(nu1 > -2.0 * (nu4 + nu5)))
        return "inadmissible coefficients: nu1 > -2(nu4+nu5) violated";
    if (!(nu5 > -nu4)) return "inadmissible coefficients: nu5 > -nu4 violated";
    return {};
}

Coefficients::Coefficients(double nu1, double nu4, double nu5)
    : nu1_(nu1), nu4_(nu4), nu5_(nu5) {
    std::string err = admissibility_violation(nu1, nu4, nu5);
    if (!err.empty()) throw Error(err);
}

double Coefficients::ellipticity_constant() const {
    const double half_sum = 0.5 * (nu4_ + nu5_);
    const double planar = half_sum * std::min(1.0, 1.0 + nu1_ / (2.0 * (nu4_ + nu5_)));
    const double axial = std::min(half_sum, 0.5 * nu4_);
    return std::min(planar, axial);
}

}  // namespace hlc
