#pragma once

#include <string>

namespace hlc {

/// Leslie viscosity triple for the specialized stress model (nu2 = nu3 = 0,
/// nu5 = nu6, no kinematic transport).  Admissibility:
///   nu4 > 0,   nu1 > -2(nu4 + nu5),   nu5 > -nu4.
/// These inequalities make the diagonalized viscous symbol strictly positive
/// away from frequency zero.
class Coefficients {
  public:
    Coefficients(double nu1, double nu4, double nu5);

    double nu1() const { return nu1_; }
    double nu4() const { return nu4_; }
    double nu5() const { return nu5_; }

    /// Largest c with every viscous eigenvalue >= c*|xi|^2:
    /// min{ (nu4+nu5)/2 * min{1, 1 + nu1/(2(nu4+nu5))},  (nu4+nu5)/2,  nu4/2 }.
    double ellipticity_constant() const;

    /// Error message naming the violated inequality, or empty if admissible.
    static std::string admissibility_violation(double nu1, double nu4, double nu5);

  private:
    double nu1_, nu4_, nu5_;
};

}  // namespace hlc
