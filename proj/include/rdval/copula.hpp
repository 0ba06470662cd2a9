#pragma once

// Gaussian-copula coupling of a gridded G marginal with a normal delta score.
//
// With u = F(g) the marginal CDF and z_g = Phi^{-1}(u), the conditional
// density of G given the delta score z_d at correlation rho is
//
//   f(g | z_d) = f(g) * phi((z_g - rho z_d) / s) / (s * phi(z_g)),  s = sqrt(1 - rho^2)
//
// which reduces to the bivariate-normal conditional when f is normal.

#include "rdval/grid_density.hpp"

#include <vector>

namespace rdval {

/// Probabilities are clamped to [eps, 1 - eps] before taking normal scores.
inline constexpr double kCopulaClamp = 1e-12;

/// Per-node quantities of a marginal that do not depend on rho or z_d.
struct CopulaScores {
    std::vector<double> z;      ///< Phi^{-1}(F(g_j)), clamped
    std::vector<double> ratio;  ///< f(g_j) / phi(z_j)
};

/// Requires a unit-mass marginal (within 1e-6); throws DomainError otherwise.
[[nodiscard]] CopulaScores copula_scores(const GridDensity& g_marginal);

[[nodiscard]] GridDensity copula_conditional_g(const GridDensity& g_marginal, double rho,
                                               double z_delta);

}  // namespace rdval
