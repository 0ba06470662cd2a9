#include "rdval/copula.hpp"

#include "rdval/error.hpp"
#include "rdval/normal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rdval {

CopulaScores copula_scores(const GridDensity& g_marginal) {
    const double mass = g_marginal.total_mass();
    if (!(mass >= kDegenerateMass)) {
        throw DegenerateDensityError("copula marginal has zero mass");
    }
    if (std::fabs(mass - 1.0) > 1e-6) {
        throw DomainError("copula marginal must be normalized (mass " + std::to_string(mass) +
                          ")");
    }
    const auto cdf = cdf_at_nodes(g_marginal);
    CopulaScores s;
    s.z.resize(cdf.size());
    s.ratio.resize(cdf.size());
    for (std::size_t j = 0; j < cdf.size(); ++j) {
        const double u = std::clamp(cdf[j], kCopulaClamp, 1.0 - kCopulaClamp);
        s.z[j] = std_normal_quantile(u);
        const double f = g_marginal[j];
        s.ratio[j] = f == 0.0 ? 0.0 : f / std_normal_pdf(s.z[j]);
    }
    return s;
}

GridDensity copula_conditional_g(const GridDensity& g_marginal, double rho, double z_delta) {
    require_open_correlation(rho);
    const auto scores = copula_scores(g_marginal);
    const double s = std::sqrt(1.0 - rho * rho);
    std::vector<double> out(g_marginal.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] = scores.ratio[j] * std_normal_pdf((scores.z[j] - rho * z_delta) / s) / s;
    }
    return GridDensity(g_marginal.grid(), std::move(out));
}

}  // namespace rdval
