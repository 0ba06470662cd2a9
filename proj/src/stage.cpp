#include "rdval/stage.hpp"

#include "rdval/copula.hpp"
#include "rdval/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rdval {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

void check_probability(double p, const char* name) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError(std::string(name) + " must lie in (0, 1), got " + std::to_string(p));
    }
}

double marginal_readout_sd(const StageSpec& spec) {
    return std::hypot(spec.delta_prior.sd(), spec.sigma_hat);
}

double assurance_checked(const GridDensity& pd, const StageSpec& spec) {
    const double grid_mass = pd.total_mass();
    const double closed = assurance_closed_form(spec);
    if (std::fabs(grid_mass - closed) > kAssuranceIntegrityTol) {
        throw NumericalIntegrityError("assurance quadrature " + std::to_string(grid_mass) +
                                      " disagrees with closed form " + std::to_string(closed));
    }
    return grid_mass;
}

}  // namespace

void StageSpec::validate() const {
    require_open_correlation(rho);
    if (!std::isfinite(sigma_hat) || !(sigma_hat > 0.0)) {
        throw DomainError("sigma_hat must be positive and finite");
    }
    if (!std::isfinite(delta_min)) throw DomainError("delta_min must be finite");
    std::visit(overloaded{
                   [](const FrequentistAlpha& a) { check_probability(a.alpha, "alpha"); },
                   [](const AbsoluteCutoff& a) {
                       if (!std::isfinite(a.c)) throw DomainError("cutoff c must be finite");
                   },
                   [](const TopFraction& t) { check_probability(t.q, "q"); },
               },
               criterion);
}

UniformGrid delta_grid(const StageSpec& spec, std::size_t n_points) {
    return UniformGrid::centered(spec.delta_prior.mean(), 8.0 * spec.delta_prior.sd(), n_points);
}

UniformGrid g_grid(const Gaussian1D& g_prior, std::size_t n_points) {
    return UniformGrid::centered(g_prior.mean(), 10.0 * g_prior.sd(), n_points);
}

GridDensity gridded(const Gaussian1D& g, const UniformGrid& grid) {
    return GridDensity::from_function(grid, [&](double x) { return normal_pdf(x, g); });
}

double cutoff(const StageSpec& spec) {
    spec.validate();
    return std::visit(
        overloaded{
            [&](const FrequentistAlpha& a) {
                return spec.sigma_hat * std_normal_quantile(1.0 - a.alpha) + spec.delta_min;
            },
            [](const AbsoluteCutoff& a) { return a.c; },
            [&](const TopFraction& t) {
                return spec.delta_prior.mean() +
                       marginal_readout_sd(spec) * std_normal_quantile(1.0 - t.q);
            },
        },
        spec.criterion);
}

double success_prob_given_delta(double delta, const StageSpec& spec) {
    return std_normal_cdf((delta - cutoff(spec)) / spec.sigma_hat);
}

GridDensity posterior_delta(const StageSpec& spec, std::size_t n_points) {
    const double c = cutoff(spec);
    const auto grid = delta_grid(spec, n_points);
    return GridDensity::from_function(grid, [&](double d) {
        return std_normal_cdf((d - c) / spec.sigma_hat) * normal_pdf(d, spec.delta_prior);
    });
}

double assurance_closed_form(const StageSpec& spec) {
    return std_normal_cdf((spec.delta_prior.mean() - cutoff(spec)) / marginal_readout_sd(spec));
}

double assurance(const StageSpec& spec) { return assurance_checked(posterior_delta(spec), spec); }

Classification fp_tp(const StageSpec& spec) {
    const auto pd = posterior_delta(spec);
    const double below = pd.antiderivative(spec.delta_min);
    return {below, pd.total_mass() - below};
}

ConditionalClassification conditional_classification(const StageSpec& spec) {
    const auto pd = posterior_delta(spec);
    const double a = assurance_checked(pd, spec);
    if (a < kDegenerateAssurance) {
        throw DegenerateStageError("stage assurance " + std::to_string(a) +
                                   " too small for conditional statistics");
    }
    const double below = pd.antiderivative(spec.delta_min);
    const double p_below = below / a;
    return {1.0 - p_below, p_below};
}

GridDensity posterior_g(const StageSpec& spec, const GridDensity& g_prior,
                        std::optional<Gaussian1D> gaussian_prior, Execution exec) {
    spec.validate();
    const double prior_mass = g_prior.total_mass();
    if (!(prior_mass >= kDegenerateMass)) {
        throw DegenerateDensityError("posterior_g: G prior has zero mass");
    }
    if (std::fabs(prior_mass - 1.0) > 1e-6) {
        throw DomainError("posterior_g: G prior must be normalized (mass " +
                          std::to_string(prior_mass) + ")");
    }

    const auto pd = posterior_delta(spec);
    const auto& dgrid = pd.grid();
    const auto weights = dgrid.simpson_weights();
    std::vector<double> amps(pd.size());
    std::vector<double> locs(pd.size());
    for (std::size_t i = 0; i < pd.size(); ++i) amps[i] = weights[i] * pd[i];

    const double rho = spec.rho;
    const double s = std::sqrt(1.0 - rho * rho);
    const auto& delta = spec.delta_prior;
    std::vector<double> out(g_prior.size());

    if (gaussian_prior) {
        const auto& g = *gaussian_prior;
        const double slope = rho * g.sd() / delta.sd();
        for (std::size_t i = 0; i < pd.size(); ++i) {
            locs[i] = g.mean() + slope * (dgrid.node(i) - delta.mean());
        }
        const auto points = g_prior.grid().nodes();
        kernels::gaussian_mixture(exec, points, locs, amps, g.sd() * s, out);
    } else {
        const auto scores = copula_scores(g_prior);
        for (std::size_t i = 0; i < pd.size(); ++i) {
            locs[i] = rho * (dgrid.node(i) - delta.mean()) / delta.sd();
        }
        kernels::gaussian_mixture(exec, scores.z, locs, amps, s, out);
        for (std::size_t j = 0; j < out.size(); ++j) out[j] *= scores.ratio[j];
    }
    return GridDensity(g_prior.grid(), std::move(out));
}

double prob_g_exceeds(const GridDensity& posterior_g, double g_star, double normalizer) {
    if (!(normalizer >= kDegenerateAssurance)) {
        throw DegenerateStageError("P(G > G*) undefined: success probability " +
                                   std::to_string(normalizer));
    }
    const double a = std::clamp(g_star, posterior_g.lo(), posterior_g.hi());
    return std::clamp(integrate(posterior_g, a, posterior_g.hi()) / normalizer, 0.0, 1.0);
}

StageReport evaluate_stage(const StageSpec& spec, const GridDensity& g_prior, double g_star,
                           std::optional<Gaussian1D> gaussian_prior, Execution exec) {
    const double c = cutoff(spec);
    auto pd = posterior_delta(spec);
    const double a = assurance_checked(pd, spec);
    if (a < kDegenerateAssurance) {
        throw DegenerateStageError("stage assurance " + std::to_string(a) +
                                   " too small for conditional statistics");
    }
    const double fp = pd.antiderivative(spec.delta_min);
    const double tp = a - fp;
    const double p_below = fp / a;

    auto pg = posterior_g(spec, g_prior, gaussian_prior, exec);
    const double g_mass = pg.total_mass();
    if (std::fabs(g_mass - a) > 1e-4) {
        throw NumericalIntegrityError("posterior G mass " + std::to_string(g_mass) +
                                      " disagrees with assurance " + std::to_string(a));
    }
    const double exceed = prob_g_exceeds(pg, g_star, g_mass);

    return StageReport{
        .cutoff = c,
        .assurance = a,
        .fp = fp,
        .tp = tp,
        .p_above_given_success = 1.0 - p_below,
        .p_below_given_success = p_below,
        .p_g_exceeds_given_success = exceed,
        .posterior_delta = std::move(pd),
        .posterior_g = std::move(pg),
    };
}

StageReport evaluate_stage(const StageSpec& spec, const Gaussian1D& g_prior, double g_star,
                           Execution exec) {
    return evaluate_stage(spec, gridded(g_prior, g_grid(g_prior)), g_star, g_prior, exec);
}

}  // namespace rdval
