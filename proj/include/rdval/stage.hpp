#pragma once

// Single-stage tripartite model.
//
// A decision tool reports delta_hat ~ N(delta, sigma_hat); the stage succeeds
// when delta_hat > c. The prior on delta is normal and is coupled to the
// candidate quality G with correlation rho. Conditioning on success yields
// sub-densities over delta and G whose mass is the assurance.

#include "rdval/grid_density.hpp"
#include "rdval/kernels.hpp"
#include "rdval/normal.hpp"

#include <optional>
#include <variant>

namespace rdval {

/// Success when delta_hat > sigma_hat * Phi^{-1}(1 - alpha) + delta_min. The
/// delta_min term is the owning StageSpec's delta_min.
struct FrequentistAlpha {
    double alpha;
};

/// Success when delta_hat > c.
struct AbsoluteCutoff {
    double c;
};

/// The best fraction q of candidates pass, judged against the delta_hat
/// marginal N(mu_delta, sqrt(sigma_delta^2 + sigma_hat^2)).
struct TopFraction {
    double q;
};

using SuccessCriterion = std::variant<FrequentistAlpha, AbsoluteCutoff, TopFraction>;

struct StageSpec {
    double rho;               ///< predictive validity, in (-1, 1)
    Gaussian1D delta_prior;   ///< design prior on delta
    double sigma_hat;         ///< readout noise, > 0
    SuccessCriterion criterion;
    double delta_min = 0.0;   ///< truth boundary for false/true positives

    /// Throws DomainError on any violated invariant.
    void validate() const;
};

struct StageReport {
    double cutoff;
    double assurance;
    double fp;
    double tp;
    double p_above_given_success;
    double p_below_given_success;
    double p_g_exceeds_given_success;
    GridDensity posterior_delta;  ///< sub-density, mass = assurance
    GridDensity posterior_g;      ///< sub-density, mass = assurance
};

/// Assurance below this makes conditional statistics undefined.
inline constexpr double kDegenerateAssurance = 1e-10;

/// Quadrature and closed-form assurance must agree this closely.
inline constexpr double kAssuranceIntegrityTol = 1e-5;

/// Delta grid: mu_delta +/- 8 sigma_delta. The posterior integrand is bounded
/// by the prior, so nothing outside it carries mass.
[[nodiscard]] UniformGrid delta_grid(const StageSpec& spec,
                                     std::size_t n_points = kDefaultGridPoints);

/// G grid: mean +/- 10 sd.
[[nodiscard]] UniformGrid g_grid(const Gaussian1D& g_prior,
                                 std::size_t n_points = kDefaultGridPoints);

[[nodiscard]] GridDensity gridded(const Gaussian1D& g, const UniformGrid& grid);

[[nodiscard]] double cutoff(const StageSpec& spec);

/// P(success | delta) = Phi((delta - c) / sigma_hat).
[[nodiscard]] double success_prob_given_delta(double delta, const StageSpec& spec);

/// P(success | delta) * P0(delta) on the delta grid. Not normalized.
[[nodiscard]] GridDensity posterior_delta(const StageSpec& spec,
                                          std::size_t n_points = kDefaultGridPoints);

/// Phi((mu_delta - c) / sqrt(sigma_delta^2 + sigma_hat^2)).
[[nodiscard]] double assurance_closed_form(const StageSpec& spec);

/// Mass of posterior_delta, cross-checked against the closed form.
/// Throws NumericalIntegrityError if they differ by more than 1e-5.
[[nodiscard]] double assurance(const StageSpec& spec);

struct Classification {
    double fp;
    double tp;
};

[[nodiscard]] Classification fp_tp(const StageSpec& spec);

struct ConditionalClassification {
    double p_above;
    double p_below;
};

/// Throws DegenerateStageError when assurance < 1e-10.
[[nodiscard]] ConditionalClassification conditional_classification(const StageSpec& spec);

/// Posterior sub-density of G after a successful stage.
///
/// g_prior must be normalized. When gaussian_prior is given, g_prior is taken
/// to be that normal gridded and the exact bivariate-normal conditional is
/// used; otherwise G is coupled to delta through a Gaussian copula on the
/// gridded marginal.
[[nodiscard]] GridDensity posterior_g(const StageSpec& spec, const GridDensity& g_prior,
                                      std::optional<Gaussian1D> gaussian_prior = std::nullopt,
                                      Execution exec = Execution::Parallel);

/// P(G > g_star | success) = integrate(posterior_g, g_star, hi) / normalizer.
/// Throws DegenerateStageError when normalizer < 1e-10.
[[nodiscard]] double prob_g_exceeds(const GridDensity& posterior_g, double g_star,
                                    double normalizer);

[[nodiscard]] StageReport evaluate_stage(const StageSpec& spec, const GridDensity& g_prior,
                                         double g_star,
                                         std::optional<Gaussian1D> gaussian_prior = std::nullopt,
                                         Execution exec = Execution::Parallel);

/// Overload for a normal prior on G: grids it and uses the exact conditional.
[[nodiscard]] StageReport evaluate_stage(const StageSpec& spec, const Gaussian1D& g_prior,
                                         double g_star, Execution exec = Execution::Parallel);

}  // namespace rdval
