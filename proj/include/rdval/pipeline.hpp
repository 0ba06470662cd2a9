#pragma once

// Stages in series. The normalized G posterior of stage n is the G prior of
// stage n+1; each stage brings its own delta prior and correlation. Stage 1
// couples a normal G prior exactly; later stages couple the carried,
// non-normal marginal through a Gaussian copula.

#include "rdval/stage.hpp"

#include <optional>
#include <vector>

namespace rdval {

enum class Chaining {
    GaussianCopula,  ///< default
    MomentMatched,   ///< carried marginal replaced by a normal of equal mean and sd
};

struct PipelineSpec {
    Gaussian1D g_prior;
    double g_star;
    std::vector<StageSpec> stages;
    double market_value = 1.0;
    Chaining chaining = Chaining::GaussianCopula;
    std::size_t grid_points = kDefaultGridPoints;

    void validate() const;
};

struct PipelineReport {
    std::vector<StageReport> stage_reports;
    std::vector<double> cumulative_success;
    /// Normalized G prior each stage was evaluated against.
    std::vector<GridDensity> g_priors;
    double terminal_p_g_exceeds;
    double terminal_value;  ///< terminal_p_g_exceeds * final cumulative success * market value
};

/// Normalized copy of a G posterior, to serve as the next stage's prior.
[[nodiscard]] GridDensity chain_prior(const GridDensity& prev_posterior_g);

/// Degenerate stages surface as DegenerateStageError carrying the 1-based index.
[[nodiscard]] PipelineReport run_pipeline(const PipelineSpec& spec,
                                          Execution exec = Execution::Parallel);

/// Currency value of swapping the tool at stage_index (1-based) for
/// `replacement`: change in terminal P(G > G*) times market value.
[[nodiscard]] double decision_tool_value(const PipelineSpec& spec, std::size_t stage_index,
                                         const StageSpec& replacement,
                                         Execution exec = Execution::Parallel);

struct SweepRow {
    double rho_sweep;
    std::optional<double> rho_conditioning;
    double stage_assurance;  ///< assurance of the swept stage
    double cumulative_success;
    double terminal_p_g_exceeds;
    /// Change vs the previous sweep point under the same conditioning value.
    std::optional<double> relative_change;
    std::optional<double> absolute_change;
};

struct SweepTable {
    std::size_t sweep_stage;
    std::optional<std::size_t> conditioning_stage;
    std::vector<SweepRow> rows;  ///< conditioning-major, sweep-minor order
};

/// Evaluates the Cartesian product of rho_grid (at sweep_stage) and
/// conditioning_values (at conditioning_stage). Stage indices are 1-based.
/// Grid points run concurrently; row order depends only on grid indices.
[[nodiscard]] SweepTable sweep_rho(const PipelineSpec& spec, std::size_t sweep_stage,
                                   const std::vector<double>& rho_grid,
                                   std::optional<std::size_t> conditioning_stage = std::nullopt,
                                   const std::vector<double>& conditioning_values = {});

}  // namespace rdval
