#include "rdval/pipeline.hpp"

#include "rdval/error.hpp"

#include <cmath>
#include <exception>
#include <string>

namespace rdval {

void PipelineSpec::validate() const {
    if (stages.empty()) throw DomainError("pipeline needs at least one stage");
    if (!std::isfinite(g_star)) throw DomainError("g_star must be finite");
    if (!std::isfinite(market_value)) throw DomainError("market_value must be finite");
    for (std::size_t i = 0; i < stages.size(); ++i) {
        try {
            stages[i].validate();
        } catch (const DomainError& e) {
            throw DomainError("stage " + std::to_string(i + 1) + ": " + e.what());
        }
    }
}

GridDensity chain_prior(const GridDensity& prev_posterior_g) {
    return prev_posterior_g.normalized();
}

PipelineReport run_pipeline(const PipelineSpec& spec, Execution exec) {
    spec.validate();
    const auto grid = g_grid(spec.g_prior, spec.grid_points);

    PipelineReport report;
    report.stage_reports.reserve(spec.stages.size());
    GridDensity prior = gridded(spec.g_prior, grid);
    std::optional<Gaussian1D> gaussian = spec.g_prior;
    double survival = 1.0;

    for (std::size_t n = 0; n < spec.stages.size(); ++n) {
        if (n > 0) {
            prior = chain_prior(report.stage_reports.back().posterior_g);
            gaussian.reset();
            if (spec.chaining == Chaining::MomentMatched) {
                gaussian = Gaussian1D(prior.mean(), prior.sd());
                prior = gridded(*gaussian, grid).normalized();
            }
        }
        try {
            report.stage_reports.push_back(
                evaluate_stage(spec.stages[n], prior, spec.g_star, gaussian, exec));
        } catch (const DegenerateStageError& e) {
            throw DegenerateStageError("stage " + std::to_string(n + 1) + ": " + e.what(), n + 1);
        } catch (const DegenerateDensityError& e) {
            throw DegenerateStageError("stage " + std::to_string(n + 1) + ": " + e.what(), n + 1);
        }
        report.g_priors.push_back(prior);
        survival *= report.stage_reports.back().assurance;
        report.cumulative_success.push_back(survival);
    }

    report.terminal_p_g_exceeds = report.stage_reports.back().p_g_exceeds_given_success;
    report.terminal_value = report.terminal_p_g_exceeds * survival * spec.market_value;
    return report;
}

double decision_tool_value(const PipelineSpec& spec, std::size_t stage_index,
                           const StageSpec& replacement, Execution exec) {
    if (stage_index < 1 || stage_index > spec.stages.size()) {
        throw DomainError("stage index " + std::to_string(stage_index) + " outside [1, " +
                          std::to_string(spec.stages.size()) + "]");
    }
    PipelineSpec alt = spec;
    alt.stages[stage_index - 1] = replacement;
    const double before = run_pipeline(spec, exec).terminal_p_g_exceeds;
    const double after = run_pipeline(alt, exec).terminal_p_g_exceeds;
    return (after - before) * spec.market_value;
}

SweepTable sweep_rho(const PipelineSpec& spec, std::size_t sweep_stage,
                     const std::vector<double>& rho_grid,
                     std::optional<std::size_t> conditioning_stage,
                     const std::vector<double>& conditioning_values) {
    spec.validate();
    const auto check_index = [&](std::size_t k, const char* what) {
        if (k < 1 || k > spec.stages.size()) {
            throw DomainError(std::string(what) + " index " + std::to_string(k) +
                              " outside [1, " + std::to_string(spec.stages.size()) + "]");
        }
    };
    check_index(sweep_stage, "sweep stage");
    if (rho_grid.empty()) throw DomainError("sweep grid is empty");
    for (double r : rho_grid) require_open_correlation(r);

    std::vector<std::optional<double>> conds;
    if (conditioning_stage) {
        check_index(*conditioning_stage, "conditioning stage");
        if (conditioning_values.empty()) throw DomainError("conditioning values are empty");
        for (double r : conditioning_values) {
            require_open_correlation(r);
            conds.emplace_back(r);
        }
    } else {
        conds.emplace_back(std::nullopt);
    }

    const std::size_t n_sweep = rho_grid.size();
    const std::size_t total = n_sweep * conds.size();
    std::vector<SweepRow> rows(total);
    std::vector<std::exception_ptr> errors(total);

    const auto n = static_cast<std::ptrdiff_t>(total);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        const auto idx = static_cast<std::size_t>(k);
        try {
            PipelineSpec s = spec;
            const double rho = rho_grid[idx % n_sweep];
            const auto cond = conds[idx / n_sweep];
            s.stages[sweep_stage - 1].rho = rho;
            if (cond) s.stages[*conditioning_stage - 1].rho = *cond;
            const auto rep = run_pipeline(s, Execution::Serial);
            rows[idx] = SweepRow{
                .rho_sweep = rho,
                .rho_conditioning = cond,
                .stage_assurance = rep.stage_reports[sweep_stage - 1].assurance,
                .cumulative_success = rep.cumulative_success.back(),
                .terminal_p_g_exceeds = rep.terminal_p_g_exceeds,
                .relative_change = std::nullopt,
                .absolute_change = std::nullopt,
            };
        } catch (...) {
            errors[idx] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    for (std::size_t k = 0; k < total; ++k) {
        if (k % n_sweep == 0) continue;
        const double prev = rows[k - 1].terminal_p_g_exceeds;
        const double cur = rows[k].terminal_p_g_exceeds;
        rows[k].absolute_change = cur - prev;
        if (prev > 0.0) rows[k].relative_change = cur / prev - 1.0;
    }
    return SweepTable{sweep_stage, conditioning_stage, std::move(rows)};
}

}  // namespace rdval
