#include "rdval/cli.hpp"

#include "rdval/artifacts.hpp"
#include "rdval/config.hpp"
#include "rdval/error.hpp"
#include "rdval/mc_oracle.hpp"
#include "rdval/pipeline.hpp"
#include "rdval/rnpv.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

namespace rdval::cli {
namespace {

std::string s3(double x) { return format_sig(x, kSummaryDigits); }

double parse_number(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a number: '" + s + "'");
    }
    if (used != s.size() || !std::isfinite(v)) {
        throw std::invalid_argument("not a number: '" + s + "'");
    }
    return v;
}

struct Common {
    std::string config;
    std::string out_dir = ".";
    std::string format = "both";

    [[nodiscard]] OutputFormat output_format() const {
        if (format == "csv") return OutputFormat::Csv;
        if (format == "json") return OutputFormat::Json;
        return OutputFormat::Both;
    }
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config, "Model configuration (JSON)")->required();
    sub->add_option("--out", c.out_dir, "Output directory for artifacts");
    sub->add_option("--format", c.format, "Artifact format")
        ->check(CLI::IsMember({"csv", "json", "both"}));
}

void print_stage(std::ostream& out, std::size_t idx, const StageReport& r) {
    out << "stage " << idx << ": cutoff=" << s3(r.cutoff) << " assurance=" << s3(r.assurance)
        << " tp=" << s3(r.tp) << " fp=" << s3(r.fp)
        << " P(delta>delta_min|success)=" << s3(r.p_above_given_success)
        << " P(G>G*|success)=" << s3(r.p_g_exceeds_given_success) << "\n";
}

int cmd_stage(const Common& c, std::size_t stage, std::ostream& out) {
    const auto spec = load_pipeline_config(c.config);
    if (stage < 1 || stage > spec.stages.size()) {
        throw ConfigError("--stage " + std::to_string(stage) + " outside [1, " +
                          std::to_string(spec.stages.size()) + "]");
    }
    PipelineSpec upto = spec;
    upto.stages.erase(upto.stages.begin() + static_cast<std::ptrdiff_t>(stage), upto.stages.end());
    const auto report = run_pipeline(upto);
    const auto& r = report.stage_reports.back();
    const auto stem = "stage_" + std::to_string(stage);
    write_artifacts(c.out_dir,
                    render({{stem + "_summary", stage_summary_table(r)},
                            {stem + "_curves",
                             stage_curves_table(spec.stages[stage - 1], r, report.g_priors.back())}},
                           stem, c.output_format()));
    print_stage(out, stage, r);
    return kOk;
}

int cmd_pipeline(const Common& c, std::ostream& out) {
    const auto spec = load_pipeline_config(c.config);
    const auto report = run_pipeline(spec);
    write_artifacts(c.out_dir, render({{"pipeline_statistics", pipeline_statistics_table(report)},
                                       {"pipeline_terminal", pipeline_terminal_table(spec, report)},
                                       {"pipeline_g_curves", pipeline_g_curves_table(report)}},
                                      "pipeline", c.output_format()));
    for (std::size_t s = 0; s < report.stage_reports.size(); ++s) {
        print_stage(out, s + 1, report.stage_reports[s]);
        out << "  cumulative success=" << s3(report.cumulative_success[s]) << "\n";
    }
    out << "terminal P(G>G*|success)=" << s3(report.terminal_p_g_exceeds)
        << " terminal value=" << s3(report.terminal_value) << "\n";
    return kOk;
}

int cmd_sweep(const Common& c, std::size_t sweep_stage, const std::string& grid,
              std::optional<std::size_t> cond_stage, const std::string& cond_values,
              std::ostream& out) {
    std::vector<double> rhos;
    std::vector<double> conds;
    try {
        rhos = parse_rho_grid(grid);
        if (cond_stage) conds = parse_value_list(cond_values);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (cond_stage && conds.empty()) throw ConfigError("--cond-stage requires --cond-values");
    const auto spec = load_pipeline_config(c.config);
    const auto table = sweep_rho(spec, sweep_stage, rhos, cond_stage, conds);
    write_artifacts(c.out_dir, render({{"sweep", sweep_table(table)}}, "sweep", c.output_format()));
    for (const auto& r : table.rows) {
        out << "rho=" << s3(r.rho_sweep);
        if (r.rho_conditioning) out << " cond rho=" << s3(*r.rho_conditioning);
        out << " assurance=" << s3(r.stage_assurance)
            << " terminal P(G>G*|success)=" << s3(r.terminal_p_g_exceeds);
        if (r.relative_change) out << " change=" << s3(100.0 * *r.relative_change) << "%";
        out << "\n";
    }
    return kOk;
}

int cmd_rnpv(const Common& c, const std::string& from_pipeline, std::ostream& out) {
    auto spec = load_rnpv_config(c.config, !from_pipeline.empty());
    if (!from_pipeline.empty()) {
        const auto report = run_pipeline(load_pipeline_config(from_pipeline));
        spec.probs = implied_progression_probs(report);
        if (spec.probs.size() != spec.costs.size()) {
            throw ConfigError(c.config + ": field 'costs': " + std::to_string(spec.costs.size()) +
                              " entries for a " + std::to_string(spec.probs.size()) +
                              "-stage pipeline");
        }
    }
    const auto b = rnpv_breakdown(spec);
    write_artifacts(c.out_dir, render({{"rnpv", rnpv_table(b)}}, "rnpv", c.output_format()));
    out << "risk-adjusted reward: " << s3(b.reward_term) << "\n";
    for (std::size_t n = 0; n < b.cost_terms.size(); ++n) {
        out << "risk-adjusted cost " << n + 1 << " (p=" << s3(spec.probs[n])
            << "): " << s3(-b.cost_terms[n]) << "\n";
    }
    out << "rNPV: " << s3(b.value) << "\n";
    return kOk;
}

int cmd_mc(const Common& c, const McConfig& mc_cfg, bool strict, std::ostream& out) {
    const auto spec = load_pipeline_config(c.config);
    try {
        mc_cfg.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    const auto report = run_pipeline(spec);
    const auto mc = simulate_pipeline(spec, mc_cfg);
    const auto gate = compare_to_quadrature(report, mc);
    write_artifacts(c.out_dir, render({{"mc_estimates", mc_estimates_table(mc)},
                                       {"mc_vs_quadrature", mc_gate_table(gate)}},
                                      "mc", c.output_format()));
    std::size_t failures = 0;
    for (const auto& g : gate) {
        const char* status = g.status == GateStatus::Pass   ? "PASS"
                             : g.status == GateStatus::Fail ? "FAIL"
                                                            : "NA";
        if (g.status == GateStatus::Fail) ++failures;
        out << status << " " << g.name << " quadrature=" << s3(g.quadrature);
        if (g.status != GateStatus::NotEstimable) {
            out << " mc=" << s3(g.mc.value) << " se=" << s3(g.mc.std_error);
        }
        out << "\n";
    }
    out << failures << " of " << gate.size() << " statistics outside 3 standard errors\n";
    return strict && failures > 0 ? kGateFailure : kOk;
}

}  // namespace

std::vector<double> parse_value_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw std::invalid_argument("empty entry in value list '" + text + "'");
        out.push_back(parse_number(item));
    }
    if (out.empty()) throw std::invalid_argument("empty value list");
    return out;
}

std::vector<double> parse_rho_grid(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() == 1 && !parts[0].empty()) return {parse_number(parts[0])};
    if (parts.size() != 3) throw std::invalid_argument("rho grid must be a:step:b, got '" + text + "'");
    const double a = parse_number(parts[0]);
    const double step = parse_number(parts[1]);
    const double b = parse_number(parts[2]);
    if (!(step > 0.0)) throw std::invalid_argument("rho grid step must be positive");
    std::vector<double> out;
    for (std::size_t k = 0;; ++k) {
        const double v = a + static_cast<double>(k) * step;
        if (v > b + 1e-9 * step) break;
        out.push_back(round_sig(v, kArtifactDigits));
    }
    if (out.empty()) throw std::invalid_argument("rho grid '" + text + "' is empty");
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Valuation of multi-stage R&D programs and their decision tools", "rdval"};
    app.require_subcommand(1);

    Common common;
    std::size_t stage = 1;
    auto* stage_cmd = app.add_subcommand("stage", "Evaluate one stage and emit plot data");
    add_common(stage_cmd, common);
    stage_cmd->add_option("--stage", stage, "1-based stage index")->check(CLI::PositiveNumber);

    auto* pipe_cmd = app.add_subcommand("pipeline", "Evaluate all stages in series");
    add_common(pipe_cmd, common);

    std::size_t sweep_stage = 1;
    std::string rho_grid;
    std::size_t cond_stage = 0;
    std::string cond_values;
    auto* sweep_cmd = app.add_subcommand("sweep", "Sweep predictive validity of one stage");
    add_common(sweep_cmd, common);
    sweep_cmd->add_option("--sweep-stage", sweep_stage, "1-based stage to sweep")
        ->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--rho-grid", rho_grid, "Grid a:step:b")->required();
    auto* cond_opt = sweep_cmd->add_option("--cond-stage", cond_stage, "1-based conditioning stage")
                         ->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--cond-values", cond_values, "Conditioning rho values v1,v2,...");

    std::string from_pipeline;
    auto* rnpv_cmd = app.add_subcommand("rnpv", "Risk-adjusted NPV with term breakdown");
    add_common(rnpv_cmd, common);
    rnpv_cmd->add_option("--from-pipeline", from_pipeline,
                         "Pipeline config whose stage assurances supply the probabilities");

    McConfig mc_cfg;
    bool strict = false;
    auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo oracle and quadrature comparison");
    add_common(mc_cmd, common);
    mc_cmd->add_option("--replicates", mc_cfg.n_replicates, "Number of replicates");
    mc_cmd->add_option("--seed", mc_cfg.seed, "Random seed");
    mc_cmd->add_option("--batch-size", mc_cfg.batch_size, "Replicates per random stream");
    mc_cmd->add_flag("--strict", strict, "Exit 4 when any statistic fails the 3-SE gate");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "rdval: " << e.what() << "\n";
        return kConfigError;
    }

    try {
        if (*stage_cmd) return cmd_stage(common, stage, out);
        if (*pipe_cmd) return cmd_pipeline(common, out);
        if (*sweep_cmd) {
            std::optional<std::size_t> cs;
            if (*cond_opt) cs = cond_stage;
            return cmd_sweep(common, sweep_stage, rho_grid, cs, cond_values, out);
        }
        if (*rnpv_cmd) return cmd_rnpv(common, from_pipeline, out);
        if (*mc_cmd) return cmd_mc(common, mc_cfg, strict, out);
    } catch (const ConfigError& e) {
        err << "rdval: " << e.what() << "\n";
        return kConfigError;
    } catch (const DomainError& e) {
        err << "rdval: invalid model: " << e.what() << "\n";
        return kConfigError;
    } catch (const NumericalIntegrityError& e) {
        err << "rdval: numerical integrity check failed: " << e.what() << "\n";
        return kNumericalError;
    } catch (const DegenerateStageError& e) {
        err << "rdval: " << e.what() << "\n";
        return kNumericalError;
    } catch (const DegenerateDensityError& e) {
        err << "rdval: " << e.what() << "\n";
        return kNumericalError;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "rdval: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::runtime_error& e) {
        err << "rdval: " << e.what() << "\n";
        return kConfigError;
    }
    return kConfigError;
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace rdval::cli
