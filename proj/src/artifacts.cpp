#include "rdval/artifacts.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <system_error>

#include <unistd.h>

namespace rdval {
namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string cell_text(const Cell& c) {
    if (std::holds_alternative<double>(c)) return format_sig(std::get<double>(c), kArtifactDigits);
    if (std::holds_alternative<std::int64_t>(c)) return std::to_string(std::get<std::int64_t>(c));
    if (std::holds_alternative<std::string>(c)) return csv_escape(std::get<std::string>(c));
    return {};
}

nlohmann::json cell_json(const Cell& c) {
    if (std::holds_alternative<double>(c)) {
        const double v = std::get<double>(c);
        if (!std::isfinite(v)) return nullptr;
        return round_sig(v, kArtifactDigits);
    }
    if (std::holds_alternative<std::int64_t>(c)) return std::get<std::int64_t>(c);
    if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
    return nullptr;
}

Cell opt(const std::optional<double>& v) {
    return v ? Cell{*v} : Cell{};
}

const char* status_name(GateStatus s) {
    switch (s) {
        case GateStatus::Pass: return "PASS";
        case GateStatus::Fail: return "FAIL";
        case GateStatus::NotEstimable: return "NA";
    }
    return "NA";
}

}  // namespace

std::string format_sig(double x, int digits) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) x = 0.0;  // drop negative zero
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

double round_sig(double x, int digits) {
    if (!std::isfinite(x)) return x;
    return std::stod(format_sig(x, digits));
}

std::string Table::to_csv() const {
    std::string out;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out += ',';
        out += csv_escape(columns[i]);
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += cell_text(row[i]);
        }
        out += '\n';
    }
    return out;
}

nlohmann::json Table::to_json() const {
    nlohmann::json j;
    j["columns"] = columns;
    auto rows_json = nlohmann::json::array();
    for (const auto& row : rows) {
        auto r = nlohmann::json::array();
        for (const auto& c : row) r.push_back(cell_json(c));
        rows_json.push_back(std::move(r));
    }
    j["rows"] = std::move(rows_json);
    return j;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot move artifact into place at '" + path.string() +
                                 "': " + ec.message());
    }
}

void write_artifacts(const std::filesystem::path& dir, const std::vector<Artifact>& artifacts) {
    std::filesystem::create_directories(dir);
    for (const auto& a : artifacts) write_atomic(dir / a.filename, a.content);
}

Table stage_summary_table(const StageReport& r) {
    Table t{{"statistic", "value"}, {}};
    const auto add = [&](const char* name, double v) { t.rows.push_back({std::string(name), v}); };
    add("cutoff", r.cutoff);
    add("assurance", r.assurance);
    add("p_success_and_above", r.tp);
    add("p_success_and_below", r.fp);
    add("p_above_given_success", r.p_above_given_success);
    add("p_below_given_success", r.p_below_given_success);
    add("p_g_exceeds_given_success", r.p_g_exceeds_given_success);
    add("posterior_delta_mass", r.posterior_delta.total_mass());
    add("posterior_g_mass", r.posterior_g.total_mass());
    return t;
}

Table stage_curves_table(const StageSpec& spec, const StageReport& report,
                         const GridDensity& g_prior) {
    Table t{{"index", "delta", "prior_delta", "posterior_delta", "success_scaled", "g", "prior_g",
             "posterior_g", "posterior_g_normalized"},
            {}};
    const auto& pd = report.posterior_delta;
    const auto& pg = report.posterior_g;
    const double peak = normal_pdf(spec.delta_prior.mean(), spec.delta_prior);
    const double g_mass = pg.total_mass();
    const std::size_t n = std::max(pd.size(), pg.size());
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Cell> row{static_cast<std::int64_t>(i)};
        if (i < pd.size()) {
            const double d = pd.grid().node(i);
            row.insert(row.end(), {d, normal_pdf(d, spec.delta_prior), pd[i],
                                   std_normal_cdf((d - report.cutoff) / spec.sigma_hat) * peak});
        } else {
            row.insert(row.end(), {Cell{}, Cell{}, Cell{}, Cell{}});
        }
        if (i < pg.size()) {
            row.insert(row.end(),
                       {pg.grid().node(i), g_prior[i], pg[i], g_mass > 0 ? pg[i] / g_mass : 0.0});
        } else {
            row.insert(row.end(), {Cell{}, Cell{}, Cell{}, Cell{}});
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table pipeline_statistics_table(const PipelineReport& report) {
    Table t{{"statistic"}, {}};
    const std::size_t n = report.stage_reports.size();
    for (std::size_t s = 0; s < n; ++s) t.columns.push_back("stage_" + std::to_string(s + 1));
    const auto add = [&](const char* name, auto get) {
        std::vector<Cell> row{std::string(name)};
        for (std::size_t s = 0; s < n; ++s) row.emplace_back(get(s));
        t.rows.push_back(std::move(row));
    };
    const auto& st = report.stage_reports;
    add("p_study_success", [&](std::size_t s) { return st[s].assurance; });
    add("cumulative_p_study_success", [&](std::size_t s) { return report.cumulative_success[s]; });
    add("p_success_and_above", [&](std::size_t s) { return st[s].tp; });
    add("p_success_and_below", [&](std::size_t s) { return st[s].fp; });
    add("p_above_given_success", [&](std::size_t s) { return st[s].p_above_given_success; });
    add("p_below_given_success", [&](std::size_t s) { return st[s].p_below_given_success; });
    add("p_g_exceeds_given_success",
        [&](std::size_t s) { return st[s].p_g_exceeds_given_success; });
    return t;
}

Table pipeline_terminal_table(const PipelineSpec& spec, const PipelineReport& report) {
    return Table{{"statistic", "value"},
                 {{std::string("terminal_p_g_exceeds"), report.terminal_p_g_exceeds},
                  {std::string("cumulative_success"), report.cumulative_success.back()},
                  {std::string("market_value"), spec.market_value},
                  {std::string("terminal_value"), report.terminal_value}}};
}

Table pipeline_g_curves_table(const PipelineReport& report) {
    Table t{{"g", "prior_g"}, {}};
    const std::size_t n_stages = report.stage_reports.size();
    for (std::size_t s = 0; s < n_stages; ++s) {
        const auto k = std::to_string(s + 1);
        t.columns.push_back("stage_" + k + "_normalized");
        t.columns.push_back("stage_" + k + "_subdensity");
    }
    const auto& prior = report.g_priors.front();
    std::vector<double> mass(n_stages);
    for (std::size_t s = 0; s < n_stages; ++s) {
        mass[s] = report.stage_reports[s].posterior_g.total_mass();
    }
    for (std::size_t j = 0; j < prior.size(); ++j) {
        std::vector<Cell> row{prior.grid().node(j), prior[j]};
        for (std::size_t s = 0; s < n_stages; ++s) {
            const double v = report.stage_reports[s].posterior_g[j];
            const double before = s == 0 ? 1.0 : report.cumulative_success[s - 1];
            row.emplace_back(v / mass[s]);
            row.emplace_back(v * before);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table sweep_table(const SweepTable& sweep) {
    Table t{{"rho_sweep", "rho_conditioning", "assurance", "cumulative_success",
             "terminal_p_g_exceeds", "relative_change", "absolute_change"},
            {}};
    for (const auto& r : sweep.rows) {
        t.rows.push_back({r.rho_sweep, opt(r.rho_conditioning), r.stage_assurance,
                          r.cumulative_success, r.terminal_p_g_exceeds, opt(r.relative_change),
                          opt(r.absolute_change)});
    }
    return t;
}

Table rnpv_table(const RnpvBreakdown& b) {
    Table t{{"term", "value"}, {}};
    t.rows.push_back({std::string("risk_adjusted_reward"), b.reward_term});
    for (std::size_t n = 0; n < b.cost_terms.size(); ++n) {
        t.rows.push_back({"risk_adjusted_cost_" + std::to_string(n + 1), -b.cost_terms[n]});
    }
    t.rows.push_back({std::string("rnpv"), b.value});
    return t;
}

Table mc_estimates_table(const McResult& mc) {
    Table t{{"statistic", "value", "std_error", "n", "estimable"}, {}};
    for (const auto& e : mc.entries()) {
        const auto& m = e.estimate;
        t.rows.push_back({e.name, m.estimable ? Cell{m.value} : Cell{},
                          m.estimable ? Cell{m.std_error} : Cell{},
                          static_cast<std::int64_t>(m.n), std::string(m.estimable ? "yes" : "no")});
    }
    return t;
}

Table mc_gate_table(const std::vector<GateRow>& rows) {
    Table t{{"statistic", "quadrature", "mc", "std_error", "z_score", "status"}, {}};
    for (const auto& r : rows) {
        const bool est = r.status != GateStatus::NotEstimable;
        t.rows.push_back({r.name, r.quadrature, est ? Cell{r.mc.value} : Cell{},
                          est ? Cell{r.mc.std_error} : Cell{}, est ? Cell{r.z_score} : Cell{},
                          std::string(status_name(r.status))});
    }
    return t;
}

std::vector<Artifact> render(const std::vector<std::pair<std::string, Table>>& tables,
                             const std::string& json_stem, OutputFormat format) {
    std::vector<Artifact> out;
    if (format != OutputFormat::Json) {
        for (const auto& [name, table] : tables) out.push_back({name + ".csv", table.to_csv()});
    }
    if (format != OutputFormat::Csv) {
        nlohmann::json j = nlohmann::json::object();
        for (const auto& [name, table] : tables) j[name] = table.to_json();
        out.push_back({json_stem + ".json", j.dump(2) + "\n"});
    }
    return out;
}

}  // namespace rdval
