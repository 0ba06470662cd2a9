#pragma once

// Machine-readable outputs. Each artifact is built once as a Table and then
// rendered to CSV and/or JSON, so the two formats carry identical numbers
// (12 significant digits).

#include "rdval/mc_oracle.hpp"
#include "rdval/pipeline.hpp"
#include "rdval/rnpv.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace rdval {

enum class OutputFormat { Csv, Json, Both };

inline constexpr int kArtifactDigits = 12;
inline constexpr int kSummaryDigits = 3;

/// printf("%.*g") rendering.
[[nodiscard]] std::string format_sig(double x, int digits);

/// x rounded to `digits` significant digits (round trip through format_sig).
[[nodiscard]] double round_sig(double x, int digits);

using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    /// RFC 4180: comma separated, CRLF-free, quoted when needed, empty cell for missing.
    [[nodiscard]] std::string to_csv() const;
    /// {"columns": [...], "rows": [[...], ...]}; missing cells are null.
    [[nodiscard]] nlohmann::json to_json() const;
};

struct Artifact {
    std::string filename;
    std::string content;
};

/// Writes via a temporary file in the same directory followed by rename.
void write_atomic(const std::filesystem::path& path, const std::string& content);

void write_artifacts(const std::filesystem::path& dir, const std::vector<Artifact>& artifacts);

[[nodiscard]] Table stage_summary_table(const StageReport& report);

/// Plot data: delta grid with prior, posterior sub-density and the success
/// curve scaled by max P0(delta); G grid with prior and posterior columns.
[[nodiscard]] Table stage_curves_table(const StageSpec& spec, const StageReport& report,
                                       const GridDensity& g_prior);

/// Seven statistics rows by N stage columns.
[[nodiscard]] Table pipeline_statistics_table(const PipelineReport& report);

[[nodiscard]] Table pipeline_terminal_table(const PipelineSpec& spec, const PipelineReport& report);

/// G grid with the initial prior and, per stage, the normalized posterior and
/// the sub-density scaled to cumulative survival.
[[nodiscard]] Table pipeline_g_curves_table(const PipelineReport& report);

[[nodiscard]] Table sweep_table(const SweepTable& sweep);
[[nodiscard]] Table rnpv_table(const RnpvBreakdown& breakdown);
[[nodiscard]] Table mc_estimates_table(const McResult& mc);
[[nodiscard]] Table mc_gate_table(const std::vector<GateRow>& rows);

/// One CSV (`<stem>.csv`) and/or one JSON (`<stem>.json`) per table, with the
/// JSON object keyed by table name.
[[nodiscard]] std::vector<Artifact> render(const std::vector<std::pair<std::string, Table>>& tables,
                                           const std::string& json_stem, OutputFormat format);

}  // namespace rdval
