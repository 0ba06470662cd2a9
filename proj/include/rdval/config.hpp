#pragma once

// JSON model configuration. See docs/config-schema.md for the format.

#include "rdval/pipeline.hpp"
#include "rdval/rnpv.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace rdval {

inline constexpr int kSchemaVersion = 1;

/// Malformed or invalid configuration. what() names the file and either the
/// line/column of a syntax error or the offending field path.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using ModelConfig = std::variant<PipelineSpec, RnpvSpec>;

[[nodiscard]] ModelConfig parse_config(std::string_view text, const std::string& source = "<input>");
[[nodiscard]] ModelConfig load_config(const std::filesystem::path& path);

/// Loads a config and requires it to describe a pipeline.
[[nodiscard]] PipelineSpec load_pipeline_config(const std::filesystem::path& path);

/// Loads a config and requires it to describe an rNPV model. The probs list
/// may be omitted only when allow_missing_probs is set.
[[nodiscard]] RnpvSpec load_rnpv_config(const std::filesystem::path& path,
                                        bool allow_missing_probs = false);

}  // namespace rdval
