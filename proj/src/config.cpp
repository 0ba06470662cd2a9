#include "rdval/config.hpp"

#include "rdval/error.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace rdval {
namespace {

using nlohmann::json;

class Reader {
public:
    explicit Reader(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(const std::string& field, const std::string& msg) const {
        throw ConfigError(source_ + ": field '" + field + "': " + msg);
    }

    const json& member(const json& obj, const std::string& path, const char* name) const {
        if (!obj.contains(name)) fail(join(path, name), "missing required field");
        return obj.at(name);
    }

    double number(const json& obj, const std::string& path, const char* name) const {
        const auto& v = member(obj, path, name);
        if (!v.is_number()) fail(join(path, name), "expected a number");
        return v.get<double>();
    }

    double number_or(const json& obj, const std::string& path, const char* name,
                     double fallback) const {
        return obj.contains(name) ? number(obj, path, name) : fallback;
    }

    std::vector<double> numbers(const json& obj, const std::string& path, const char* name) const {
        const auto& v = member(obj, path, name);
        const std::string p = join(path, name);
        if (!v.is_array()) fail(p, "expected an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number()) fail(p + "[" + std::to_string(i) + "]", "expected a number");
            out.push_back(v[i].get<double>());
        }
        return out;
    }

    std::string string(const json& obj, const std::string& path, const char* name) const {
        const auto& v = member(obj, path, name);
        if (!v.is_string()) fail(join(path, name), "expected a string");
        return v.get<std::string>();
    }

    void only_keys(const json& obj, const std::string& path,
                   std::initializer_list<const char*> allowed) const {
        const std::set<std::string> keys(allowed.begin(), allowed.end());
        for (const auto& [k, _] : obj.items()) {
            if (!keys.contains(k)) fail(join(path, k), "unknown field");
        }
    }

    static std::string join(const std::string& path, const std::string& name) {
        return path.empty() ? name : path + "." + name;
    }

private:
    std::string source_;
};

SuccessCriterion read_criterion(const Reader& r, const json& obj, const std::string& path) {
    if (!obj.is_object()) r.fail(path, "expected an object");
    const std::string type = r.string(obj, path, "type");
    if (type == "frequentist_alpha") {
        r.only_keys(obj, path, {"type", "alpha"});
        return FrequentistAlpha{r.number(obj, path, "alpha")};
    }
    if (type == "absolute_cutoff") {
        r.only_keys(obj, path, {"type", "c"});
        return AbsoluteCutoff{r.number(obj, path, "c")};
    }
    if (type == "top_fraction") {
        r.only_keys(obj, path, {"type", "q"});
        return TopFraction{r.number(obj, path, "q")};
    }
    r.fail(path + ".type",
           "unknown criterion '" + type + "' (expected frequentist_alpha, absolute_cutoff or top_fraction)");
}

Gaussian1D read_gaussian(const Reader& r, const json& obj, const std::string& path) {
    if (!obj.is_object()) r.fail(path, "expected an object with mean and sd");
    r.only_keys(obj, path, {"mean", "sd"});
    const double mean = r.number(obj, path, "mean");
    const double sd = r.number(obj, path, "sd");
    if (!(sd > 0.0)) r.fail(path + ".sd", "must be > 0");
    return Gaussian1D(mean, sd);
}

StageSpec read_stage(const Reader& r, const json& obj, const std::string& path) {
    if (!obj.is_object()) r.fail(path, "expected an object");
    r.only_keys(obj, path,
                {"rho", "mu_delta", "sigma_delta", "sigma_hat", "delta_min", "criterion"});
    const double rho = r.number(obj, path, "rho");
    if (!(rho > -1.0 && rho < 1.0)) r.fail(path + ".rho", "must lie in (-1, 1)");
    const double mu = r.number(obj, path, "mu_delta");
    const double sd = r.number(obj, path, "sigma_delta");
    if (!(sd > 0.0)) r.fail(path + ".sigma_delta", "must be > 0");
    const double sh = r.number(obj, path, "sigma_hat");
    if (!(sh > 0.0)) r.fail(path + ".sigma_hat", "must be > 0");
    StageSpec s{rho, Gaussian1D(mu, sd), sh,
                read_criterion(r, r.member(obj, path, "criterion"), path + ".criterion"),
                r.number_or(obj, path, "delta_min", 0.0)};
    try {
        s.validate();
    } catch (const DomainError& e) {
        r.fail(path, e.what());
    }
    return s;
}

PipelineSpec read_pipeline(const Reader& r, const json& root) {
    r.only_keys(root, "",
                {"schema_version", "kind", "g_prior", "g_star", "market_value", "chaining",
                 "grid_points", "stages", "description"});
    const auto& stages_json = r.member(root, "", "stages");
    if (!stages_json.is_array() || stages_json.empty()) {
        r.fail("stages", "expected a non-empty array");
    }
    std::vector<StageSpec> stages;
    for (std::size_t i = 0; i < stages_json.size(); ++i) {
        stages.push_back(read_stage(r, stages_json[i], "stages[" + std::to_string(i) + "]"));
    }
    PipelineSpec spec{read_gaussian(r, r.member(root, "", "g_prior"), "g_prior"),
                      r.number(root, "", "g_star"), std::move(stages),
                      r.number_or(root, "", "market_value", 1.0)};
    if (root.contains("chaining")) {
        const auto ch = r.string(root, "", "chaining");
        if (ch == "copula") {
            spec.chaining = Chaining::GaussianCopula;
        } else if (ch == "moment_matched") {
            spec.chaining = Chaining::MomentMatched;
        } else {
            r.fail("chaining", "expected 'copula' or 'moment_matched'");
        }
    }
    if (root.contains("grid_points")) {
        const auto& gp = root.at("grid_points");
        if (!gp.is_number_integer() || gp.get<long long>() < 3 || gp.get<long long>() % 2 == 0) {
            r.fail("grid_points", "expected an odd integer >= 3");
        }
        spec.grid_points = gp.get<std::size_t>();
    }
    return spec;
}

RnpvSpec read_rnpv(const Reader& r, const json& root, bool allow_missing_probs) {
    r.only_keys(root, "", {"schema_version", "kind", "reward", "costs", "probs", "p0", "description"});
    RnpvSpec spec{r.number(root, "", "reward"), r.numbers(root, "", "costs"), {},
                  r.number_or(root, "", "p0", 1.0)};
    if (root.contains("probs")) {
        spec.probs = r.numbers(root, "", "probs");
    } else if (!allow_missing_probs) {
        r.fail("probs", "missing required field");
    } else {
        spec.probs.assign(spec.costs.size(), 1.0);
    }
    try {
        spec.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("invalid rNPV model: ") + e.what());
    }
    return spec;
}

ModelConfig parse_impl(std::string_view text, const std::string& source, bool allow_missing_probs) {
    json root;
    try {
        root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        std::size_t line = 1;
        std::size_t col = 1;
        const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(col) +
                          ": JSON syntax error: " + e.what());
    }
    const Reader r(source);
    if (!root.is_object()) r.fail("<root>", "expected a JSON object");
    const auto& ver = r.member(root, "", "schema_version");
    if (!ver.is_number_integer() || ver.get<int>() != kSchemaVersion) {
        r.fail("schema_version", "expected " + std::to_string(kSchemaVersion));
    }
    const std::string kind = r.string(root, "", "kind");
    try {
        if (kind == "pipeline") return read_pipeline(r, root);
        if (kind == "rnpv") return read_rnpv(r, root, allow_missing_probs);
    } catch (const DomainError& e) {
        throw ConfigError(source + ": " + e.what());
    }
    r.fail("kind", "expected 'pipeline' or 'rnpv', got '" + kind + "'");
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

ModelConfig parse_config(std::string_view text, const std::string& source) {
    return parse_impl(text, source, false);
}

ModelConfig load_config(const std::filesystem::path& path) {
    return parse_config(slurp(path), path.string());
}

PipelineSpec load_pipeline_config(const std::filesystem::path& path) {
    auto cfg = load_config(path);
    if (auto* p = std::get_if<PipelineSpec>(&cfg)) return std::move(*p);
    throw ConfigError(path.string() + ": field 'kind': expected 'pipeline' for this command");
}

RnpvSpec load_rnpv_config(const std::filesystem::path& path, bool allow_missing_probs) {
    auto cfg = parse_impl(slurp(path), path.string(), allow_missing_probs);
    if (auto* p = std::get_if<RnpvSpec>(&cfg)) return std::move(*p);
    throw ConfigError(path.string() + ": field 'kind': expected 'rnpv' for this command");
}

}  // namespace rdval
