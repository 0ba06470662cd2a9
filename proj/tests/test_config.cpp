#include "rdval/config.hpp"
#include "rdval/error.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <string>

using namespace rdval;

namespace {

const std::string kConfigDir = RDVAL_CONFIG_DIR;

std::string message_of(const std::string& text) {
    try {
        (void)parse_config(text, "model.json");
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

const char* kMinimal = R"({
  "schema_version": 1,
  "kind": "pipeline",
  "g_prior": {"mean": 0, "sd": 1},
  "g_star": 2,
  "stages": [
    {"rho": 0.4, "mu_delta": 0.5, "sigma_delta": 1, "sigma_hat": 0.4,
     "criterion": {"type": "frequentist_alpha", "alpha": 0.025}}
  ]
})";

std::string minimal_with(const std::string& from, const std::string& to) {
    std::string s = kMinimal;
    const auto pos = s.find(from);
    EXPECT_NE(pos, std::string::npos) << from;
    return s.replace(pos, from.size(), to);
}

}  // namespace

TEST(Config, BundledFourStageProgram) {
    const auto spec = load_pipeline_config(kConfigDir + "/four_stage.json");
    const auto expected = rdval::testing::four_stage_pipeline();
    ASSERT_EQ(spec.stages.size(), 4u);
    EXPECT_EQ(spec.g_star, expected.g_star);
    EXPECT_EQ(spec.g_prior.sd(), expected.g_prior.sd());
    EXPECT_EQ(spec.market_value, 100.0);
    EXPECT_EQ(spec.chaining, Chaining::GaussianCopula);
    for (std::size_t n = 0; n < 4; ++n) {
        const auto& a = spec.stages[n];
        const auto& b = expected.stages[n];
        EXPECT_EQ(a.rho, b.rho);
        EXPECT_EQ(a.delta_prior.mean(), b.delta_prior.mean());
        EXPECT_EQ(a.delta_prior.sd(), b.delta_prior.sd());
        EXPECT_EQ(a.sigma_hat, b.sigma_hat);
        EXPECT_EQ(a.delta_min, b.delta_min);
        EXPECT_EQ(std::get<FrequentistAlpha>(a.criterion).alpha,
                  std::get<FrequentistAlpha>(b.criterion).alpha);
    }
}

TEST(Config, BundledRnpvModels) {
    const auto two = load_rnpv_config(kConfigDir + "/rnpv_two_stage.json");
    EXPECT_EQ(two.costs, (std::vector<double>{10.0, 20.0}));
    EXPECT_EQ(two.probs, (std::vector<double>{0.6, 0.5}));
    EXPECT_THROW((void)load_rnpv_config(kConfigDir + "/rnpv_four_stage_costs.json"), ConfigError);
    const auto costs = load_rnpv_config(kConfigDir + "/rnpv_four_stage_costs.json", true);
    EXPECT_EQ(costs.costs.size(), 4u);
}

TEST(Config, KindMismatch) {
    EXPECT_THROW((void)load_pipeline_config(kConfigDir + "/rnpv_two_stage.json"), ConfigError);
    EXPECT_THROW((void)load_rnpv_config(kConfigDir + "/four_stage.json"), ConfigError);
}

TEST(Config, OptionalFields) {
    const auto spec = std::get<PipelineSpec>(parse_config(kMinimal));
    EXPECT_EQ(spec.market_value, 1.0);
    EXPECT_EQ(spec.stages[0].delta_min, 0.0);
    EXPECT_EQ(spec.grid_points, kDefaultGridPoints);
    const auto mm = std::get<PipelineSpec>(
        parse_config(minimal_with("\"g_star\": 2,", "\"g_star\": 2, \"chaining\": \"moment_matched\", \"grid_points\": 801,")));
    EXPECT_EQ(mm.chaining, Chaining::MomentMatched);
    EXPECT_EQ(mm.grid_points, 801u);
}

TEST(Config, OtherCriteria) {
    const auto a = std::get<PipelineSpec>(parse_config(minimal_with(
        R"({"type": "frequentist_alpha", "alpha": 0.025})", R"({"type": "absolute_cutoff", "c": 0.7})")));
    EXPECT_EQ(std::get<AbsoluteCutoff>(a.stages[0].criterion).c, 0.7);
    const auto t = std::get<PipelineSpec>(parse_config(minimal_with(
        R"({"type": "frequentist_alpha", "alpha": 0.025})", R"({"type": "top_fraction", "q": 0.2})")));
    EXPECT_EQ(std::get<TopFraction>(t.stages[0].criterion).q, 0.2);
}

TEST(Config, SyntaxErrorReportsLineAndColumn) {
    const auto msg = message_of("{\n  \"schema_version\": 1,\n  \"kind\": ,\n}");
    EXPECT_NE(msg.find("model.json:3:"), std::string::npos) << msg;
    EXPECT_NE(msg.find("JSON syntax error"), std::string::npos) << msg;
}

TEST(Config, FieldErrorsNameThePath) {
    EXPECT_NE(message_of(minimal_with("\"rho\": 0.4", "\"rho\": 1.0")).find("stages[0].rho"),
              std::string::npos);
    EXPECT_NE(message_of(minimal_with("\"sigma_hat\": 0.4", "\"sigma_hat\": 0")).find("stages[0].sigma_hat"),
              std::string::npos);
    EXPECT_NE(message_of(minimal_with("\"alpha\": 0.025", "\"alpha\": 1.5")).find("stages[0]"),
              std::string::npos);
    EXPECT_NE(message_of(minimal_with("\"sd\": 1}", "\"sd\": -1}")).find("g_prior.sd"),
              std::string::npos);
    EXPECT_NE(message_of(minimal_with("\"g_star\": 2,", "")).find("'g_star'"), std::string::npos);
    EXPECT_NE(message_of(minimal_with("\"rho\": 0.4", "\"rho\": \"high\"")).find("expected a number"),
              std::string::npos);
    EXPECT_NE(message_of(minimal_with("\"frequentist_alpha\"", "\"bayesian\"")).find("stages[0].criterion.type"),
              std::string::npos);
}

TEST(Config, UnknownKeysAreRejected) {
    EXPECT_NE(message_of(minimal_with("\"rho\": 0.4", "\"rho\": 0.4, \"rhoo\": 0.5")).find("stages[0].rhoo"),
              std::string::npos);
    EXPECT_NE(message_of(minimal_with("\"g_star\": 2", "\"g_star\": 2, \"gstar\": 1")).find("gstar"),
              std::string::npos);
}

TEST(Config, HeaderChecks) {
    EXPECT_NE(message_of(minimal_with("\"schema_version\": 1", "\"schema_version\": 2")).find("schema_version"),
              std::string::npos);
    EXPECT_NE(message_of(minimal_with("\"kind\": \"pipeline\"", "\"kind\": \"portfolio\"")).find("kind"),
              std::string::npos);
    EXPECT_NE(message_of("[1, 2]").find("JSON object"), std::string::npos);
}

TEST(Config, GridPointsMustBeOdd) {
    EXPECT_NE(message_of(minimal_with("\"g_star\": 2,", "\"g_star\": 2, \"grid_points\": 800,")).find("grid_points"),
              std::string::npos);
}

TEST(Config, RnpvValidation) {
    const std::string base = R"({"schema_version": 1, "kind": "rnpv", "reward": 100,
                                 "costs": [10, 20], "probs": [0.6)";
    EXPECT_THROW((void)parse_config(base + "]}"), ConfigError);
    EXPECT_THROW((void)parse_config(base + ", 1.2]}"), ConfigError);
    const auto ok = std::get<RnpvSpec>(parse_config(base + ", 0.5], \"p0\": 0.9}"));
    EXPECT_EQ(ok.p0, 0.9);
}

TEST(Config, MissingFileNamesThePath) {
    try {
        (void)load_config("/nonexistent/dir/model.json");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/model.json"), std::string::npos);
    }
}
