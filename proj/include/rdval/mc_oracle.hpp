#pragma once

// Monte Carlo simulation of the same generative model the quadrature
// pipeline evaluates, used as an independent check.
//
// Per replicate: G ~ N(mu_G, sigma_G). At stage n the candidate's copula
// score is z = Phi^{-1}(F_n(G)), where F_n is the exact normal CDF at stage 1
// and the empirical CDF of surviving replicates (Hazen positions
// (rank - 0.5) / m) afterwards. Then
//   delta = mu_delta + sigma_delta (rho z + sqrt(1 - rho^2) eps)
//   delta_hat = delta + sigma_hat eta
// and the replicate survives iff delta_hat > c.
//
// Random numbers: each (stage, batch) pair owns an mt19937_64 seeded through
// std::seed_seq from (seed, stage, batch). Normals are drawn by inverting
// Phi on an open-interval uniform with 53 random bits. Results depend only
// on (seed, n_replicates, batch_size), not on thread count.

#include "rdval/pipeline.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rdval {

struct McConfig {
    std::uint64_t n_replicates = 1'000'000;
    std::uint64_t seed = 42;
    std::uint64_t batch_size = 65'536;

    void validate() const;
};

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t n = 0;
    bool estimable = false;  ///< false when fewer than two trials back the estimate
};

/// Estimate of a proportion k / n with binomial standard error.
[[nodiscard]] McEstimate proportion_estimate(std::uint64_t k, std::uint64_t n);

struct NamedEstimate {
    std::string name;
    McEstimate estimate;
};

/// Estimates in stage order. Names: "stage<k>.<statistic>" for statistic in
/// assurance, tp, fp, p_above_given_success, p_below_given_success,
/// cumulative_success, p_g_exceeds_given_success; and "terminal.p_g_exceeds".
class McResult {
public:
    void add(std::string name, McEstimate e);
    [[nodiscard]] const std::vector<NamedEstimate>& entries() const noexcept { return entries_; }
    [[nodiscard]] const McEstimate& at(const std::string& name) const;
    [[nodiscard]] bool contains(const std::string& name) const;

    friend bool operator==(const McResult& a, const McResult& b);

private:
    std::vector<NamedEstimate> entries_;
};

[[nodiscard]] McResult simulate_pipeline(const PipelineSpec& spec, const McConfig& cfg);

/// One-stage specialization; the exact bivariate-normal score is used.
[[nodiscard]] McResult simulate_stage(const StageSpec& stage, const Gaussian1D& g_prior,
                                      double g_star, const McConfig& cfg);

enum class GateStatus { Pass, Fail, NotEstimable };

struct GateRow {
    std::string name;
    double quadrature;
    McEstimate mc;
    double z_score;  ///< |quadrature - mc| / se; 0 when not estimable
    GateStatus status;
};

/// Checks every MC statistic against its quadrature counterpart at
/// |difference| <= n_se * std_error.
[[nodiscard]] std::vector<GateRow> compare_to_quadrature(const PipelineReport& report,
                                                         const McResult& mc, double n_se = 3.0);

[[nodiscard]] bool all_pass(const std::vector<GateRow>& rows);

}  // namespace rdval
