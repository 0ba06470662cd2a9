#pragma once

// Risk-adjusted NPV baseline:
//
//   rNPV = r p_1 ... p_N - (c_1 p_0 + c_2 p_0 p_1 + ... + c_N p_0 p_1 ... p_{N-1})
//
// All amounts are taken as already discounted.

#include "rdval/pipeline.hpp"

#include <vector>

namespace rdval {

struct RnpvSpec {
    double reward;
    std::vector<double> costs;
    std::vector<double> probs;
    double p0 = 1.0;  ///< probability the candidate enters stage 1

    void validate() const;
};

struct RnpvBreakdown {
    double reward_term;
    std::vector<double> cost_terms;  ///< c_n p_0 p_1 ... p_{n-1}
    double value;
};

[[nodiscard]] RnpvBreakdown rnpv_breakdown(const RnpvSpec& spec);
[[nodiscard]] double rnpv(const RnpvSpec& spec);

/// Stage assurances, read as stepwise progression probabilities.
[[nodiscard]] std::vector<double> implied_progression_probs(const PipelineReport& report);

struct ValuationComparison {
    std::vector<double> progression_probs;  ///< shared by both pipelines
    double rnpv_a;
    double rnpv_b;
    double terminal_a;
    double terminal_b;
    double value_difference;  ///< (terminal_b - terminal_a) * market value of a
};

/// Values two programs that progress candidates at identical rates but with
/// tools of different predictive validity. rNPV is computed from each
/// pipeline's implied progression probabilities (rnpv_spec.probs is not
/// used). Throws PreconditionError if the assurance lists differ by more
/// than 1e-9 or the cost list length differs from the stage count.
[[nodiscard]] ValuationComparison compare(const RnpvSpec& rnpv_spec, const PipelineSpec& a,
                                          const PipelineSpec& b,
                                          Execution exec = Execution::Parallel);

}  // namespace rdval
