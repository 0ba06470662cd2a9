#include "rdval/rnpv.hpp"

#include "rdval/error.hpp"

#include <cmath>
#include <string>

namespace rdval {
namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

void RnpvSpec::validate() const {
    if (costs.empty()) throw DomainError("rNPV needs at least one stage");
    if (costs.size() != probs.size()) {
        throw DomainError("rNPV costs and probs must have equal length (" +
                          std::to_string(costs.size()) + " vs " + std::to_string(probs.size()) +
                          ")");
    }
    if (!std::isfinite(reward) || reward < 0.0) throw DomainError("reward must be >= 0");
    if (!is_probability(p0)) throw DomainError("p0 must lie in [0, 1]");
    for (std::size_t n = 0; n < costs.size(); ++n) {
        if (!std::isfinite(costs[n]) || costs[n] < 0.0) {
            throw DomainError("cost " + std::to_string(n + 1) + " must be >= 0");
        }
        if (!is_probability(probs[n])) {
            throw DomainError("probability " + std::to_string(n + 1) + " must lie in [0, 1]");
        }
    }
}

RnpvBreakdown rnpv_breakdown(const RnpvSpec& spec) {
    spec.validate();
    RnpvBreakdown out{0.0, {}, 0.0};
    out.cost_terms.reserve(spec.costs.size());
    double reach = spec.p0;
    double progress = 1.0;
    for (std::size_t n = 0; n < spec.costs.size(); ++n) {
        out.cost_terms.push_back(spec.costs[n] * reach);
        reach *= spec.probs[n];
        progress *= spec.probs[n];
    }
    out.reward_term = spec.reward * progress;
    double cost = 0.0;
    for (double c : out.cost_terms) cost += c;
    out.value = out.reward_term - cost;
    return out;
}

double rnpv(const RnpvSpec& spec) { return rnpv_breakdown(spec).value; }

std::vector<double> implied_progression_probs(const PipelineReport& report) {
    std::vector<double> p;
    p.reserve(report.stage_reports.size());
    for (const auto& s : report.stage_reports) p.push_back(s.assurance);
    return p;
}

ValuationComparison compare(const RnpvSpec& rnpv_spec, const PipelineSpec& a,
                            const PipelineSpec& b, Execution exec) {
    const auto ra = run_pipeline(a, exec);
    const auto rb = run_pipeline(b, exec);
    const auto pa = implied_progression_probs(ra);
    const auto pb = implied_progression_probs(rb);
    if (pa.size() != pb.size()) {
        throw PreconditionError("compared pipelines have different stage counts");
    }
    for (std::size_t n = 0; n < pa.size(); ++n) {
        if (std::fabs(pa[n] - pb[n]) > 1e-9) {
            throw PreconditionError("stage " + std::to_string(n + 1) +
                                    " progression probabilities differ (" +
                                    std::to_string(pa[n]) + " vs " + std::to_string(pb[n]) + ")");
        }
    }
    if (rnpv_spec.costs.size() != pa.size()) {
        throw PreconditionError("rNPV cost list has " + std::to_string(rnpv_spec.costs.size()) +
                                " entries for " + std::to_string(pa.size()) + " stages");
    }
    RnpvSpec sa = rnpv_spec;
    sa.probs = pa;
    RnpvSpec sb = rnpv_spec;
    sb.probs = pb;
    return ValuationComparison{
        .progression_probs = pa,
        .rnpv_a = rnpv(sa),
        .rnpv_b = rnpv(sb),
        .terminal_a = ra.terminal_p_g_exceeds,
        .terminal_b = rb.terminal_p_g_exceeds,
        .value_difference = (rb.terminal_p_g_exceeds - ra.terminal_p_g_exceeds) * a.market_value,
    };
}

}  // namespace rdval
