// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include "rdval/artifacts.hpp"
#include "rdval/copula.hpp"
#include "rdval/mc_oracle.hpp"
#include "rdval/pipeline.hpp"
#include "rdval/rnpv.hpp"

#include "../test_support.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace rdval;
using rdval::testing::clinical_pipeline;
using rdval::testing::oracle_cdf;
using rdval::testing::four_stage_pipeline;

namespace {

// Tolerances.
constexpr double kAssuranceTol = 0.002;
constexpr double kCumulativeTol = 0.003;
constexpr double kProductTol = 1e-9;
constexpr double kFpTpTol = 0.003;
constexpr double kConditionalTol = 0.004;
constexpr double kStage1ExceedsTol = 0.003;
constexpr double kTerminalTol = 0.03;
constexpr double kMcSe = 3.0;
constexpr double kClinicalAssuranceTol = 0.005;
constexpr double kGainLowTol = 0.02;
constexpr double kGainHighTol = 0.01;
constexpr double kNoValidityTol = 0.002;
constexpr double kInteractionTol = 0.02;
constexpr double kRnpvRelTol = 1e-12;
constexpr double kPartitionTol = 1e-9;
constexpr double kClosedFormTol = 1e-6;
constexpr double kCopulaSupTol = 1e-4;

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

bool within(double x, double target, double tol) { return std::fabs(x - target) <= tol; }

const PipelineReport& four_stage() {
    static const PipelineReport r = run_pipeline(four_stage_pipeline());
    return r;
}

Outcome c1() {
    const auto& r = four_stage();
    bool ok = true;
    std::string d = "assurance";
    for (std::size_t n = 0; n < 4; ++n) {
        const double a = r.stage_reports[n].assurance;
        ok = ok && within(a, rdval::testing::kExpectedAssurance[n], kAssuranceTol);
        d += fmt(" %.4f", a);
    }
    return {ok, d};
}

Outcome c2() {
    const auto& r = four_stage();
    bool ok = true;
    double prod = 1.0;
    std::string d = "cumulative";
    for (std::size_t n = 0; n < 4; ++n) {
        prod *= r.stage_reports[n].assurance;
        ok = ok && within(r.cumulative_success[n], rdval::testing::kExpectedCumulative[n], kCumulativeTol);
        ok = ok && within(r.cumulative_success[n], prod, kProductTol);
        d += fmt(" %.4f", r.cumulative_success[n]);
    }
    return {ok, d};
}

Outcome c3() {
    const auto& r = four_stage();
    bool ok = true;
    std::string d = "tp/fp";
    for (std::size_t n = 0; n < 4; ++n) {
        const auto& s = r.stage_reports[n];
        ok = ok && within(s.tp, rdval::testing::kExpectedTp[n], kFpTpTol) &&
             within(s.fp, rdval::testing::kExpectedFp[n], kFpTpTol) &&
             within(s.p_above_given_success, rdval::testing::kExpectedAbove[n], kConditionalTol) &&
             within(s.p_below_given_success, rdval::testing::kExpectedBelow[n], kConditionalTol);
        d += fmt(" %.4f", s.tp) + fmt("/%.4f", s.fp) + fmt(" (%.4f", s.p_above_given_success) +
             fmt("/%.4f)", s.p_below_given_success);
    }
    return {ok, d};
}

Outcome c4() {
    const double v = four_stage().stage_reports[0].p_g_exceeds_given_success;
    return {within(v, 0.063, kStage1ExceedsTol), fmt("P(G>G*|success) stage 1 = %.4f", v)};
}

Outcome c5() {
    const auto& r = four_stage();
    const auto mc = simulate_pipeline(four_stage_pipeline(), McConfig{1'000'000, 42, 65'536});
    const auto gate = compare_to_quadrature(r, mc, kMcSe);
    std::size_t fails = 0;
    for (const auto& g : gate) fails += g.status == GateStatus::Pass ? 0 : 1;
    const auto& t = mc.at("terminal.p_g_exceeds");
    const bool ok = within(r.terminal_p_g_exceeds, 0.384, kTerminalTol) && fails == 0;
    return {ok, fmt("terminal %.4f", r.terminal_p_g_exceeds) + fmt(", MC %.4f", t.value) +
                    fmt(" (se %.4f)", t.std_error) + ", " + std::to_string(fails) + " of " +
                    std::to_string(gate.size()) + " statistics outside 3 SE"};
}

Outcome c6() {
    std::vector<double> grid;
    for (int k = 0; k <= 9; ++k) grid.push_back(0.1 * k);
    const auto t = sweep_rho(clinical_pipeline(), 1, grid);
    bool constant = true;
    for (const auto& row : t.rows) constant = constant && row.stage_assurance == t.rows[0].stage_assurance;
    const double a = t.rows[0].stage_assurance;
    const double low = *t.rows[2].relative_change;
    const double high = *t.rows[9].relative_change;
    const bool ok = within(a, 0.39, kClinicalAssuranceTol) && constant &&
                    within(low, 0.18, kGainLowTol) && within(high, 0.015, kGainHighTol);
    return {ok, fmt("assurance %.5f", a) + (constant ? " (bit-identical over rho)" : " (varies)") +
                    fmt(", gain 0.1->0.2 %.2f%%", 100 * low) + fmt(", 0.8->0.9 %.2f%%", 100 * high)};
}

Outcome c7() {
    auto spec = four_stage_pipeline();
    for (auto& s : spec.stages) s.rho = 0.0;
    const auto r = run_pipeline(spec);
    bool ok = true;
    std::string d = "P(G>G*|success)";
    for (const auto& s : r.stage_reports) {
        ok = ok && within(s.p_g_exceeds_given_success, 0.049, kNoValidityTol) &&
             within(s.p_g_exceeds_given_success, r.stage_reports[0].p_g_exceeds_given_success, 1e-6);
        d += fmt(" %.4f", s.p_g_exceeds_given_success);
    }
    return {ok, d};
}

Outcome c8() {
    bool any = false;
    std::string d;
    for (std::size_t cond : {3u, 4u}) {
        const auto t = sweep_rho(four_stage_pipeline(), 1, {0.2, 0.4}, cond, {0.1, 0.9});
        const double low = *t.rows[1].relative_change;
        const double high = *t.rows[3].relative_change;
        const bool ok = high > low && within(low, 0.076, kInteractionTol) &&
                        within(high, 0.086, kInteractionTol);
        any = any || ok;
        d += (d.empty() ? "" : "; ") + std::string("rho") + std::to_string(cond) +
             fmt(" reading %.2f%%", 100 * low) + fmt(" vs %.2f%%", 100 * high) +
             (ok ? " matches" : " does not match");
    }
    return {any, d};
}

Outcome c9() {
    const double one = rnpv(RnpvSpec{100.0, {10.0}, {0.5}, 1.0});
    const double two = rnpv(RnpvSpec{100.0, {10.0, 20.0}, {0.6, 0.5}, 1.0});
    auto a = four_stage_pipeline();
    auto b = four_stage_pipeline();
    a.stages[1].rho = 0.3;
    b.stages[1].rho = 0.8;
    const auto cmp = compare(RnpvSpec{1000.0, {5, 20, 60, 150}, {}, 1.0}, a, b);
    const bool ok = std::fabs(one - 40.0) <= kRnpvRelTol * 40.0 &&
                    std::fabs(two - 8.0) <= kRnpvRelTol * 8.0 && cmp.rnpv_a == cmp.rnpv_b &&
                    cmp.terminal_b > cmp.terminal_a;
    return {ok, fmt("N=1 %.15g", one) + fmt(", N=2 %.15g", two) + fmt(", rNPV A=B=%.6g", cmp.rnpv_a) +
                    fmt(", terminal A %.4f", cmp.terminal_a) + fmt(" < B %.4f", cmp.terminal_b)};
}

Outcome c10() {
    std::vector<std::string> failed;
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u(0.0, 1.0);

    bool partition = true;
    bool closed = true;
    for (int k = 0; k < 100; ++k) {
        const double sd = 0.2 + 2.0 * u(rng);
        const StageSpec s{0.0, Gaussian1D(-1.0 + 2.0 * u(rng), sd), sd * (0.1 + 1.5 * u(rng)),
                          FrequentistAlpha{0.01 + 0.9 * u(rng)}, -0.5 + u(rng)};
        const double a = assurance(s);
        const auto c = fp_tp(s);
        partition = partition && std::fabs(c.fp + c.tp - a) <= kPartitionTol;
        const double oracle = oracle_cdf((s.delta_prior.mean() - cutoff(s)) /
                                         std::hypot(s.delta_prior.sd(), s.sigma_hat));
        closed = closed && std::fabs(posterior_delta(s).total_mass() - oracle) <= kClosedFormTol;
    }
    if (!partition) failed.push_back("fp+tp partition");
    if (!closed) failed.push_back("closed-form assurance");

    bool invariant = true;
    const double a0 = evaluate_stage(rdval::testing::clinical_stage(0.0), Gaussian1D(0, 1), 2.0).assurance;
    for (double rho : {-0.7, 0.1, 0.5, 0.95}) {
        invariant = invariant &&
                    evaluate_stage(rdval::testing::clinical_stage(rho), Gaussian1D(0, 1), 2.0).assurance == a0;
    }
    if (!invariant) failed.push_back("rho invariance");

    double sup = 0.0;
    const Gaussian1D g(0.2, 0.9);
    const Gaussian1D d(0.1, 1.3);
    const auto marginal = gridded(g, g_grid(g));
    for (double rho : {-0.6, 0.3, 0.8}) {
        for (double delta : {-2.0, 0.5, 3.0}) {
            const auto out = copula_conditional_g(marginal, rho, (delta - d.mean()) / d.sd());
            const auto cond = conditional_g_given_delta(BivariateGaussian(g, d, rho), delta);
            for (std::size_t j = 0; j < out.size(); ++j) {
                sup = std::max(sup, std::fabs(out[j] - normal_pdf(out.grid().node(j), cond)));
            }
        }
    }
    if (sup > kCopulaSupTol) failed.push_back(fmt("copula sup-norm %.2e", sup));

    bool monotone = true;
    for (std::size_t stage = 0; stage < 4; ++stage) {
        double prev = -1.0;
        for (double rho : {0.0, 0.3, 0.6, 0.9}) {
            auto spec = four_stage_pipeline();
            spec.stages[stage].rho = rho;
            const double t = run_pipeline(spec).terminal_p_g_exceeds;
            monotone = monotone && t >= prev;
            prev = t;
        }
    }
    if (!monotone) failed.push_back("rho monotonicity");

    const McConfig cfg{100'000, 7, 8192};
    if (!(simulate_pipeline(four_stage_pipeline(), cfg) == simulate_pipeline(four_stage_pipeline(), cfg))) {
        failed.push_back("MC seed determinism");
    }

    const auto render_all = [] {
        const auto spec = four_stage_pipeline();
        const auto r = run_pipeline(spec);
        std::string bytes;
        for (const auto& art : render({{"pipeline_statistics", pipeline_statistics_table(r)},
                                       {"pipeline_terminal", pipeline_terminal_table(spec, r)},
                                       {"pipeline_g_curves", pipeline_g_curves_table(r)}},
                                      "pipeline", OutputFormat::Both)) {
            bytes += art.content;
        }
        return bytes;
    };
    if (render_all() != render_all()) failed.push_back("artifact reruns");

    std::string msg = failed.empty() ? "all 7 properties hold" : "failed:";
    for (const auto& f : failed) msg += " [" + f + "]";
    return {failed.empty(), msg};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"1 stage assurances", c1},
        {"2 cumulative success", c2},
        {"3 true/false positive rows", c3},
        {"4 stage-1 G statistic", c4},
        {"5 terminal probability and MC gate", c5},
        {"6 single-stage validity sweep", c6},
        {"7 no validity at any stage", c7},
        {"8 validity interaction across stages", c8},
        {"9 rNPV cases and equal-rNPV comparison", c9},
        {"10 property suites", c10},
    };
    int failures = 0;
    for (const auto& [name, fn] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s criterion %s: %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(),
                    secs);
        failures += o.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
