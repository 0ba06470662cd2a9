#include "rdval/mc_oracle.hpp"

#include "rdval/error.hpp"
#include "rdval/normal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace rdval {
namespace {

class StreamRng {
public:
    StreamRng(std::uint64_t seed, std::uint64_t stage, std::uint64_t batch) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stage), static_cast<std::uint32_t>(batch),
                          static_cast<std::uint32_t>(batch >> 32)};
        engine_.seed(seq);
    }

    double normal() {
        const double u = (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
        return std_normal_quantile(u);
    }

private:
    std::mt19937_64 engine_;
};

struct StageCounts {
    std::uint64_t entered = 0;
    std::uint64_t success = 0;
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t exceed = 0;  // survivors with G > G*
};

std::string key(std::size_t stage, const char* stat) {
    return "stage" + std::to_string(stage) + "." + stat;
}

}  // namespace

void McConfig::validate() const {
    if (n_replicates < 1) throw DomainError("n_replicates must be >= 1");
    if (batch_size < 1) throw DomainError("batch_size must be >= 1");
}

McEstimate proportion_estimate(std::uint64_t k, std::uint64_t n) {
    if (n == 0) return McEstimate{0.0, 0.0, 0, false};
    const double p = static_cast<double>(k) / static_cast<double>(n);
    return McEstimate{p, std::sqrt(p * (1.0 - p) / static_cast<double>(n)), n, n >= 2};
}

void McResult::add(std::string name, McEstimate e) {
    entries_.push_back({std::move(name), e});
}

const McEstimate& McResult::at(const std::string& name) const {
    for (const auto& e : entries_) {
        if (e.name == name) return e.estimate;
    }
    throw std::out_of_range("no MC statistic named " + name);
}

bool McResult::contains(const std::string& name) const {
    return std::any_of(entries_.begin(), entries_.end(),
                       [&](const NamedEstimate& e) { return e.name == name; });
}

bool operator==(const McResult& a, const McResult& b) {
    if (a.entries_.size() != b.entries_.size()) return false;
    for (std::size_t i = 0; i < a.entries_.size(); ++i) {
        const auto& x = a.entries_[i];
        const auto& y = b.entries_[i];
        if (x.name != y.name || x.estimate.value != y.estimate.value ||
            x.estimate.std_error != y.estimate.std_error || x.estimate.n != y.estimate.n ||
            x.estimate.estimable != y.estimate.estimable) {
            return false;
        }
    }
    return true;
}

McResult simulate_pipeline(const PipelineSpec& spec, const McConfig& cfg) {
    spec.validate();
    cfg.validate();
    const std::uint64_t n = cfg.n_replicates;
    const std::uint64_t bs = cfg.batch_size;
    const std::uint64_t n_batches = (n + bs - 1) / bs;
    const auto nb = static_cast<std::int64_t>(n_batches);

    std::vector<double> g(n);
    std::vector<double> z(n);
    std::vector<unsigned char> alive(n, 1);

#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < nb; ++b) {
        StreamRng rng(cfg.seed, 0, static_cast<std::uint64_t>(b));
        const std::uint64_t end = std::min(n, (static_cast<std::uint64_t>(b) + 1) * bs);
        for (std::uint64_t i = static_cast<std::uint64_t>(b) * bs; i < end; ++i) {
            g[i] = spec.g_prior.mean() + spec.g_prior.sd() * rng.normal();
        }
    }

    std::vector<StageCounts> counts(spec.stages.size());
    std::vector<std::uint64_t> order;
    for (std::size_t s = 0; s < spec.stages.size(); ++s) {
        const StageSpec& st = spec.stages[s];
        const double c = cutoff(st);

        order.clear();
        for (std::uint64_t i = 0; i < n; ++i) {
            if (alive[i]) order.push_back(i);
        }
        const std::uint64_t m = order.size();
        if (m == 0) {
            for (std::size_t r = s; r < spec.stages.size(); ++r) counts[r] = StageCounts{};
            break;
        }
        if (s == 0) {
            for (std::uint64_t i : order) {
                z[i] = (g[i] - spec.g_prior.mean()) / spec.g_prior.sd();
            }
        } else {
            std::sort(order.begin(), order.end(),
                      [&](std::uint64_t a, std::uint64_t b) { return g[a] < g[b]; });
            const double md = static_cast<double>(m);
            for (std::uint64_t r = 0; r < m; ++r) {
                const double u = std::clamp((static_cast<double>(r) + 0.5) / md, 1e-12,
                                            1.0 - 1e-12);
                z[order[r]] = std_normal_quantile(u);
            }
        }

        const double rho = st.rho;
        const double s_rho = std::sqrt(1.0 - rho * rho);
        std::vector<StageCounts> per_batch(n_batches);
#pragma omp parallel for schedule(static)
        for (std::int64_t b = 0; b < nb; ++b) {
            StreamRng rng(cfg.seed, s + 1, static_cast<std::uint64_t>(b));
            StageCounts local;
            const std::uint64_t end = std::min(n, (static_cast<std::uint64_t>(b) + 1) * bs);
            for (std::uint64_t i = static_cast<std::uint64_t>(b) * bs; i < end; ++i) {
                if (!alive[i]) continue;
                ++local.entered;
                const double eps = rng.normal();
                const double eta = rng.normal();
                const double delta =
                    st.delta_prior.mean() + st.delta_prior.sd() * (rho * z[i] + s_rho * eps);
                const double delta_hat = delta + st.sigma_hat * eta;
                if (delta_hat > c) {
                    ++local.success;
                    if (delta > st.delta_min) {
                        ++local.tp;
                    } else {
                        ++local.fp;
                    }
                    if (g[i] > spec.g_star) ++local.exceed;
                } else {
                    alive[i] = 0;
                }
            }
            per_batch[static_cast<std::size_t>(b)] = local;
        }
        StageCounts total;
        for (const auto& pb : per_batch) {
            total.entered += pb.entered;
            total.success += pb.success;
            total.tp += pb.tp;
            total.fp += pb.fp;
            total.exceed += pb.exceed;
        }
        counts[s] = total;
    }

    McResult out;
    for (std::size_t s = 0; s < spec.stages.size(); ++s) {
        const auto& k = counts[s];
        const std::size_t idx = s + 1;
        out.add(key(idx, "assurance"), proportion_estimate(k.success, k.entered));
        out.add(key(idx, "tp"), proportion_estimate(k.tp, k.entered));
        out.add(key(idx, "fp"), proportion_estimate(k.fp, k.entered));
        out.add(key(idx, "p_above_given_success"), proportion_estimate(k.tp, k.success));
        out.add(key(idx, "p_below_given_success"), proportion_estimate(k.fp, k.success));
        out.add(key(idx, "cumulative_success"), proportion_estimate(k.success, n));
        out.add(key(idx, "p_g_exceeds_given_success"), proportion_estimate(k.exceed, k.success));
    }
    const auto& last = counts.back();
    out.add("terminal.p_g_exceeds", proportion_estimate(last.exceed, last.success));
    return out;
}

McResult simulate_stage(const StageSpec& stage, const Gaussian1D& g_prior, double g_star,
                        const McConfig& cfg) {
    return simulate_pipeline(PipelineSpec{g_prior, g_star, {stage}}, cfg);
}

std::vector<GateRow> compare_to_quadrature(const PipelineReport& report, const McResult& mc,
                                           double n_se) {
    std::vector<GateRow> rows;
    const auto add = [&](const std::string& name, double quad) {
        const auto& e = mc.at(name);
        GateRow row{name, quad, e, 0.0, GateStatus::NotEstimable};
        if (e.estimable) {
            const double diff = std::fabs(quad - e.value);
            row.z_score = e.std_error > 0.0 ? diff / e.std_error
                                            : (diff == 0.0 ? 0.0
                                                           : std::numeric_limits<double>::infinity());
            row.status = diff <= n_se * e.std_error ? GateStatus::Pass : GateStatus::Fail;
        }
        rows.push_back(std::move(row));
    };
    for (std::size_t s = 0; s < report.stage_reports.size(); ++s) {
        const auto& r = report.stage_reports[s];
        const std::size_t idx = s + 1;
        add(key(idx, "assurance"), r.assurance);
        add(key(idx, "tp"), r.tp);
        add(key(idx, "fp"), r.fp);
        add(key(idx, "p_above_given_success"), r.p_above_given_success);
        add(key(idx, "p_below_given_success"), r.p_below_given_success);
        add(key(idx, "cumulative_success"), report.cumulative_success[s]);
        add(key(idx, "p_g_exceeds_given_success"), r.p_g_exceeds_given_success);
    }
    add("terminal.p_g_exceeds", report.terminal_p_g_exceeds);
    return rows;
}

bool all_pass(const std::vector<GateRow>& rows) {
    return std::none_of(rows.begin(), rows.end(),
                        [](const GateRow& r) { return r.status == GateStatus::Fail; });
}

}  // namespace rdval
