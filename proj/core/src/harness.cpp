#include "seqmct/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "seqmct/rng.hpp"

namespace seqmct {

PValueVector resample_pvalues(const PValueVector& pstar, std::size_t m_new,
                              std::uint64_t seed) {
    if (pstar.empty()) {
        throw std::invalid_argument("resample_pvalues: empty source population");
    }
    SplitMix64 rng(seed);
    PValueVector out;
    out.reserve(m_new);
    for (std::size_t i = 0; i < m_new; ++i) {
        out.push_back(pstar[rng.next_below(pstar.size())]);
    }
    return out;
}

std::size_t misclassifications(const IndexSet& result, const IndexSet& ideal) {
    IndexSet diff;
    std::set_symmetric_difference(result.begin(), result.end(), ideal.begin(),
                                  ideal.end(), std::back_inserter(diff));
    return diff.size();
}

std::size_t randomly_classified(const std::vector<IndexSet>& runs, std::size_t m,
                                double threshold) {
    if (runs.empty()) throw std::invalid_argument("randomly_classified: no runs");
    std::vector<std::size_t> reject_counts(m, 0);
    for (const IndexSet& r : runs) {
        for (std::size_t i : r) {
            if (i >= m) throw std::invalid_argument("randomly_classified: index out of range");
            ++reject_counts[i];
        }
    }
    const double n = static_cast<double>(runs.size());
    std::size_t count = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double f = static_cast<double>(reject_counts[i]) / n;
        if (std::min(f, 1.0 - f) > threshold) ++count;
    }
    return count;
}

std::vector<std::uint64_t> effort_quantiles(std::vector<std::uint64_t> efforts,
                                            const std::vector<double>& probs) {
    if (efforts.empty()) throw std::invalid_argument("effort_quantiles: empty input");
    std::sort(efforts.begin(), efforts.end());
    std::vector<std::uint64_t> out;
    out.reserve(probs.size());
    const double n = static_cast<double>(efforts.size());
    for (double q : probs) {
        // Nearest-rank: element ceil(q*n), 1-based.
        auto rank = static_cast<std::size_t>(std::ceil(q * n));
        rank = std::clamp<std::size_t>(rank, 1, efforts.size());
        out.push_back(efforts[rank - 1]);
    }
    return out;
}

void parallel_runs(std::size_t n, std::size_t workers,
                   const std::function<void(std::size_t)>& fn) {
    workers = std::max<std::size_t>(1, std::min(workers, n == 0 ? 1 : n));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::scoped_lock lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

namespace {

struct MatchedRun {
    IndexSet competitor_rejected;
    std::uint64_t competitor_effort = 0;
    std::size_t undecided = 0;
    IndexSet forced;
};

CompareRow aggregate_row(const std::string& method, std::uint64_t param,
                         const std::vector<MatchedRun>& runs, const IndexSet& ideal,
                         std::size_t m, double rc_threshold) {
    CompareRow row;
    row.method = method;
    row.param = param;
    std::vector<IndexSet> competitor_sets, forced_sets;
    competitor_sets.reserve(runs.size());
    forced_sets.reserve(runs.size());
    for (const MatchedRun& r : runs) {
        row.mis += static_cast<double>(misclassifications(r.competitor_rejected, ideal));
        row.effort_mean += static_cast<double>(r.competitor_effort);
        row.undecided += static_cast<double>(r.undecided);
        row.forced_mis += static_cast<double>(misclassifications(r.forced, ideal));
        competitor_sets.push_back(r.competitor_rejected);
        forced_sets.push_back(r.forced);
    }
    const double n = static_cast<double>(runs.size());
    row.mis /= n;
    row.effort_mean /= n;
    row.undecided /= n;
    row.forced_mis /= n;
    row.rc = randomly_classified(competitor_sets, m, rc_threshold);
    row.forced_rc = randomly_classified(forced_sets, m, rc_threshold);
    return row;
}

}  // namespace

std::vector<CompareRow> compare_methods(const PValueVector& pstar,
                                        const CompareConfig& cfg) {
    validate_pvalues(pstar);
    if (cfg.n_runs < 1) throw std::invalid_argument("compare_methods: n_runs >= 1");
    const std::size_t m = pstar.size();
    EngineConfig engine_cfg = cfg.engine;
    engine_cfg.spending.m = m;
    validate_engine_config(engine_cfg, m);
    const IndexSet ideal = classify(engine_cfg.procedure, pstar);

    std::vector<CompareRow> rows;
    auto run_matched = [&](std::size_t run_index,
                           const std::function<BaselineResult(SampleSource&)>& competitor)
        -> MatchedRun {
        const std::uint64_t run_seed = substream_seed(cfg.seed, run_index);
        MatchedRun out;
        {
            BernoulliOracle src(pstar, run_seed);
            BaselineResult res = competitor(src);
            out.competitor_rejected = std::move(res.rejected);
            out.competitor_effort = res.effort;
        }
        EngineConfig matched = engine_cfg;
        matched.k_max = out.competitor_effort;
        BernoulliOracle src(pstar, run_seed);
        RunResult rr = run(matched, src);
        out.undecided = rr.classification.undecided_count();
        out.forced = forced_classification(rr.state, matched);
        return out;
    };

    for (std::uint64_t s : cfg.naive_s) {
        NaiveConfig ncfg{s, engine_cfg.procedure};
        std::vector<MatchedRun> runs(cfg.n_runs);
        parallel_runs(cfg.n_runs, cfg.workers, [&](std::size_t r) {
            runs[r] = run_matched(
                r, [&](SampleSource& src) { return naive_run(ncfg, src); });
        });
        rows.push_back(aggregate_row("naive", s, runs, ideal, m, cfg.rc_threshold));
    }
    for (std::uint64_t u : cfg.mcfdr_u) {
        McfdrConfig mcfg{u, engine_cfg.procedure, cfg.mcfdr_round_batch};
        std::vector<MatchedRun> runs(cfg.n_runs);
        parallel_runs(cfg.n_runs, cfg.workers, [&](std::size_t r) {
            runs[r] = run_matched(
                r, [&](SampleSource& src) { return mcfdr_run(mcfg, src); });
        });
        rows.push_back(aggregate_row("mcfdr", u, runs, ideal, m, cfg.rc_threshold));
    }
    return rows;
}

EffortCurve effort_vs_undecided(const std::vector<RunTrace>& traces, std::size_t m) {
    if (traces.empty()) throw std::invalid_argument("effort_vs_undecided: no traces");

    // Per run: first effort at which the undecided count reached each c.
    std::vector<std::vector<std::int64_t>> per_run;
    std::size_t worst_min = 0;
    per_run.reserve(traces.size());
    for (const RunTrace& trace : traces) {
        std::vector<std::int64_t> first_effort(m + 1, -1);
        first_effort[m] = 0;  // before the first iteration everything is undecided
        std::size_t min_c = m;
        for (const TraceRecord& rec : trace) {
            if (rec.undecided <= m && first_effort[rec.undecided] < 0) {
                first_effort[rec.undecided] =
                    static_cast<std::int64_t>(rec.total_effort);
            }
            min_c = std::min(min_c, rec.undecided);
        }
        // Conservative fill: a missing N_c inherits the effort of the
        // largest c' < c that was observed.
        std::int64_t last = -1;
        for (std::size_t c = min_c; c <= m; ++c) {
            if (first_effort[c] >= 0) {
                last = first_effort[c];
            } else {
                first_effort[c] = last;
            }
        }
        worst_min = std::max(worst_min, min_c);
        per_run.push_back(std::move(first_effort));
    }

    EffortCurve curve;
    for (std::size_t c = worst_min; c <= m; ++c) {
        curve.undecided.push_back(c);
        std::vector<std::uint64_t> row;
        row.reserve(per_run.size());
        for (const auto& fe : per_run) {
            row.push_back(static_cast<std::uint64_t>(fe[c]));
        }
        curve.efforts.push_back(std::move(row));
    }
    return curve;
}

std::vector<ScalingRow> scaling_study(const PValueVector& pstar,
                                      const ScalingConfig& cfg) {
    validate_pvalues(pstar);
    if (cfg.n_runs < 1) throw std::invalid_argument("scaling_study: n_runs >= 1");
    if (!(cfg.c_fraction >= 0.0 && cfg.c_fraction <= 1.0)) {
        throw std::invalid_argument("scaling_study: c_fraction in [0,1]");
    }

    std::vector<ScalingRow> rows;
    for (std::size_t m : cfg.m_grid) {
        const std::uint64_t m_seed = substream_seed(cfg.seed, m);
        std::vector<std::uint64_t> efforts(cfg.n_runs);
        parallel_runs(cfg.n_runs, cfg.workers, [&](std::size_t r) {
            const std::uint64_t run_seed = substream_seed(m_seed, r);
            const PValueVector population =
                resample_pvalues(pstar, m, substream_seed(run_seed, 0));
            EngineConfig ecfg = cfg.engine;
            ecfg.spending.m = m;
            ecfg.c = static_cast<std::uint64_t>(
                std::floor(cfg.c_fraction * static_cast<double>(m)));
            BernoulliOracle src(population, substream_seed(run_seed, 1));
            RunResult rr = run(ecfg, src);
            efforts[r] = rr.state.total_effort;
        });
        rows.push_back({m, effort_quantiles(std::move(efforts), cfg.probs)});
    }
    return rows;
}

}  // namespace seqmct
