#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "seqmct/baselines.hpp"
#include "seqmct/engine.hpp"
#include "seqmct/procedures.hpp"
#include "seqmct/sources.hpp"

namespace seqmct {

/// m_new values drawn i.i.d. with replacement from the entries of pstar.
PValueVector resample_pvalues(const PValueVector& pstar, std::size_t m_new,
                              std::uint64_t seed);

/// Size of the symmetric difference between a result and the ideal
/// rejection set.
std::size_t misclassifications(const IndexSet& result, const IndexSet& ideal);

/// Counts hypotheses whose rejection frequency f_i across runs satisfies
/// min(f_i, 1-f_i) > threshold (strict): decisions dominated by Monte
/// Carlo noise rather than data.
std::size_t randomly_classified(const std::vector<IndexSet>& runs, std::size_t m,
                                double threshold = 0.1);

/// Empirical quantiles under the nearest-rank definition (index
/// ceil(q*n), 1-based, clamped to [1, n]).
std::vector<std::uint64_t> effort_quantiles(std::vector<std::uint64_t> efforts,
                                            const std::vector<double>& probs);

/// One comparison row: a competitor at one tuning value, plus the
/// sequential method run at the competitor's per-run realized effort.
struct CompareRow {
    std::string method;        // "naive" or "mcfdr"
    std::uint64_t param = 0;   // s or u
    double mis = 0.0;          // competitor: mean misclassifications
    std::size_t rc = 0;        // competitor: randomly classified count
    double effort_mean = 0.0;  // competitor: mean N
    double undecided = 0.0;    // matched-effort guaranteed run: mean undecided
    double forced_mis = 0.0;   // matched-effort forced classification
    std::size_t forced_rc = 0;
};

struct CompareConfig {
    EngineConfig engine;                  // k_max is overridden per run
    std::vector<std::uint64_t> naive_s;   // one row per value
    std::vector<std::uint64_t> mcfdr_u;   // one row per value
    std::uint64_t mcfdr_round_batch = 1;
    std::size_t n_runs = 1;
    std::uint64_t seed = 0;
    std::size_t workers = 1;
    double rc_threshold = 0.1;
};

/// Runs each competitor n_runs times on fresh Bernoulli streams from
/// pstar, then the sequential engine with k_max matched to the
/// competitor's realized N of the same seed-run. Deterministic for a fixed
/// seed regardless of the worker count.
std::vector<CompareRow> compare_methods(const PValueVector& pstar,
                                        const CompareConfig& cfg);

/// Effort-vs-undecided curve built from run traces: for each undecided
/// count c, the effort N_c at which the run first had at most c undecided
/// hypotheses; a missing N_c is filled from the largest c' < c that has
/// one. Rows cover c from the worst per-run minimum up to m.
struct EffortCurve {
    std::vector<std::size_t> undecided;                    // row labels c
    std::vector<std::vector<std::uint64_t>> efforts;       // [row][run]
};
EffortCurve effort_vs_undecided(const std::vector<RunTrace>& traces, std::size_t m);

struct ScalingConfig {
    EngineConfig engine;         // c is overridden per m
    std::vector<std::size_t> m_grid;
    double c_fraction = 0.01;    // stop at all but floor(c_fraction*m)
    std::size_t n_runs = 1;
    std::uint64_t seed = 0;
    std::size_t workers = 1;
    std::vector<double> probs = {0.5, 0.95, 0.99};
};

struct ScalingRow {
    std::size_t m = 0;
    std::vector<std::uint64_t> quantiles;  // aligned with cfg.probs
};

/// For each m: n_runs runs, each on a fresh population resampled with
/// replacement from pstar, stopped at all but floor(c_fraction*m)
/// hypotheses; reports effort quantiles.
std::vector<ScalingRow> scaling_study(const PValueVector& pstar,
                                      const ScalingConfig& cfg);

/// Runs the loop body fn(run_index) for run_index in [0, n) on up to
/// `workers` threads. fn must only touch per-index state.
void parallel_runs(std::size_t n, std::size_t workers,
                   const std::function<void(std::size_t)>& fn);

}  // namespace seqmct
