#pragma once

#include <cstdint>
#include <stdexcept>

#include "seqmct/engine.hpp"
#include "seqmct/procedures.hpp"

namespace seqmct {

/// Thrown by the baselines when a finite source runs dry mid-run.
struct SourceExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fixed-sample method: s samples per hypothesis, then one application of
/// the multiple-testing procedure to the estimates.
struct NaiveConfig {
    std::uint64_t s = 1000;  // samples per hypothesis, >= 1
    ProcedureSpec procedure;
};

/// Sequential competitor: a hypothesis stops sampling once u exceedances
/// have been observed; the whole algorithm stops once every still-active
/// hypothesis is rejected by the procedure.
struct McfdrConfig {
    std::uint64_t u = 20;            // exceedance stopping threshold, >= 1
    ProcedureSpec procedure;
    std::uint64_t round_batch = 1;   // indicators per hypothesis per round, >= 1
};

struct BaselineResult {
    IndexSet rejected;
    std::uint64_t effort = 0;                // N, total indicators drawn
    std::vector<std::uint64_t> exceedances;  // per-hypothesis S_i
    std::vector<std::uint64_t> samples;      // per-hypothesis k_i
};

/// Draws exactly s indicators per hypothesis (N = m*s) and applies the
/// procedure to p_hat_i = (S_i+1)/(s+1).
BaselineResult naive_run(const NaiveConfig& cfg, SampleSource& src);

/// Round-based loop. Within a round each active hypothesis draws up to
/// round_batch indicators, finalizing the moment its exceedance count hits
/// u (estimate u/k_i). After each round the procedure is applied to the
/// full vector (finalized estimates plus (S_i+1)/(k_i+1) for active ones);
/// the run ends when every active hypothesis is in the rejection set.
BaselineResult mcfdr_run(const McfdrConfig& cfg, SampleSource& src);

}  // namespace seqmct
