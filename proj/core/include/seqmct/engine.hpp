#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "seqmct/confidence.hpp"
#include "seqmct/procedures.hpp"

namespace seqmct {

/// Abstract per-hypothesis stream of exceedance indicators.
///
/// draw(i, count) consumes `count` fresh indicators for hypothesis i and
/// returns how many of them were 1, or nullopt if the stream cannot supply
/// that many (finite sources). Streams for distinct hypotheses must be
/// independent given the seed, and a stream's output must not depend on
/// how draws are partitioned into batches.
class SampleSource {
public:
    virtual ~SampleSource() = default;

    virtual std::size_t size() const = 0;
    virtual std::optional<std::uint64_t> draw(std::size_t hypothesis,
                                              std::uint64_t count) = 0;

    /// Advance the stream for hypothesis i by `count` indicators without
    /// using them. Needed when resuming from a snapshot.
    virtual void skip(std::size_t hypothesis, std::uint64_t count) {
        draw(hypothesis, count);
    }
};

struct EngineConfig {
    std::uint64_t delta0 = 10;                // initial batch size, >= 1
    double growth = 1.25;                     // geometric factor a >= 1
    std::uint64_t c = 0;                      // acceptable undecided count
    std::optional<std::uint64_t> k_max;       // total-effort guard; nullopt = unbounded
    SpendingConfig spending;
    ProcedureSpec procedure;
};

void validate_engine_config(const EngineConfig& cfg, std::size_t m);

/// The pair (A_lower, A_upper): surely rejected / possibly rejected.
struct Classification {
    IndexSet a_lower;
    IndexSet a_upper;

    std::size_t undecided_count() const { return a_upper.size() - a_lower.size(); }
    friend bool operator==(const Classification&, const Classification&) = default;
};

struct TraceRecord {
    std::uint64_t iteration = 0;     // n
    std::uint64_t delta = 0;         // batch size used in this iteration
    std::uint64_t total_effort = 0;  // N = sum of k_i after the iteration
    std::size_t lower_size = 0;
    std::size_t upper_size = 0;
    std::size_t undecided = 0;

    friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};
using RunTrace = std::vector<TraceRecord>;

enum class StopReason { Classified, EffortLimit, SourceExhausted };

struct SamplingState {
    std::vector<std::uint64_t> exceedances;  // S_i
    std::vector<std::uint64_t> samples;      // k_i
    std::vector<Interval> intervals;         // I_i
    std::uint64_t delta = 0;                 // current Delta (value used last)
    std::uint64_t iteration = 0;             // n
    std::uint64_t total_effort = 0;          // N = sum k_i
    bool coverage_violation = false;         // an interval intersection came up empty
    Classification classification;

    std::size_t m() const { return samples.size(); }

    static SamplingState initial(std::size_t m, const EngineConfig& cfg);
};

/// Runs one iteration of the sequential algorithm: grows Delta, draws a
/// batch for every undecided hypothesis, intersects the refreshed
/// confidence intervals with the previous ones, and recomputes the
/// classification from the interval endpoints. Returns false if the
/// source was exhausted during the iteration (the state is still left
/// consistent and its classification remains guaranteed).
bool step(SamplingState& state, const EngineConfig& cfg, SampleSource& src);

using StepObserver = std::function<void(const SamplingState&)>;

struct RunResult {
    Classification classification;
    SamplingState state;
    RunTrace trace;
    StopReason stop = StopReason::Classified;
};

/// Full loop: steps while more than cfg.c hypotheses are undecided and the
/// total effort has not passed cfg.k_max. The guard is checked at the loop
/// head, so the final iteration may overshoot k_max by one batch. The
/// observer, if set, is invoked after every iteration.
RunResult run(const EngineConfig& cfg, SampleSource& src,
              const StepObserver& observer = {});

/// Continues a run from a restored state. The source must already be
/// positioned past the samples recorded in the state (see SampleSource::skip).
RunResult resume(SamplingState state, const EngineConfig& cfg, SampleSource& src,
                 const StepObserver& observer = {});

/// Ad-hoc complete classification: applies the configured procedure to the
/// estimates (S_i+1)/(k_i+1). Forfeits the correctness guarantee.
IndexSet forced_classification(const SamplingState& state, const EngineConfig& cfg);

/// The guaranteed three-way partition of {1..m}.
struct Report {
    IndexSet rejected;      // A_lower
    IndexSet non_rejected;  // complement of A_upper
    IndexSet undecided;     // A_upper \ A_lower
};
Report guaranteed_report(const Classification& classification, std::size_t m);

/// Nested-interval intersection. On an empty intersection (a coverage
/// failure) collapses to the endpoint of `prev` nearest to `next` and sets
/// `violated`.
Interval intersect_nested(const Interval& prev, const Interval& next, bool& violated);

/// Resumable snapshot: state, config echo and seed serialized as JSON.
/// Interval endpoints keep full double precision (17 significant digits).
std::string snapshot_to_json(const SamplingState& state, const EngineConfig& cfg,
                             std::uint64_t seed);

struct Snapshot {
    SamplingState state;
    EngineConfig config;
    std::uint64_t seed = 0;
};
Snapshot snapshot_from_json(const std::string& text);

}  // namespace seqmct
