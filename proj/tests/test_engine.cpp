#include <doctest.h>

#include <algorithm>

#include "seqmct/engine.hpp"
#include "seqmct/sources.hpp"

using namespace seqmct;

namespace {

EngineConfig default_config(std::size_t m) {
    EngineConfig cfg;
    cfg.spending = {0.01, 10000.0, m};
    cfg.procedure = {ProcedureKind::BenjaminiHochberg, 0.1};
    return cfg;
}

}  // namespace

TEST_CASE("deterministic streams: all-zeros source classifies as rejected") {
    BernoulliOracle src({0.0}, 1);
    const auto result = run(default_config(1), src);
    CHECK(result.stop == StopReason::Classified);
    CHECK(result.classification.a_lower == IndexSet{0});
    CHECK(result.classification.a_upper == IndexSet{0});
}

TEST_CASE("deterministic streams: all-ones source classifies as non-rejected") {
    BernoulliOracle src({1.0}, 1);
    const auto result = run(default_config(1), src);
    CHECK(result.stop == StopReason::Classified);
    CHECK(result.classification.a_lower.empty());
    CHECK(result.classification.a_upper.empty());
}

TEST_CASE("batch growth: the first batch is floor(a*delta0)") {
    BernoulliOracle src({0.5}, 3);
    auto cfg = default_config(1);
    cfg.k_max = 0;  // exactly one iteration
    const auto result = run(cfg, src);
    REQUIRE(result.trace.size() == 1);
    CHECK(result.trace[0].delta == 12);  // floor(1.25 * 10)
    CHECK(result.state.samples[0] == 12);
    CHECK(result.state.total_effort == 12);
    CHECK(result.stop == StopReason::EffortLimit);
}

TEST_CASE("c = m returns after zero iterations") {
    BernoulliOracle src({0.5, 0.5}, 3);
    auto cfg = default_config(2);
    cfg.c = 2;
    const auto result = run(cfg, src);
    CHECK(result.trace.empty());
    CHECK(result.state.total_effort == 0);
    CHECK(result.classification.a_lower.empty());
    CHECK(result.classification.a_upper == IndexSet{0, 1});
}

TEST_CASE("two deterministic hypotheses") {
    BernoulliOracle src({0.0, 1.0}, 9);
    const auto result = run(default_config(2), src);
    CHECK(result.classification.a_lower == IndexSet{0});
    CHECK(result.classification.a_upper == IndexSet{0});
    const auto report = guaranteed_report(result.classification, 2);
    CHECK(report.rejected == IndexSet{0});
    CHECK(report.non_rejected == IndexSet{1});
    CHECK(report.undecided.empty());
}

TEST_CASE("structure invariants along a stochastic run") {
    const PValueVector pstar{0.001, 0.02, 0.3, 0.6, 0.9, 0.0001, 0.45, 0.05};
    BernoulliOracle src(pstar, 123);
    auto cfg = default_config(pstar.size());
    cfg.spending.epsilon = 0.05;
    cfg.k_max = 2000000;

    IndexSet prev_lower;
    IndexSet prev_upper(pstar.size());
    for (std::size_t i = 0; i < pstar.size(); ++i) prev_upper[i] = i;
    std::vector<Interval> prev_intervals(pstar.size(), Interval{0.0, 1.0});
    std::vector<std::uint64_t> prev_samples(pstar.size(), 0);
    bool ok = true;

    const auto result = run(cfg, src, [&](const SamplingState& st) {
        ok = ok && std::includes(st.classification.a_lower.begin(),
                                 st.classification.a_lower.end(),
                                 prev_lower.begin(), prev_lower.end());
        ok = ok && std::includes(prev_upper.begin(), prev_upper.end(),
                                 st.classification.a_upper.begin(),
                                 st.classification.a_upper.end());
        std::uint64_t total = 0;
        for (std::size_t i = 0; i < st.m(); ++i) {
            ok = ok && st.intervals[i].lo >= prev_intervals[i].lo - 1e-15;
            ok = ok && st.intervals[i].hi <= prev_intervals[i].hi + 1e-15;
            ok = ok && st.exceedances[i] <= st.samples[i];
            total += st.samples[i];
            // Frozen hypotheses keep their sample counts.
            const bool was_undecided =
                std::binary_search(prev_upper.begin(), prev_upper.end(), i) &&
                !std::binary_search(prev_lower.begin(), prev_lower.end(), i);
            if (!was_undecided) ok = ok && st.samples[i] == prev_samples[i];
        }
        ok = ok && total == st.total_effort;
        prev_lower = st.classification.a_lower;
        prev_upper = st.classification.a_upper;
        prev_intervals = st.intervals;
        prev_samples = st.samples;
    });
    CHECK(ok);
    CHECK(result.state.total_effort > 0);
}

TEST_CASE("source exhaustion stops the run with the current classification") {
    FixedSource src({std::vector<int>(30, 0)});
    const auto result = run(default_config(1), src);
    CHECK(result.stop == StopReason::SourceExhausted);
    // 12 + 15 samples fit; the 18-sample batch does not.
    CHECK(result.state.total_effort == 27);
}

TEST_CASE("intersect_nested: empty intersection collapses and flags") {
    bool violated = false;
    const Interval kept = intersect_nested({0.1, 0.3}, {0.15, 0.25}, violated);
    CHECK(kept == Interval{0.15, 0.25});
    CHECK_FALSE(violated);

    const Interval above = intersect_nested({0.1, 0.3}, {0.4, 0.5}, violated);
    CHECK(above == Interval{0.3, 0.3});
    CHECK(violated);

    violated = false;
    const Interval below = intersect_nested({0.1, 0.3}, {0.01, 0.05}, violated);
    CHECK(below == Interval{0.1, 0.1});
    CHECK(violated);
}

TEST_CASE("forced_classification: estimator (S+1)/(k+1)") {
    auto cfg = default_config(3);
    SamplingState st = SamplingState::initial(3, cfg);
    st.exceedances = {3, 0, 89};
    st.samples = {9, 0, 99};
    // Estimates: 0.4, 1 (unsampled is conservative), 0.9.
    const auto forced = forced_classification(st, cfg);
    CHECK(forced == IndexSet{});

    st.exceedances = {1, 3, 89};
    st.samples = {99, 99, 99};  // estimates 0.02, 0.04, 0.9
    CHECK(forced_classification(st, cfg) == IndexSet{0, 1});
}

TEST_CASE("guaranteed_report: partitions {1..m}") {
    Classification cl;
    cl.a_lower = {0};
    cl.a_upper = {0, 1};
    const auto report = guaranteed_report(cl, 3);
    CHECK(report.rejected == IndexSet{0});
    CHECK(report.non_rejected == IndexSet{2});
    CHECK(report.undecided == IndexSet{1});

    const auto empty = guaranteed_report({{}, {}}, 2);
    CHECK(empty.rejected.empty());
    CHECK(empty.non_rejected == IndexSet{0, 1});
    CHECK(empty.undecided.empty());

    const auto all = guaranteed_report({{0, 1}, {0, 1}}, 2);
    CHECK(all.rejected == IndexSet{0, 1});
    CHECK(all.non_rejected.empty());
    CHECK(all.undecided.empty());

    CHECK_THROWS_AS(guaranteed_report({{1}, {0}}, 2), std::invalid_argument);
}

TEST_CASE("snapshot round trip and resumed run equals uninterrupted run") {
    const PValueVector pstar{0.001, 0.7, 0.02};
    auto cfg = default_config(pstar.size());
    cfg.spending.epsilon = 0.05;

    BernoulliOracle full_src(pstar, 77);
    const auto full = run(cfg, full_src);

    auto partial_cfg = cfg;
    partial_cfg.k_max = 200;
    BernoulliOracle partial_src(pstar, 77);
    const auto partial = run(partial_cfg, partial_src);
    REQUIRE(partial.stop == StopReason::EffortLimit);

    const std::string json = snapshot_to_json(partial.state, partial_cfg, 77);
    const Snapshot snap = snapshot_from_json(json);
    CHECK(snap.seed == 77);
    CHECK(snap.state.samples == partial.state.samples);
    CHECK(snap.state.intervals == partial.state.intervals);
    CHECK(snap.config.k_max == partial_cfg.k_max);

    BernoulliOracle resumed_src(pstar, snap.seed);
    for (std::size_t i = 0; i < snap.state.m(); ++i) {
        resumed_src.skip(i, snap.state.samples[i]);
    }
    auto resumed_cfg = snap.config;
    resumed_cfg.k_max.reset();
    const auto resumed = resume(snap.state, resumed_cfg, resumed_src);

    CHECK(resumed.classification == full.classification);
    CHECK(resumed.state.total_effort == full.state.total_effort);
    CHECK(resumed.state.exceedances == full.state.exceedances);
    CHECK(resumed.state.intervals == full.state.intervals);
}

TEST_CASE("config validation") {
    auto cfg = default_config(2);
    BernoulliOracle src({0.5, 0.5}, 1);
    cfg.delta0 = 0;
    CHECK_THROWS_AS(run(cfg, src), std::invalid_argument);
    cfg = default_config(2);
    cfg.growth = 0.9;
    CHECK_THROWS_AS(run(cfg, src), std::invalid_argument);
    cfg = default_config(3);  // m mismatch
    CHECK_THROWS_AS(run(cfg, src), std::invalid_argument);
}
