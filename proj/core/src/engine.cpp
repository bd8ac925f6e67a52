#include "seqmct/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace seqmct {

void validate_engine_config(const EngineConfig& cfg, std::size_t m) {
    if (cfg.delta0 < 1) throw std::invalid_argument("delta0 must be >= 1");
    if (!(cfg.growth >= 1.0)) throw std::invalid_argument("growth factor must be >= 1");
    validate_spending(cfg.spending);
    validate_procedure(cfg.procedure);
    if (cfg.spending.m != m) {
        throw std::invalid_argument("spending config m does not match source size");
    }
}

SamplingState SamplingState::initial(std::size_t m, const EngineConfig& cfg) {
    SamplingState st;
    st.exceedances.assign(m, 0);
    st.samples.assign(m, 0);
    st.intervals.assign(m, Interval{0.0, 1.0});
    st.delta = cfg.delta0;
    st.iteration = 0;
    st.total_effort = 0;
    st.classification.a_lower = {};
    st.classification.a_upper.resize(m);
    for (std::size_t i = 0; i < m; ++i) st.classification.a_upper[i] = i;
    return st;
}

Interval intersect_nested(const Interval& prev, const Interval& next, bool& violated) {
    const double lo = std::max(prev.lo, next.lo);
    const double hi = std::min(prev.hi, next.hi);
    if (lo <= hi) return {lo, hi};
    // Coverage failure: collapse to the endpoint of the previous interval
    // nearest to the new one, keeping the sequence nested.
    violated = true;
    const double point = (next.lo > prev.hi) ? prev.hi : prev.lo;
    return {point, point};
}

namespace {

bool is_subset(const IndexSet& a, const IndexSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

IndexSet undecided_set(const Classification& cl) {
    IndexSet out;
    std::set_difference(cl.a_upper.begin(), cl.a_upper.end(), cl.a_lower.begin(),
                        cl.a_lower.end(), std::back_inserter(out));
    return out;
}

}  // namespace

bool step(SamplingState& state, const EngineConfig& cfg, SampleSource& src) {
    const std::size_t m = state.m();
    validate_engine_config(cfg, m);
    if (src.size() != m) throw std::invalid_argument("source size mismatch");

    // Delta grows before sampling, so the first batch is floor(a*delta0).
    state.delta = static_cast<std::uint64_t>(
        std::floor(cfg.growth * static_cast<double>(state.delta)));
    state.iteration += 1;

    bool exhausted = false;
    for (std::size_t i : undecided_set(state.classification)) {
        auto got = src.draw(i, state.delta);
        if (!got) {
            exhausted = true;
            continue;
        }
        state.exceedances[i] += *got;
        state.samples[i] += state.delta;
        state.total_effort += state.delta;
        const Interval fresh =
            interval_fn(state.exceedances[i], state.samples[i], state.delta,
                        cfg.spending);
        state.intervals[i] =
            intersect_nested(state.intervals[i], fresh, state.coverage_violation);
    }

    PValueVector uppers(m), lowers(m);
    for (std::size_t i = 0; i < m; ++i) {
        uppers[i] = state.intervals[i].hi;
        lowers[i] = state.intervals[i].lo;
    }
    Classification next;
    next.a_lower = classify(cfg.procedure, uppers);
    next.a_upper = classify(cfg.procedure, lowers);

    if (!is_subset(state.classification.a_lower, next.a_lower) ||
        !is_subset(next.a_upper, state.classification.a_upper) ||
        !is_subset(next.a_lower, next.a_upper)) {
        throw std::logic_error(
            "classification monotonicity violated; procedure is not monotonic");
    }
    state.classification = std::move(next);
    return !exhausted;
}

namespace {

RunResult run_loop(SamplingState state, const EngineConfig& cfg, SampleSource& src,
                   const StepObserver& observer) {
    RunTrace trace;
    StopReason stop = StopReason::Classified;
    while (state.classification.undecided_count() > cfg.c &&
           (!cfg.k_max || state.total_effort <= *cfg.k_max)) {
        const bool ok = step(state, cfg, src);
        trace.push_back({state.iteration, state.delta, state.total_effort,
                         state.classification.a_lower.size(),
                         state.classification.a_upper.size(),
                         state.classification.undecided_count()});
        if (observer) observer(state);
        if (!ok) {
            stop = StopReason::SourceExhausted;
            break;
        }
    }
    if (stop != StopReason::SourceExhausted) {
        stop = state.classification.undecided_count() <= cfg.c
                   ? StopReason::Classified
                   : StopReason::EffortLimit;
    }
    RunResult result;
    result.classification = state.classification;
    result.trace = std::move(trace);
    result.stop = stop;
    result.state = std::move(state);
    return result;
}

}  // namespace

RunResult run(const EngineConfig& cfg, SampleSource& src, const StepObserver& observer) {
    validate_engine_config(cfg, src.size());
    return run_loop(SamplingState::initial(src.size(), cfg), cfg, src, observer);
}

RunResult resume(SamplingState state, const EngineConfig& cfg, SampleSource& src,
                 const StepObserver& observer) {
    validate_engine_config(cfg, state.m());
    return run_loop(std::move(state), cfg, src, observer);
}

IndexSet forced_classification(const SamplingState& state, const EngineConfig& cfg) {
    PValueVector estimates(state.m());
    for (std::size_t i = 0; i < state.m(); ++i) {
        estimates[i] = static_cast<double>(state.exceedances[i] + 1) /
                       static_cast<double>(state.samples[i] + 1);
    }
    return classify(cfg.procedure, estimates);
}

Report guaranteed_report(const Classification& classification, std::size_t m) {
    if (!is_subset(classification.a_lower, classification.a_upper)) {
        throw std::invalid_argument("a_lower must be a subset of a_upper");
    }
    Report report;
    report.rejected = classification.a_lower;
    for (std::size_t i = 0; i < m; ++i) {
        if (!std::binary_search(classification.a_upper.begin(),
                                classification.a_upper.end(), i)) {
            report.non_rejected.push_back(i);
        }
    }
    report.undecided = undecided_set(classification);
    return report;
}

// --- snapshot serialization ---

namespace {

using nlohmann::json;

json config_to_json(const EngineConfig& cfg) {
    json j;
    j["delta0"] = cfg.delta0;
    j["growth"] = cfg.growth;
    j["c"] = cfg.c;
    if (cfg.k_max) {
        j["k_max"] = *cfg.k_max;
    } else {
        j["k_max"] = nullptr;
    }
    j["epsilon"] = cfg.spending.epsilon;
    j["r"] = cfg.spending.r;
    j["m"] = cfg.spending.m;
    j["procedure"] =
        cfg.procedure.kind == ProcedureKind::BenjaminiHochberg ? "bh" : "bonferroni";
    j["alpha"] = cfg.procedure.alpha;
    return j;
}

EngineConfig config_from_json(const json& j) {
    EngineConfig cfg;
    cfg.delta0 = j.at("delta0").get<std::uint64_t>();
    cfg.growth = j.at("growth").get<double>();
    cfg.c = j.at("c").get<std::uint64_t>();
    if (!j.at("k_max").is_null()) cfg.k_max = j.at("k_max").get<std::uint64_t>();
    cfg.spending.epsilon = j.at("epsilon").get<double>();
    cfg.spending.r = j.at("r").get<double>();
    cfg.spending.m = j.at("m").get<std::size_t>();
    const auto proc = j.at("procedure").get<std::string>();
    if (proc == "bh") {
        cfg.procedure.kind = ProcedureKind::BenjaminiHochberg;
    } else if (proc == "bonferroni") {
        cfg.procedure.kind = ProcedureKind::Bonferroni;
    } else {
        throw std::invalid_argument("unknown procedure in snapshot: " + proc);
    }
    cfg.procedure.alpha = j.at("alpha").get<double>();
    return cfg;
}

}  // namespace

std::string snapshot_to_json(const SamplingState& state, const EngineConfig& cfg,
                             std::uint64_t seed) {
    json j;
    j["version"] = 1;
    j["seed"] = seed;
    j["config"] = config_to_json(cfg);
    json st;
    st["n"] = state.iteration;
    st["delta"] = state.delta;
    st["total_effort"] = state.total_effort;
    st["coverage_violation"] = state.coverage_violation;
    st["S"] = state.exceedances;
    st["k"] = state.samples;
    json lo = json::array(), hi = json::array();
    for (const Interval& iv : state.intervals) {
        lo.push_back(iv.lo);
        hi.push_back(iv.hi);
    }
    st["lo"] = std::move(lo);
    st["hi"] = std::move(hi);
    st["a_lower"] = state.classification.a_lower;
    st["a_upper"] = state.classification.a_upper;
    j["state"] = std::move(st);
    return j.dump(2);
}

Snapshot snapshot_from_json(const std::string& text) {
    const json j = json::parse(text);
    Snapshot snap;
    snap.seed = j.at("seed").get<std::uint64_t>();
    snap.config = config_from_json(j.at("config"));
    const json& st = j.at("state");
    SamplingState& s = snap.state;
    s.iteration = st.at("n").get<std::uint64_t>();
    s.delta = st.at("delta").get<std::uint64_t>();
    s.total_effort = st.at("total_effort").get<std::uint64_t>();
    s.coverage_violation = st.at("coverage_violation").get<bool>();
    s.exceedances = st.at("S").get<std::vector<std::uint64_t>>();
    s.samples = st.at("k").get<std::vector<std::uint64_t>>();
    const auto lo = st.at("lo").get<std::vector<double>>();
    const auto hi = st.at("hi").get<std::vector<double>>();
    if (lo.size() != hi.size() || lo.size() != s.samples.size()) {
        throw std::invalid_argument("snapshot interval arrays are inconsistent");
    }
    s.intervals.resize(lo.size());
    for (std::size_t i = 0; i < lo.size(); ++i) s.intervals[i] = {lo[i], hi[i]};
    s.classification.a_lower = st.at("a_lower").get<IndexSet>();
    s.classification.a_upper = st.at("a_upper").get<IndexSet>();
    return snap;
}

}  // namespace seqmct
