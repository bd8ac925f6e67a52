#include "seqmct/baselines.hpp"

#include <algorithm>

namespace seqmct {

BaselineResult naive_run(const NaiveConfig& cfg, SampleSource& src) {
    if (cfg.s < 1) throw std::invalid_argument("naive method requires s >= 1");
    validate_procedure(cfg.procedure);

    const std::size_t m = src.size();
    PValueVector estimates(m);
    BaselineResult result;
    result.exceedances.resize(m);
    result.samples.assign(m, cfg.s);
    for (std::size_t i = 0; i < m; ++i) {
        auto got = src.draw(i, cfg.s);
        if (!got) throw SourceExhausted("naive method: source exhausted");
        result.exceedances[i] = *got;
        estimates[i] = static_cast<double>(*got + 1) / static_cast<double>(cfg.s + 1);
    }
    result.rejected = classify(cfg.procedure, estimates);
    result.effort = static_cast<std::uint64_t>(m) * cfg.s;
    return result;
}

BaselineResult mcfdr_run(const McfdrConfig& cfg, SampleSource& src) {
    if (cfg.u < 1) throw std::invalid_argument("mcfdr requires u >= 1");
    if (cfg.round_batch < 1) throw std::invalid_argument("mcfdr requires round_batch >= 1");
    validate_procedure(cfg.procedure);

    const std::size_t m = src.size();
    std::vector<std::uint64_t> exceedances(m, 0), samples(m, 0);
    std::vector<bool> active(m, true);
    PValueVector estimates(m, 1.0);
    std::uint64_t effort = 0;
    std::size_t active_count = m;

    IndexSet rejected;
    for (;;) {
        for (std::size_t i = 0; i < m; ++i) {
            if (!active[i]) continue;
            // Draw one indicator at a time so a hypothesis finalizes the
            // moment its exceedance count hits u exactly.
            for (std::uint64_t b = 0; b < cfg.round_batch; ++b) {
                auto got = src.draw(i, 1);
                if (!got) throw SourceExhausted("mcfdr: source exhausted");
                ++samples[i];
                ++effort;
                exceedances[i] += *got;
                if (exceedances[i] == cfg.u) {
                    active[i] = false;
                    --active_count;
                    estimates[i] = static_cast<double>(cfg.u) /
                                   static_cast<double>(samples[i]);
                    break;
                }
            }
            if (active[i]) {
                estimates[i] = static_cast<double>(exceedances[i] + 1) /
                               static_cast<double>(samples[i] + 1);
            }
        }

        rejected = classify(cfg.procedure, estimates);
        if (active_count == 0) break;
        bool all_active_rejected = true;
        for (std::size_t i = 0; i < m && all_active_rejected; ++i) {
            if (active[i] &&
                !std::binary_search(rejected.begin(), rejected.end(), i)) {
                all_active_rejected = false;
            }
        }
        if (all_active_rejected) break;
    }
    BaselineResult result;
    result.rejected = std::move(rejected);
    result.effort = effort;
    result.exceedances = std::move(exceedances);
    result.samples = std::move(samples);
    return result;
}

}  // namespace seqmct
