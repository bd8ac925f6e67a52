// Command-line driver: guaranteed classification runs, method comparisons,
// effort scaling studies and effort-vs-undecided traces.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "seqmct/baselines.hpp"
#include "seqmct/engine.hpp"
#include "seqmct/harness.hpp"
#include "seqmct/io.hpp"
#include "seqmct/rng.hpp"
#include "seqmct/sources.hpp"

namespace {

using namespace seqmct;

int log_level() {
    const char* env = std::getenv("SEQMCT_LOG");
    if (!env || !*env) return 0;
    return std::atoi(env);
}

void log_line(const std::string& msg) {
    if (log_level() > 0) std::cerr << "[seqmct] " << msg << "\n";
}

struct CommonOpts {
    std::string procedure = "bh";
    double alpha = 0.1;
    double epsilon = 0.01;
    double r = 10000.0;
    std::uint64_t delta0 = 10;
    double growth = 1.25;
    std::uint64_t c = 0;
    std::optional<std::uint64_t> kmax;
    std::uint64_t seed = 0;
    std::size_t runs = 1;
    std::size_t workers = 1;
    std::string out;
};

void add_engine_flags(CLI::App& cmd, CommonOpts& o) {
    cmd.add_option("--procedure", o.procedure, "Multiple testing procedure")
        ->check(CLI::IsMember({"bh", "bonferroni"}))
        ->capture_default_str();
    cmd.add_option("--alpha", o.alpha, "Procedure threshold")->capture_default_str();
    cmd.add_option("--epsilon", o.epsilon, "Overall error budget")
        ->capture_default_str();
    cmd.add_option("--r", o.r, "Spending sequence rate")->capture_default_str();
    cmd.add_option("--delta0", o.delta0, "Initial batch size")->capture_default_str();
    cmd.add_option("--growth", o.growth, "Geometric batch growth factor")
        ->capture_default_str();
    cmd.add_option("--seed", o.seed, "Master RNG seed")->required();
    cmd.add_option("--workers", o.workers, "Max concurrent runs")
        ->capture_default_str();
    cmd.add_option("--out", o.out, "Output directory");
}

ProcedureSpec procedure_spec(const CommonOpts& o) {
    ProcedureSpec spec;
    spec.kind = o.procedure == "bh" ? ProcedureKind::BenjaminiHochberg
                                    : ProcedureKind::Bonferroni;
    spec.alpha = o.alpha;
    return spec;
}

EngineConfig engine_config(const CommonOpts& o, std::size_t m) {
    EngineConfig cfg;
    cfg.delta0 = o.delta0;
    cfg.growth = o.growth;
    cfg.c = o.c;
    cfg.k_max = o.kmax;
    cfg.spending = {o.epsilon, o.r, m};
    cfg.procedure = procedure_spec(o);
    return cfg;
}

std::vector<std::pair<std::string, std::string>> base_metadata(
    const std::string& command, const CommonOpts& o) {
    std::vector<std::pair<std::string, std::string>> md;
    md.emplace_back("seqmct_version", kVersion);
    md.emplace_back("command", command);
    md.emplace_back("seed", std::to_string(o.seed));
    md.emplace_back("procedure", o.procedure);
    md.emplace_back("alpha", format_double(o.alpha));
    md.emplace_back("epsilon", format_double(o.epsilon));
    md.emplace_back("r", format_double(o.r));
    md.emplace_back("delta0", std::to_string(o.delta0));
    md.emplace_back("growth", format_double(o.growth));
    return md;
}

void ensure_out_dir(const std::string& out) {
    if (!out.empty()) std::filesystem::create_directories(out);
}

std::string out_path(const std::string& out, const std::string& name) {
    return (std::filesystem::path(out) / name).string();
}

const char* stop_reason_name(StopReason r) {
    switch (r) {
        case StopReason::Classified: return "classified";
        case StopReason::EffortLimit: return "effort_limit";
        case StopReason::SourceExhausted: return "source_exhausted";
    }
    return "unknown";
}

// --- run ---

int cmd_run(const CommonOpts& o, const std::string& pvalues_path,
            const std::string& matrix_path, bool forced) {
    std::unique_ptr<SampleSource> src;
    std::size_t m = 0;
    if (!pvalues_path.empty()) {
        PValueVector pstar = read_pvalues(pvalues_path);
        m = pstar.size();
        src = std::make_unique<BernoulliOracle>(std::move(pstar), o.seed);
    } else {
        LabeledMatrix matrix = read_matrix(matrix_path);
        m = matrix.data.size();
        src = std::make_unique<PermutationSource>(std::move(matrix.data),
                                                  std::move(matrix.labels), o.seed);
    }
    log_line("run: m=" + std::to_string(m));

    const EngineConfig cfg = engine_config(o, m);
    RunResult result = run(cfg, *src);
    const Report report = guaranteed_report(result.classification, m);

    std::cout << "stop: " << stop_reason_name(result.stop) << "\n"
              << "iterations: " << result.state.iteration << "\n"
              << "effort: " << result.state.total_effort << "\n"
              << "rejected (" << report.rejected.size()
              << "): " << format_index_set_1based(report.rejected) << "\n"
              << "non-rejected (" << report.non_rejected.size()
              << "): " << format_index_set_1based(report.non_rejected) << "\n"
              << "undecided (" << report.undecided.size()
              << "): " << format_index_set_1based(report.undecided) << "\n";
    if (result.state.coverage_violation) {
        std::cout << "warning: an interval intersection was empty "
                     "(coverage violation)\n";
    }

    IndexSet forced_set;
    if (forced) {
        forced_set = forced_classification(result.state, cfg);
        std::cout << "forced rejected (" << forced_set.size()
                  << "): " << format_index_set_1based(forced_set) << "\n";
    }

    if (!o.out.empty()) {
        ensure_out_dir(o.out);
        nlohmann::json j;
        j["seqmct_version"] = kVersion;
        j["seed"] = o.seed;
        j["stop"] = stop_reason_name(result.stop);
        j["effort"] = result.state.total_effort;
        j["iterations"] = result.state.iteration;
        j["coverage_violation"] = result.state.coverage_violation;
        auto one_based = [](const IndexSet& s) {
            std::vector<std::size_t> v;
            v.reserve(s.size());
            for (std::size_t i : s) v.push_back(i + 1);
            return v;
        };
        j["rejected"] = one_based(report.rejected);
        j["non_rejected"] = one_based(report.non_rejected);
        j["undecided"] = one_based(report.undecided);
        if (forced) j["forced_rejected"] = one_based(forced_set);
        write_file(out_path(o.out, "report.json"), j.dump(2) + "\n");

        CsvTable trace;
        trace.metadata = base_metadata("run", o);
        trace.columns = {"iteration", "delta", "effort", "lower_size",
                         "upper_size", "undecided"};
        for (const TraceRecord& rec : result.trace) {
            trace.rows.push_back({std::to_string(rec.iteration),
                                  std::to_string(rec.delta),
                                  std::to_string(rec.total_effort),
                                  std::to_string(rec.lower_size),
                                  std::to_string(rec.upper_size),
                                  std::to_string(rec.undecided)});
        }
        write_file(out_path(o.out, "trace.csv"), trace.to_string());

        write_file(out_path(o.out, "snapshot.json"),
                   snapshot_to_json(result.state, cfg, o.seed) + "\n");
        log_line("wrote report.json, trace.csv, snapshot.json to " + o.out);
    }
    return 0;
}

// --- compare ---

int cmd_compare(const CommonOpts& o, const std::string& pvalues_path,
                std::vector<std::uint64_t> naive_s, std::vector<std::uint64_t> mcfdr_u,
                std::uint64_t round_batch, double rc_threshold) {
    const PValueVector pstar = read_pvalues(pvalues_path);

    CompareConfig cfg;
    cfg.engine = engine_config(o, pstar.size());
    cfg.naive_s = std::move(naive_s);
    cfg.mcfdr_u = std::move(mcfdr_u);
    cfg.mcfdr_round_batch = round_batch;
    cfg.n_runs = o.runs;
    cfg.seed = o.seed;
    cfg.workers = o.workers;
    cfg.rc_threshold = rc_threshold;
    if (cfg.naive_s.empty() && cfg.mcfdr_u.empty()) {
        throw CLI::ValidationError("compare", "need at least one --s or --u value");
    }
    log_line("compare: m=" + std::to_string(pstar.size()) + ", runs=" +
             std::to_string(cfg.n_runs));

    const auto rows = compare_methods(pstar, cfg);

    CsvTable table;
    table.metadata = base_metadata("compare", o);
    table.metadata.emplace_back("runs", std::to_string(cfg.n_runs));
    table.metadata.emplace_back("m", std::to_string(pstar.size()));
    table.metadata.emplace_back("rc_threshold", format_double(rc_threshold));
    table.columns = {"method", "param",     "mis",        "rc",
                     "N",      "undecided", "forced_mis", "forced_rc"};
    for (const CompareRow& row : rows) {
        table.rows.push_back({row.method, std::to_string(row.param),
                              format_double(row.mis), std::to_string(row.rc),
                              format_double(row.effort_mean),
                              format_double(row.undecided),
                              format_double(row.forced_mis),
                              std::to_string(row.forced_rc)});
    }
    const std::string csv = table.to_string();
    std::cout << csv;
    if (!o.out.empty()) {
        ensure_out_dir(o.out);
        write_file(out_path(o.out, "compare.csv"), csv);
        log_line("wrote compare.csv to " + o.out);
    }
    return 0;
}

// --- scaling ---

std::vector<std::size_t> parse_m_grid(const std::string& text) {
    std::vector<std::size_t> grid;
    if (text.find(':') != std::string::npos) {
        std::size_t lo = 0, hi = 0, step = 0;
        if (std::sscanf(text.c_str(), "%zu:%zu:%zu", &lo, &hi, &step) != 3 ||
            step == 0 || lo == 0 || hi < lo) {
            throw CLI::ValidationError("--m-grid", "expected LO:HI:STEP");
        }
        for (std::size_t m = lo; m <= hi; m += step) grid.push_back(m);
    } else {
        std::istringstream in(text);
        std::string tok;
        while (std::getline(in, tok, ',')) {
            const std::size_t m = std::strtoull(tok.c_str(), nullptr, 10);
            if (m == 0) throw CLI::ValidationError("--m-grid", "bad value: " + tok);
            grid.push_back(m);
        }
    }
    if (grid.empty()) throw CLI::ValidationError("--m-grid", "empty grid");
    return grid;
}

int cmd_scaling(const CommonOpts& o, const std::string& pvalues_path,
                const std::string& m_grid_text, double c_fraction) {
    const PValueVector pstar = read_pvalues(pvalues_path);

    ScalingConfig cfg;
    cfg.engine = engine_config(o, pstar.size());
    cfg.m_grid = parse_m_grid(m_grid_text);
    cfg.c_fraction = c_fraction;
    cfg.n_runs = o.runs;
    cfg.seed = o.seed;
    cfg.workers = o.workers;
    log_line("scaling: " + std::to_string(cfg.m_grid.size()) + " grid points, runs=" +
             std::to_string(cfg.n_runs));

    const auto rows = scaling_study(pstar, cfg);

    CsvTable table;
    table.metadata = base_metadata("scaling", o);
    table.metadata.emplace_back("runs", std::to_string(cfg.n_runs));
    table.metadata.emplace_back("c_fraction", format_double(c_fraction));
    table.columns = {"m", "N_q50", "N_q95", "N_q99"};
    for (const ScalingRow& row : rows) {
        table.rows.push_back({std::to_string(row.m),
                              std::to_string(row.quantiles[0]),
                              std::to_string(row.quantiles[1]),
                              std::to_string(row.quantiles[2])});
    }
    const std::string csv = table.to_string();
    std::cout << csv;
    if (!o.out.empty()) {
        ensure_out_dir(o.out);
        write_file(out_path(o.out, "scaling.csv"), csv);
        log_line("wrote scaling.csv to " + o.out);
    }
    return 0;
}

// --- trace ---

int cmd_trace(const CommonOpts& o, const std::string& pvalues_path) {
    const PValueVector pstar = read_pvalues(pvalues_path);
    const std::size_t m = pstar.size();
    const EngineConfig cfg = engine_config(o, m);
    log_line("trace: m=" + std::to_string(m) + ", runs=" + std::to_string(o.runs));

    std::vector<RunTrace> traces(o.runs);
    parallel_runs(o.runs, o.workers, [&](std::size_t run_index) {
        BernoulliOracle src(pstar, substream_seed(o.seed, run_index));
        traces[run_index] = run(cfg, src).trace;
    });

    const EffortCurve curve = effort_vs_undecided(traces, m);

    CsvTable table;
    table.metadata = base_metadata("trace", o);
    table.metadata.emplace_back("runs", std::to_string(o.runs));
    table.metadata.emplace_back("c", std::to_string(cfg.c));
    table.columns = {"undecided", "N_q50", "N_q95", "N_q99"};
    for (std::size_t row = 0; row < curve.undecided.size(); ++row) {
        const auto q = effort_quantiles(curve.efforts[row], {0.5, 0.95, 0.99});
        table.rows.push_back({std::to_string(curve.undecided[row]),
                              std::to_string(q[0]), std::to_string(q[1]),
                              std::to_string(q[2])});
    }
    const std::string csv = table.to_string();
    std::cout << csv;
    if (!o.out.empty()) {
        ensure_out_dir(o.out);
        write_file(out_path(o.out, "trace_curve.csv"), csv);
        log_line("wrote trace_curve.csv to " + o.out);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sequential Monte Carlo multiple testing with guaranteed "
                 "classifications"};
    app.require_subcommand(1);

    CommonOpts run_opts, compare_opts, scaling_opts, trace_opts;

    // run
    auto* run_cmd = app.add_subcommand(
        "run", "Classify hypotheses with the sequential engine");
    std::string run_pvalues, run_matrix;
    bool run_forced = false;
    auto* pv_opt = run_cmd->add_option("--pvalues", run_pvalues,
                                       "Ideal p-values (CSV or JSON array)");
    auto* mx_opt = run_cmd->add_option("--matrix", run_matrix,
                                       "Labeled data matrix CSV (permutation test)");
    pv_opt->excludes(mx_opt);
    run_cmd->add_option("--c", run_opts.c, "Stop when at most c hypotheses undecided")
        ->capture_default_str();
    run_cmd->add_option("--kmax", run_opts.kmax, "Total effort guard");
    run_cmd->add_flag("--forced", run_forced, "Also report the forced classification");
    add_engine_flags(*run_cmd, run_opts);

    // compare
    auto* compare_cmd =
        app.add_subcommand("compare", "Compare baselines to the sequential engine");
    std::string compare_pvalues;
    std::vector<std::uint64_t> naive_s, mcfdr_u;
    std::uint64_t round_batch = 1;
    double rc_threshold = 0.1;
    compare_cmd->add_option("--pvalues", compare_pvalues, "Ideal p-values")
        ->required();
    compare_cmd->add_option("--s", naive_s, "Naive method sample counts");
    compare_cmd->add_option("--u", mcfdr_u, "MCFDR exceedance thresholds")
        ->check(CLI::PositiveNumber);
    compare_cmd->add_option("--round-batch", round_batch, "MCFDR round batch size")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    compare_cmd->add_option("--rc-threshold", rc_threshold,
                            "Randomly-classified frequency threshold")
        ->capture_default_str();
    compare_cmd->add_option("--runs", compare_opts.runs, "Number of runs")
        ->capture_default_str();
    add_engine_flags(*compare_cmd, compare_opts);

    // scaling
    auto* scaling_cmd = app.add_subcommand(
        "scaling", "Effort quantiles against the number of hypotheses");
    std::string scaling_pvalues, m_grid_text;
    double c_fraction = 0.01;
    scaling_cmd->add_option("--pvalues", scaling_pvalues, "Population to resample")
        ->required();
    scaling_cmd->add_option("--m-grid", m_grid_text, "LO:HI:STEP or comma list")
        ->required();
    scaling_cmd
        ->add_option("--c-fraction", c_fraction,
                     "Stop at all but floor(c_fraction*m) hypotheses")
        ->capture_default_str();
    scaling_cmd->add_option("--runs", scaling_opts.runs, "Runs per grid point")
        ->capture_default_str();
    add_engine_flags(*scaling_cmd, scaling_opts);

    // trace
    auto* trace_cmd = app.add_subcommand(
        "trace", "Effort against number of unclassified hypotheses");
    std::string trace_pvalues;
    trace_cmd->add_option("--pvalues", trace_pvalues, "Ideal p-values")->required();
    trace_cmd->add_option("--c", trace_opts.c, "Run until at most c undecided")
        ->capture_default_str();
    trace_cmd->add_option("--runs", trace_opts.runs, "Number of runs")
        ->capture_default_str();
    add_engine_flags(*trace_cmd, trace_opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            if (run_pvalues.empty() && run_matrix.empty()) {
                std::cerr << "run: need --pvalues or --matrix\n";
                return 2;
            }
            return cmd_run(run_opts, run_pvalues, run_matrix, run_forced);
        }
        if (compare_cmd->parsed()) {
            return cmd_compare(compare_opts, compare_pvalues, naive_s, mcfdr_u,
                               round_batch, rc_threshold);
        }
        if (scaling_cmd->parsed()) {
            return cmd_scaling(scaling_opts, scaling_pvalues, m_grid_text, c_fraction);
        }
        if (trace_cmd->parsed()) {
            return cmd_trace(trace_opts, trace_pvalues);
        }
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
