// Command-line driver: scenario/graph/corpus generation, experiment runs,
// offline sweeps, and failure attribution over saved traces.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "decider/calendar/scenario.hpp"
#include "decider/fixtures/reference_traces.hpp"
#include "decider/harness/runner.hpp"
#include "decider/retrieval/sweep.hpp"
#include "decider/signals/external.hpp"
#include "decider/trace/attribution.hpp"

namespace {

using namespace decider;

std::vector<double> parse_grid(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        if (!cell.empty()) out.push_back(std::stod(cell));
    }
    if (out.empty()) throw config_error("empty grid: " + csv);
    return out;
}

void write_or_print(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw data_error("cannot open output file: " + out_path);
    out << text;
}

std::string output_dir(std::string requested) {
    if (const char* env = std::getenv("DECIDER_OUT_DIR")) requested = env;
    return requested;
}

int cmd_gen_scenarios(const std::string& experiment, uint64_t seed, const std::string& out_path) {
    json doc = json::array();
    if (experiment == "calendar") {
        for (const auto& s : calendar::generate_scenarios()) doc.push_back(calendar::scenario_to_json(s));
    } else if (experiment == "graph") {
        auto g = graph::generate_graph(200, seed);
        for (const auto& s : graph::build_default_scenarios(g)) doc.push_back(graph::graph_scenario_to_json(s));
    } else {
        throw config_error("gen-scenarios: experiment must be calendar or graph");
    }
    write_or_print(out_path, doc.dump(2) + "\n");
    return 0;
}

int cmd_gen_graph(int n, uint64_t seed, const std::string& out_path) {
    auto g = graph::generate_graph(n, seed);
    write_or_print(out_path, graph::graph_to_json(g).dump() + "\n");
    std::cerr << "graph: " << g.nodes.size() << " nodes, " << g.base_edges.size()
              << " base edges, " << g.noisy_edges.size() << " noisy edges\n";
    return 0;
}

int cmd_synth_corpus(const std::string& counts_csv, uint64_t seed, const std::string& dir) {
    auto grid = parse_grid(counts_csv);
    if (grid.size() != 3) throw config_error("--counts expects easy,medium,hard");
    retrieval::SynthCounts counts{static_cast<int>(grid[0]), static_cast<int>(grid[1]),
                                  static_cast<int>(grid[2])};
    auto synth = retrieval::synthesize_corpus(counts, seed);
    std::filesystem::create_directories(dir);
    retrieval::write_passages(dir + "/corpus.jsonl", synth.corpus);
    retrieval::write_questions(dir + "/questions.jsonl", synth.questions);
    std::cerr << "wrote " << synth.corpus.size() << " passages, " << synth.questions.size()
              << " questions to " << dir << "\n";
    return 0;
}

int cmd_run(harness::ExperimentConfig config, const std::string& format,
            const std::string& out_path) {
    auto result = harness::run_experiment(config);
    auto fmt = format == "csv" ? harness::ReportFormat::csv : harness::ReportFormat::markdown;
    write_or_print(out_path, harness::emit_report(result.table, fmt));
    return 0;
}

int cmd_sweep(const std::string& traces_path, const std::string& tau_csv,
              const std::string& alpha_csv, const std::string& format,
              const std::string& out_path) {
    auto traces = traces_path == "reference" ? fixtures::reference_sweep_traces()
                                         : read_trace_file(traces_path);
    auto rows = retrieval::sweep(traces, parse_grid(tau_csv), parse_grid(alpha_csv));
    harness::ReportTable table;
    table.caption = "offline threshold sweep";
    table.columns = {"Bucket", "alpha", "tau", "Succ.", "RR"};
    for (const auto& r : rows) {
        table.add_row({retrieval::to_string(r.bucket), harness::fmt_rate(r.alpha),
                       harness::fmt_rate(r.tau), harness::fmt_pct(r.success),
                       harness::fmt_rate(r.avg_rounds)});
    }
    auto fmt = format == "csv" ? harness::ReportFormat::csv : harness::ReportFormat::markdown;
    write_or_print(out_path, harness::emit_report(table, fmt));
    return 0;
}

int cmd_attribute(const std::string& traces_path, const std::string& experiment, double tau,
                  const std::string& out_path) {
    auto traces = traces_path == "reference" ? fixtures::reference_sweep_traces()
                                         : read_trace_file(traces_path);
    std::map<std::string, int> counts;
    int failures = 0;
    if (experiment == "retrieval") {
        for (const auto& tr : traces) {
            if (tr.success) continue;
            ++failures;
            counts[to_string(attribute_retrieval_failure(tr, tau).category)]++;
        }
    } else if (experiment == "calendar") {
        std::map<std::string, calendar::CalendarScenario> by_id;
        for (const auto& s : calendar::generate_scenarios()) by_id[s.id] = s;
        for (const auto& tr : traces) {
            if (tr.success) continue;
            auto it = by_id.find(tr.scenario_id);
            if (it == by_id.end()) throw data_error("unknown calendar scenario: " + tr.scenario_id);
            ++failures;
            counts[to_string(attribute_calendar_failure(tr, it->second).category)]++;
        }
    } else {
        throw config_error("attribute: experiment must be calendar or retrieval");
    }
    harness::ReportTable table;
    table.caption = "failure attribution (" + std::to_string(failures) + " failed episodes)";
    table.columns = {"Category", "N", "%"};
    for (const auto& [cat, n] : counts) {
        table.add_row({cat, std::to_string(n),
                       harness::fmt_pct(failures ? static_cast<double>(n) / failures : 0.0)});
    }
    write_or_print(out_path, harness::emit_report(table, harness::ReportFormat::markdown));
    return 0;
}

int cmd_report(const std::string& traces_path, const std::string& experiment,
               const std::string& format, const std::string& out_path) {
    auto traces = read_trace_file(traces_path);
    harness::ReportTable table;
    auto fmt = format == "csv" ? harness::ReportFormat::csv : harness::ReportFormat::markdown;
    if (experiment == "retrieval") {
        table.caption = "retrieval results";
        table.columns = {"Bucket", "Succ.", "RR"};
        for (auto bucket :
             {retrieval::Bucket::easy, retrieval::Bucket::medium, retrieval::Bucket::hard}) {
            std::vector<EpisodeTrace> slice;
            for (const auto& tr : traces) {
                if (retrieval::trace_bucket(tr) == bucket) slice.push_back(tr);
            }
            if (slice.empty()) continue;
            auto agg = retrieval::retrieval_metrics(slice);
            table.add_row({retrieval::to_string(bucket), harness::fmt_pct(agg.success_rate),
                           harness::fmt_rate(agg.avg_rounds)});
        }
    } else {
        // calendar and graph traces both aggregate per scenario id
        std::map<std::string, std::vector<EpisodeTrace>> by_scenario;
        for (const auto& tr : traces) by_scenario[tr.scenario_id].push_back(tr);
        table.caption = experiment + " results";
        if (experiment == "calendar") {
            table.columns = {"Scenario", "Succ.", "1st", "Wasted", "Clarif.", "Turns"};
            for (const auto& [id, slice] : by_scenario) {
                auto agg = calendar::calendar_metrics(slice);
                table.add_row({id, harness::fmt_pct(agg.success_rate),
                               harness::fmt_pct(agg.first_action_optimality),
                               harness::fmt_rate(agg.wasted_executions),
                               harness::fmt_rate(agg.clarifications),
                               harness::fmt_rate(agg.avg_turns)});
            }
        } else if (experiment == "graph") {
            table.columns = {"Scenario", "Succ.", "Wasted", "Clarify", "Backtrack"};
            for (const auto& [id, slice] : by_scenario) {
                auto agg = graph::graph_metrics(slice);
                table.add_row({id, harness::fmt_pct(agg.success_rate),
                               harness::fmt_rate(agg.wasted_traversals),
                               harness::fmt_rate(agg.clarify_count),
                               harness::fmt_rate(agg.backtrack_count)});
            }
        } else {
            throw config_error("report: unknown experiment " + experiment);
        }
    }
    write_or_print(out_path, harness::emit_report(table, fmt));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"decider: explicit decision policies with benchmark environments"};
    app.require_subcommand(1);

    std::string experiment, method = "dc", format = "markdown", out_path, out_dir = "out";
    std::string traces_path, counts_csv = "50,50,50", tau_grid = "0.8", alpha_grid = "0.4";
    std::string corpus_path, questions_path, config_path, scenario_filter, estimator_address;
    int runs = 10, n_nodes = 200, budget = -1, estimator_timeout = 1000;
    uint64_t seed = 0;
    uint64_t graph_seed = decider::graph::kDefaultGraphSeed;
    double tau = 0.8, alpha = 0.4, drift_rate = 0.0, noise_fn = 0.0, noise_fp = 0.0;
    double oracle_confidence = 1.0;

    auto* gen_scen = app.add_subcommand("gen-scenarios", "emit scenario fixtures as JSON");
    gen_scen->add_option("--experiment", experiment, "calendar or graph")->required();
    gen_scen->add_option("--seed", graph_seed, "graph seed");
    gen_scen->add_option("--out", out_path, "output file (default stdout)");

    auto* gen_graph = app.add_subcommand("gen-graph", "emit the organization graph as JSON");
    gen_graph->add_option("--n", n_nodes, "node count");
    gen_graph->add_option("--seed", graph_seed, "graph seed");
    gen_graph->add_option("--out", out_path, "output file (default stdout)");

    auto* synth = app.add_subcommand("synth-corpus", "generate a synthetic retrieval corpus");
    synth->add_option("--counts", counts_csv, "easy,medium,hard question counts");
    synth->add_option("--seed", seed, "generator seed");
    synth->add_option("--out-dir", out_dir, "directory for corpus.jsonl / questions.jsonl");

    auto* run = app.add_subcommand("run", "run an experiment and print its result table");
    run->add_option("experiment", experiment, "calendar | graph | retrieval");
    run->add_option("--config", config_path, "JSON config file (overrides other options)");
    run->add_option("--method", method, "dc|retry or dc_llm|dc_dense|dc_composite");
    run->add_option("--runs", runs, "runs per scenario");
    run->add_option("--seed", seed, "base seed (per-run seed = base + run index)");
    run->add_option("--budget", budget, "turn budget");
    run->add_option("--drift-rate", drift_rate, "calendar: drifting question-generator rate");
    run->add_option("--noise-fn", noise_fn, "calendar: extractor false-negative rate");
    run->add_option("--noise-fp", noise_fp, "calendar: extractor false-positive rate");
    run->add_option("--scenario", scenario_filter, "graph: restrict to one scenario id");
    run->add_option("--graph-seed", graph_seed, "graph: generator seed");
    run->add_option("--tau", tau, "retrieval: stop threshold");
    run->add_option("--alpha", alpha, "retrieval: composite blend weight");
    run->add_option("--oracle-confidence", oracle_confidence, "retrieval: judge confidence");
    run->add_option("--corpus", corpus_path, "retrieval: passages file (JSONL)");
    run->add_option("--questions", questions_path, "retrieval: questions file (JSONL)");
    run->add_option("--synth", counts_csv, "retrieval: synthesize easy,medium,hard");
    run->add_option("--estimator", estimator_address, "external estimator host:port");
    run->add_option("--estimator-timeout", estimator_timeout, "external estimator timeout (ms)");
    run->add_option("--out-dir", out_dir, "trace output directory ('' to skip)");
    run->add_option("--format", format, "markdown or csv");
    run->add_option("--out", out_path, "table output file (default stdout)");

    auto* sweep_cmd = app.add_subcommand("sweep", "replay saved traces over a (tau, alpha) grid");
    sweep_cmd->add_option("--traces", traces_path, "trace file, or 'reference' for the shipped fixture")
        ->required();
    sweep_cmd->add_option("--tau-grid", tau_grid, "comma-separated taus");
    sweep_cmd->add_option("--alpha-grid", alpha_grid, "comma-separated alphas");
    sweep_cmd->add_option("--format", format, "markdown or csv");
    sweep_cmd->add_option("--out", out_path, "output file (default stdout)");

    auto* attr = app.add_subcommand("attribute", "classify failed episodes from a trace file");
    attr->add_option("--traces", traces_path, "trace file, or 'reference' for the shipped fixture")
        ->required();
    attr->add_option("--experiment", experiment, "calendar or retrieval")->required();
    attr->add_option("--tau", tau, "stop threshold used for signal-dominance checks");
    attr->add_option("--out", out_path, "output file (default stdout)");

    auto* report = app.add_subcommand("report", "aggregate a trace file into a result table");
    report->add_option("--traces", traces_path, "trace file")->required();
    report->add_option("--experiment", experiment, "calendar | graph | retrieval")->required();
    report->add_option("--format", format, "markdown or csv");
    report->add_option("--out", out_path, "output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen_scen->parsed()) return cmd_gen_scenarios(experiment, graph_seed, out_path);
        if (gen_graph->parsed()) return cmd_gen_graph(n_nodes, graph_seed, out_path);
        if (synth->parsed()) return cmd_synth_corpus(counts_csv, seed, out_dir);
        if (sweep_cmd->parsed()) return cmd_sweep(traces_path, tau_grid, alpha_grid, format, out_path);
        if (attr->parsed()) return cmd_attribute(traces_path, experiment, tau, out_path);
        if (report->parsed()) return cmd_report(traces_path, experiment, format, out_path);

        // run
        decider::harness::ExperimentConfig config;
        if (!config_path.empty()) {
            config = decider::harness::load_config(config_path);
        } else {
            if (experiment.empty()) throw decider::config_error("run: experiment required");
            config.experiment = experiment;
            config.method = method;
            config.runs = runs;
            config.seed = seed;
            config.out_dir = output_dir(out_dir);
            config.params["drift_rate"] = drift_rate;
            config.params["noise_fn"] = noise_fn;
            config.params["noise_fp"] = noise_fp;
            config.params["tau"] = tau;
            config.params["alpha"] = alpha;
            config.params["oracle_confidence"] = oracle_confidence;
            config.params["graph_seed"] = static_cast<double>(graph_seed);
            if (budget > 0) config.params["budget"] = budget;
            if (!scenario_filter.empty()) config.paths["scenario"] = scenario_filter;
            if (!corpus_path.empty()) config.paths["corpus"] = corpus_path;
            if (!questions_path.empty()) config.paths["questions"] = questions_path;
            if (!estimator_address.empty()) {
                config.paths["estimator"] = estimator_address;
                config.params["estimator_timeout"] = estimator_timeout;
            }
            if (run->count("--synth")) {
                auto grid = parse_grid(counts_csv);
                if (grid.size() != 3) throw decider::config_error("--synth expects easy,medium,hard");
                config.params["easy"] = grid[0];
                config.params["medium"] = grid[1];
                config.params["hard"] = grid[2];
            }
            config = decider::harness::apply_defaults(std::move(config));
        }
        return cmd_run(std::move(config), format, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
