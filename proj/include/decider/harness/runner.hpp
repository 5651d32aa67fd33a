#pragma once

#include <filesystem>
#include <functional>
#include <future>
#include <string>
#include <thread>
#include <vector>

#include "decider/calendar/episode.hpp"
#include "decider/fixtures/reference_traces.hpp"
#include "decider/graph/episode.hpp"
#include "decider/graph/scenarios.hpp"
#include "decider/harness/config.hpp"
#include "decider/harness/report.hpp"
#include "decider/retrieval/episode.hpp"
#include "decider/retrieval/sweep.hpp"
#include "decider/retrieval/synth.hpp"
#include "decider/signals/external.hpp"
#include "decider/trace/trace.hpp"

namespace decider::harness {

struct ExperimentResult {
    std::vector<EpisodeTrace> traces;
    ReportTable table;
};

namespace detail {

// Episodes are embarrassingly parallel; results land at their job index, so
// output ordering never depends on scheduling.
inline std::vector<EpisodeTrace> parallel_episodes(
    size_t n, const std::function<EpisodeTrace(size_t)>& job) {
    std::vector<EpisodeTrace> out(n);
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    if (workers == 1 || n < 4) {
        for (size_t i = 0; i < n; ++i) out[i] = job(i);
        return out;
    }
    std::vector<std::future<void>> futures;
    size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        size_t lo = w * chunk;
        size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        futures.push_back(std::async(std::launch::async, [&, lo, hi]() {
            for (size_t i = lo; i < hi; ++i) out[i] = job(i);
        }));
    }
    for (auto& f : futures) f.get();
    return out;
}

inline std::string ambiguity_label(const calendar::CalendarScenario& s) {
    std::string label = "k=" + std::to_string(s.k);
    if (s.ambiguity != calendar::Ambiguity::not_applicable) {
        label += std::string(" ") + to_string(s.ambiguity);
    }
    return label;
}

}  // namespace detail

inline ExperimentResult run_calendar_experiment(const ExperimentConfig& config) {
    auto scenarios = calendar::generate_scenarios();
    calendar::CalendarMethod method =
        config.method == "retry" ? calendar::CalendarMethod::retry : calendar::CalendarMethod::dc;
    calendar::CalendarOptions options;
    options.drift_rate = config.param("drift_rate", 0.0);
    options.question_mode = options.drift_rate > 0.0 ? calendar::QuestionMode::drifting
                                                     : calendar::QuestionMode::targeted;
    options.noise_fn = config.param("noise_fn", 0.0);
    options.noise_fp = config.param("noise_fp", 0.0);
    int budget = static_cast<int>(config.param("budget", 6));
    size_t runs = static_cast<size_t>(config.runs);

    size_t total = scenarios.size() * runs;
    auto traces = detail::parallel_episodes(total, [&](size_t i) {
        const auto& scenario = scenarios[i / runs];
        uint64_t seed = config.seed + i % runs;  // per-run seed = base + run index
        return calendar::run_calendar_episode(method, scenario, budget, seed, options);
    });

    ExperimentResult result;
    result.traces = traces;
    result.table.caption = "calendar " + config.method + " (N=" + std::to_string(config.runs) + ")";
    result.table.columns = {"Scenario", "Succ.", "1st", "Wasted", "Clarif.", "Turns"};
    for (size_t s = 0; s < scenarios.size(); ++s) {
        std::vector<EpisodeTrace> slice(traces.begin() + static_cast<long>(s * runs),
                                        traces.begin() + static_cast<long>((s + 1) * runs));
        auto agg = calendar::calendar_metrics(slice);
        result.table.add_row({detail::ambiguity_label(scenarios[s]), fmt_pct(agg.success_rate),
                              fmt_pct(agg.first_action_optimality), fmt_rate(agg.wasted_executions),
                              fmt_rate(agg.clarifications), fmt_rate(agg.avg_turns)});
    }
    return result;
}

inline ExperimentResult run_graph_experiment(const ExperimentConfig& config) {
    uint64_t graph_seed = static_cast<uint64_t>(config.param("graph_seed",
                                                             static_cast<double>(graph::kDefaultGraphSeed)));
    graph::OrgGraph g = graph::generate_graph(static_cast<int>(config.param("n", 200)), graph_seed);
    auto scenarios = graph::build_default_scenarios(g);
    if (config.paths.count("scenario")) {
        std::erase_if(scenarios, [&](const graph::GraphScenario& s) {
            return s.id != config.paths.at("scenario");
        });
        if (scenarios.empty()) throw config_error("unknown graph scenario in config");
    }
    graph::GraphMethod method =
        config.method == "retry" ? graph::GraphMethod::retry : graph::GraphMethod::dc;
    size_t runs = static_cast<size_t>(config.runs);

    size_t total = scenarios.size() * runs;
    auto traces = detail::parallel_episodes(total, [&](size_t i) {
        const auto& scenario = scenarios[i / runs];
        return graph::run_graph_episode(method, scenario, g, config.seed + i % runs);
    });

    ExperimentResult result;
    result.traces = traces;
    result.table.caption = "graph " + config.method + " (N=" + std::to_string(config.runs) + ")";
    result.table.columns = {"Scenario", "Succ.", "Wasted", "Clarify", "Backtrack"};
    for (size_t s = 0; s < scenarios.size(); ++s) {
        std::vector<EpisodeTrace> slice(traces.begin() + static_cast<long>(s * runs),
                                        traces.begin() + static_cast<long>((s + 1) * runs));
        auto agg = graph::graph_metrics(slice);
        result.table.add_row({scenarios[s].id, fmt_pct(agg.success_rate),
                              fmt_rate(agg.wasted_traversals), fmt_rate(agg.clarify_count),
                              fmt_rate(agg.backtrack_count)});
    }
    return result;
}

inline ExperimentResult run_retrieval_experiment(const ExperimentConfig& config) {
    std::vector<retrieval::Passage> corpus;
    std::vector<retrieval::QuestionItem> questions;
    if (config.paths.count("corpus")) {
        corpus = retrieval::read_passages(config.paths.at("corpus"));
        if (!config.paths.count("questions")) {
            throw config_error("config field params.questions required with params.corpus");
        }
        questions = retrieval::read_questions(config.paths.at("questions"));
    } else {
        retrieval::SynthCounts counts{static_cast<int>(config.param("easy", 50)),
                                      static_cast<int>(config.param("medium", 50)),
                                      static_cast<int>(config.param("hard", 50))};
        auto synth = retrieval::synthesize_corpus(counts, config.seed);
        corpus = std::move(synth.corpus);
        questions = std::move(synth.questions);
    }
    if (corpus.empty() || questions.empty()) {
        throw config_error("retrieval experiment needs a non-empty corpus and question set");
    }

    retrieval::ControllerConfig controller;
    controller.tau = config.param("tau", 0.8);
    controller.alpha = config.param("alpha", 0.4);
    controller.oracle_confidence = config.param("oracle_confidence", 1.0);
    retrieval::RetrievalMethod method = retrieval::RetrievalMethod::dc_composite;
    if (config.method == "dc_llm") method = retrieval::RetrievalMethod::dc_llm;
    if (config.method == "dc_dense") method = retrieval::RetrievalMethod::dc_dense;

    retrieval::Bm25Index index(corpus);
    retrieval::HashedEmbedder embedder;
    for (auto& q : questions) q.bucket = retrieval::assign_bucket(q, index);

    std::optional<ExternalEstimatorEndpoint> endpoint;
    if (config.paths.count("estimator")) {
        endpoint = ExternalEstimatorEndpoint{config.paths.at("estimator"),
                                             static_cast<int>(config.param("estimator_timeout", 1000)),
                                             "p_llm"};
    }

    auto traces = detail::parallel_episodes(questions.size(), [&](size_t i) {
        auto state = retrieval::precompute_state(questions[i], index, embedder, controller);
        if (endpoint) {
            // Replace the built-in judge with the wire-protocol estimator:
            // one query per round, fed the question and that round's passages.
            for (int r = 0; r <= controller.budget; ++r) {
                DecisionContext ctx;
                ctx.counters["round"] = r;
                ctx.counters["k"] = controller.k_schedule[static_cast<size_t>(r)];
                ctx.history.push_back(questions[i].question);
                for (size_t idx : state.round_passages[static_cast<size_t>(r)]) {
                    ctx.history.push_back(index.corpus()[idx].text);
                }
                state.llm[static_cast<size_t>(r)] = query_external_estimator(*endpoint, ctx).value;
            }
        }
        return retrieval::run_retrieval_episode(method, state, controller);
    });

    ExperimentResult result;
    result.traces = traces;
    result.table.caption = "retrieval " + config.method;
    result.table.columns = {"Bucket", "Succ.", "RR"};
    for (auto bucket : {retrieval::Bucket::easy, retrieval::Bucket::medium, retrieval::Bucket::hard}) {
        std::vector<EpisodeTrace> slice;
        for (const auto& tr : traces) {
            if (retrieval::trace_bucket(tr) == bucket) slice.push_back(tr);
        }
        if (slice.empty()) continue;
        auto agg = retrieval::retrieval_metrics(slice);
        result.table.add_row({retrieval::to_string(bucket), fmt_pct(agg.success_rate),
                              fmt_rate(agg.avg_rounds)});
    }
    return result;
}

// Dispatch plus optional trace emission. Per-run seeds are base_seed +
// run_index, so results depend only on the config, never on scheduling.
inline ExperimentResult run_experiment(const ExperimentConfig& config) {
    validate(config);
    ExperimentResult result;
    if (config.experiment == "calendar") {
        result = run_calendar_experiment(config);
    } else if (config.experiment == "graph") {
        result = run_graph_experiment(config);
    } else {
        result = run_retrieval_experiment(config);
    }
    if (!config.out_dir.empty()) {
        std::filesystem::create_directories(config.out_dir);
        std::string path =
            config.out_dir + "/" + config.experiment + "_" + config.method + "_traces.jsonl";
        write_trace_file(path, result.traces);
    }
    return result;
}

}  // namespace decider::harness
