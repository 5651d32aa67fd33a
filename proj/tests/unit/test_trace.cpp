#include <doctest.h>

#include <sstream>

#include "decider/calendar/episode.hpp"
#include "decider/fixtures/reference_traces.hpp"
#include "decider/retrieval/sweep.hpp"
#include "decider/trace/attribution.hpp"
#include "decider/trace/replay.hpp"
#include "decider/trace/trace.hpp"

using namespace decider;

namespace {

TurnRecord simple_turn(int turn) {
    TurnRecord t;
    t.turn = turn;
    t.signals["p_suff"] = 0.5;
    t.action = make_action(ActionKind::clarify);
    return t;
}

// A three-round retrieval record with fixed component signals and flags.
EpisodeTrace retrieval_trace(std::array<double, 3> dense, std::array<double, 3> llm,
                             std::array<bool, 3> gold, double tau, double alpha) {
    fixtures::EpisodeBlueprint bp{"test", 1, gold,
                                  {{{dense[0], llm[0]}, {dense[1], llm[1]}, {dense[2], llm[2]}}}};
    return fixtures::blueprint_episode(bp, retrieval::Bucket::medium, 0, tau, alpha);
}

}  // namespace

TEST_CASE("append_turn enforces the turn sequence") {
    EpisodeTrace trace;
    trace = append_turn(std::move(trace), simple_turn(1));
    CHECK(trace.turns.size() == 1);
    CHECK_THROWS_AS(append_turn(trace, simple_turn(3)), sequencing_error);
    trace = append_turn(std::move(trace), simple_turn(2));
    CHECK(trace.turns.size() == 2);
}

TEST_CASE("episode traces round-trip through line-delimited JSON") {
    auto scenarios = calendar::generate_scenarios();
    std::vector<EpisodeTrace> traces;
    for (const auto& s : scenarios) {
        traces.push_back(calendar::run_calendar_episode(calendar::CalendarMethod::dc, s, 6, 9));
    }
    std::stringstream buffer;
    for (const auto& tr : traces) write_episode(buffer, tr);
    auto parsed = read_trace_stream(buffer);
    REQUIRE(parsed.size() == traces.size());
    for (size_t i = 0; i < traces.size(); ++i) {
        std::stringstream a, b;
        write_episode(a, traces[i]);
        write_episode(b, parsed[i]);
        CHECK(a.str() == b.str());
    }
}

TEST_CASE("decision record serialization keeps a stable field order") {
    DecisionContext ctx;
    ctx.set_signal(make_signal("p_suff", 0.25, SignalSource::oracle));
    DecisionRecord rec{ctx,
                       {make_action(ActionKind::execute), make_action(ActionKind::clarify)},
                       make_action(ActionKind::clarify),
                       "threshold",
                       {{"tau", "1.0"}}};
    std::string emitted = decision_record_to_json(rec).dump();
    CHECK(emitted.find("\"context\"") < emitted.find("\"offered\""));
    CHECK(emitted.find("\"offered\"") < emitted.find("\"chosen\""));
    CHECK(emitted.find("\"chosen\"") < emitted.find("\"rule_id\""));
    CHECK(decision_record_to_json(rec).dump() == emitted);
}

TEST_CASE("replay_threshold_controller") {
    SUBCASE("identity at the recorded operating point") {
        for (const auto& tr : fixtures::reference_sweep_traces()) {
            auto rr = replay_threshold_controller(tr, 0.8, 0.4);
            CHECK(rr.success == tr.success);
            CHECK(rr.rounds == static_cast<int>(tr.metrics.at("rounds")));
        }
    }
    SUBCASE("tau = 0 stops every episode at round 0") {
        for (const auto& tr : fixtures::reference_sweep_traces()) {
            CHECK(replay_threshold_controller(tr, 0.0, 0.4).rounds == 0);
        }
    }
    SUBCASE("reference fixture sweep row: alpha 0.4, tau 0.9") {
        auto traces = fixtures::reference_sweep_traces();
        auto rows = retrieval::sweep(traces, {0.9}, {0.4});
        CHECK(retrieval::find_row(rows, retrieval::Bucket::medium, 0.9, 0.4).success ==
              doctest::Approx(0.92));
        CHECK(retrieval::find_row(rows, retrieval::Bucket::easy, 0.9, 0.4).avg_rounds ==
              doctest::Approx(1.16));
    }
    SUBCASE("a threshold above every signal uses the full budget everywhere") {
        auto traces = fixtures::reference_sweep_traces();
        auto rows = retrieval::sweep(traces, {1.0}, {0.4});
        for (auto bucket :
             {retrieval::Bucket::easy, retrieval::Bucket::medium, retrieval::Bucket::hard}) {
            CHECK(retrieval::find_row(rows, bucket, 1.0, 0.4).avg_rounds == doctest::Approx(2.0));
        }
    }
    SUBCASE("missing per-round signals is an incomplete-trace error") {
        EpisodeTrace bare;
        bare = append_turn(std::move(bare), simple_turn(1));
        CHECK_THROWS_AS(replay_threshold_controller(bare, 0.5, 0.5), incomplete_trace_error);
    }
}

TEST_CASE("every failed fixture episode receives exactly one retrieval category") {
    int failures = 0;
    for (const auto& tr : fixtures::reference_sweep_traces()) {
        if (tr.success) continue;
        ++failures;
        auto label = attribute_retrieval_failure(tr, 0.8);
        CHECK((label.category == FailureCategory::early_stop_dense ||
               label.category == FailureCategory::early_stop_llm ||
               label.category == FailureCategory::early_stop_both ||
               label.category == FailureCategory::corpus_gap));
    }
    CHECK(failures == 47);  // 6 medium + 41 hard at the recorded operating point
}

TEST_CASE("attribute_retrieval_failure") {
    SUBCASE("both signals high at the stop round") {
        auto tr = retrieval_trace({0.9, 0.9, 0.9}, {0.9, 0.9, 0.9}, {false, true, true}, 0.8, 0.4);
        REQUIRE_FALSE(tr.success);
        CHECK(attribute_retrieval_failure(tr, 0.8).category == FailureCategory::early_stop_both);
    }
    SUBCASE("budget exhausted with the gold passage never present") {
        auto tr = retrieval_trace({0.2, 0.2, 0.2}, {0.1, 0.1, 0.1}, {false, false, false}, 0.8, 0.4);
        REQUIRE_FALSE(tr.success);
        CHECK(attribute_retrieval_failure(tr, 0.8).category == FailureCategory::corpus_gap);
    }
    SUBCASE("dense-only early stop") {
        auto tr = retrieval_trace({0.95, 0.95, 0.95}, {0.2, 0.9, 0.9}, {false, true, true}, 0.5, 0.5);
        REQUIRE_FALSE(tr.success);
        CHECK(attribute_retrieval_failure(tr, 0.5).category == FailureCategory::early_stop_dense);
    }
    SUBCASE("judge-only early stop") {
        auto tr = retrieval_trace({0.6, 0.6, 0.6}, {1.0, 0.9, 0.9}, {false, true, true}, 0.8, 0.4);
        REQUIRE_FALSE(tr.success);
        CHECK(attribute_retrieval_failure(tr, 0.8).category == FailureCategory::early_stop_llm);
    }
    SUBCASE("successful episodes are rejected") {
        auto tr = retrieval_trace({0.9, 0.9, 0.9}, {0.9, 0.9, 0.9}, {true, true, true}, 0.8, 0.4);
        REQUIRE(tr.success);
        CHECK_THROWS_AS(attribute_retrieval_failure(tr, 0.8), precondition_error);
    }
}

TEST_CASE("attribute_calendar_failure walks the diagnosis cascade") {
    auto scenarios = calendar::generate_scenarios();
    const auto& k1 = scenarios[1];  // k=1 absent
    REQUIRE(k1.k == 1);

    SUBCASE("drifting question generator") {
        calendar::CalendarOptions opt;
        opt.question_mode = calendar::QuestionMode::drifting;
        opt.drift_rate = 1.0;
        auto tr = calendar::run_calendar_episode(calendar::CalendarMethod::dc, k1, 6, 5, opt);
        REQUIRE_FALSE(tr.success);
        auto label = attribute_calendar_failure(tr, k1);
        CHECK(label.category == FailureCategory::question_generation);
        CHECK_FALSE(label.evidence.empty());
    }
    SUBCASE("a fully blind extractor lands on signal estimation") {
        calendar::CalendarOptions opt;
        opt.noise_fn = 1.0;  // every scan reports every field missing
        auto tr = calendar::run_calendar_episode(calendar::CalendarMethod::dc, k1, 6, 5, opt);
        REQUIRE_FALSE(tr.success);
        CHECK(attribute_calendar_failure(tr, k1).category == FailureCategory::signal_estimation);
    }
    SUBCASE("a field confirmed off a vague mention points at the extractor") {
        // The k=3 unresolvable query names attendees only vaguely; a report
        // marking them present disagrees with the conversation.
        const auto& k3u = scenarios[6];
        REQUIRE(k3u.vague_fields.count("attendees"));
        EpisodeTrace tr;
        tr.scenario_id = k3u.id;
        tr.method_id = "dc";
        tr.success = false;
        TurnRecord t;
        t.turn = 1;
        t.signals["p_suff"] = 0.25;
        t.flags["last_execute_failed"] = false;
        t.action = make_action(ActionKind::clarify);
        t.action.payload["targets"] = "date,duration_min,start_time";
        t.outcome.valid = true;
        json report;
        for (const auto& f : calendar::field_names()) report[f] = f == "attendees";
        t.outcome.observations["report"] = report;
        t.outcome.observations["missing"] =
            std::vector<std::string>{"date", "duration_min", "start_time"};
        t.outcome.observations["question_targets"] =
            std::vector<std::string>{"date", "duration_min", "start_time"};
        tr.turns.push_back(t);
        auto label = attribute_calendar_failure(tr, k3u);
        CHECK(label.category == FailureCategory::signal_estimation);
        REQUIRE_FALSE(label.evidence.empty());
        CHECK(std::get<1>(label.evidence[0]) == "attendees");
    }
    SUBCASE("consistent logs with an invalid output fall through to execution") {
        // Hand-built single-turn trace: report matches the conversation, the
        // policy agrees with execute, yet the final event is invalid.
        const auto& k0 = scenarios[0];
        EpisodeTrace tr;
        tr.scenario_id = k0.id;
        tr.method_id = "dc";
        tr.success = false;
        TurnRecord t;
        t.turn = 1;
        t.signals["p_suff"] = 1.0;
        t.flags["last_execute_failed"] = false;
        t.action = make_action(ActionKind::execute);
        t.outcome.valid = false;
        json report;
        for (const auto& f : calendar::field_names()) report[f] = true;
        t.outcome.observations["report"] = report;
        tr.turns.push_back(t);
        CHECK(attribute_calendar_failure(tr, k0).category == FailureCategory::execution);
    }
    SUBCASE("every failed trace gets exactly one category") {
        std::vector<calendar::CalendarOptions> faulty(2);
        faulty[0].question_mode = calendar::QuestionMode::drifting;
        faulty[0].drift_rate = 1.0;
        faulty[1].noise_fn = 1.0;
        int failures = 0;
        for (const auto& opt : faulty) {
            for (const auto& s : scenarios) {
                for (uint64_t seed = 0; seed < 4; ++seed) {
                    auto tr =
                        calendar::run_calendar_episode(calendar::CalendarMethod::dc, s, 6, seed, opt);
                    if (tr.success) continue;
                    ++failures;
                    auto label = attribute_calendar_failure(tr, s);
                    CHECK((label.category == FailureCategory::signal_estimation ||
                           label.category == FailureCategory::decision_policy ||
                           label.category == FailureCategory::question_generation ||
                           label.category == FailureCategory::execution));
                }
            }
        }
        CHECK(failures > 0);
    }
}
