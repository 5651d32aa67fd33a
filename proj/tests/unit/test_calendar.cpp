#include <doctest.h>

#include <algorithm>

#include "decider/calendar/components.hpp"
#include "decider/calendar/episode.hpp"
#include "decider/calendar/scenario.hpp"

using namespace decider;
using namespace decider::calendar;

TEST_CASE("generate_scenarios produces the eight canonical scenarios") {
    auto scenarios = generate_scenarios();
    REQUIRE(scenarios.size() == 8);

    CHECK(scenarios[0].initial_query ==
          "Schedule a meeting with Jack on 2026-02-17 at 11:30 for 30 minutes.");
    CHECK(scenarios.back().initial_query == "Schedule a meeting.");
    CHECK(scenarios[1].initial_query == "Schedule a meeting with Jack on 2026-02-17 at 11:30.");
    CHECK(scenarios[2].initial_query ==
          "Schedule a meeting with Jack on Jack's usual slot at 11:30.");
    CHECK(scenarios[4].initial_query == "Schedule a meeting with Jack at Jack's usual time.");
    CHECK(scenarios[6].initial_query == "Schedule a meeting with the usual team.");

    for (const auto& s : scenarios) {
        CHECK(static_cast<int>(s.withheld.size()) == s.k);
        bool no_type = s.k == 0 || s.k == 4;
        CHECK((s.ambiguity == Ambiguity::not_applicable) == no_type);
        // withheld fields follow the fixed omission order
        static const std::vector<std::string> order = {"duration_min", "date", "start_time",
                                                       "attendees"};
        for (size_t i = 0; i < s.withheld.size(); ++i) CHECK(s.withheld[i] == order[i]);
    }
}

TEST_CASE("oracle_extract confirms only explicit usable values and locks them") {
    auto scenarios = generate_scenarios();
    const auto& k1 = scenarios[1];
    Conversation conv = opening_conversation(k1);

    auto report = oracle_extract(conv, k1, empty_report());
    CHECK(report.p_suff() == doctest::Approx(0.75));
    CHECK(report.fields.at("date"));
    CHECK(report.fields.at("start_time"));
    CHECK(report.fields.at("attendees"));
    CHECK_FALSE(report.fields.at("duration_min"));

    conv.push_back(simulate_user({"duration_min"}, k1.private_facts));
    report = oracle_extract(conv, k1, report);
    CHECK(report.p_suff() == doctest::Approx(1.0));

    // A vague reference is not usable.
    const auto& k1u = scenarios[2];
    auto vague_report = oracle_extract(opening_conversation(k1u), k1u, empty_report());
    CHECK_FALSE(vague_report.fields.at("date"));
    CHECK(vague_report.p_suff() == doctest::Approx(0.5));

    // Lock: once confirmed, a field never regresses.
    ExtractorReport prior = empty_report();
    prior.fields["date"] = true;
    Conversation empty_conv;
    CHECK(oracle_extract(empty_conv, k1, prior).fields.at("date"));
}

TEST_CASE("dc_policy three-branch rule") {
    CHECK(dc_policy(1.0, std::nullopt, std::nullopt).kind == ActionKind::execute);
    CHECK(dc_policy(0.75, ActionKind::clarify, std::nullopt).kind == ActionKind::clarify);
    // no-blind-retry: a failed execute forces clarify even at p_suff = 1
    CHECK(dc_policy(1.0, ActionKind::execute, false).kind == ActionKind::clarify);
}

TEST_CASE("generate_question targets exactly the missing fields") {
    Rng rng(4);
    auto q = generate_question({"duration_min"}, QuestionMode::targeted, 0.0, rng);
    CHECK(q.targets == std::vector<std::string>{"duration_min"});
    CHECK(q.question.find("duration") != std::string::npos);

    auto all = generate_question({"date", "start_time", "duration_min", "attendees"},
                                 QuestionMode::targeted, 0.0, rng);
    CHECK(all.targets.size() == 4);

    CHECK_THROWS_AS(generate_question({}, QuestionMode::targeted, 0.0, rng), precondition_error);
}

TEST_CASE("drifting question generator swaps a missing target for a confirmed field") {
    Rng rng(9);
    for (int i = 0; i < 50; ++i) {
        auto q = generate_question({"duration_min"}, QuestionMode::drifting, 1.0, rng,
                                   {"date", "start_time", "attendees"});
        CHECK(std::find(q.targets.begin(), q.targets.end(), "duration_min") == q.targets.end());
        for (const auto& t : q.targets) {
            CHECK((t == "date" || t == "start_time" || t == "attendees"));
        }
    }
}

TEST_CASE("simulate_user answers exactly what was asked") {
    EventFields facts = base_facts();
    auto turn = simulate_user({"duration_min"}, facts);
    CHECK(turn.text.find("30 minutes") != std::string::npos);
    CHECK(turn.values.size() == 1);

    // The user knows the truth even when the query referenced it vaguely.
    auto date_turn = simulate_user({"date"}, facts);
    CHECK(date_turn.text.find("2026-02-17") != std::string::npos);

    CHECK(simulate_user({}, facts).values.empty());
}

TEST_CASE("execute_event assembles from confirmed values and validates") {
    auto scenarios = generate_scenarios();
    const auto& k0 = scenarios[0];
    Conversation conv = opening_conversation(k0);

    ExtractorReport all_true = empty_report();
    for (auto& [f, v] : all_true.fields) v = true;
    auto res = execute_event(all_true, conv, k0.private_facts);
    CHECK(res.valid);

    ExtractorReport missing_duration = all_true;
    missing_duration.fields["duration_min"] = false;
    res = execute_event(missing_duration, conv, k0.private_facts);
    CHECK_FALSE(res.valid);
    CHECK_FALSE(res.event.at("duration_min").has_value());

    // A vague string copied literally never validates.
    const auto& k3u = scenarios[6];
    Conversation vague_conv = opening_conversation(k3u);
    ExtractorReport bogus = empty_report();
    bogus.fields["attendees"] = true;
    res = execute_event(bogus, vague_conv, k3u.private_facts);
    REQUIRE(res.event.at("attendees").has_value());
    CHECK(*res.event.at("attendees") == "the usual team");
    CHECK_FALSE(res.valid);
}

TEST_CASE("run_calendar_episode endpoints") {
    auto scenarios = generate_scenarios();

    SUBCASE("dc at k=0 succeeds in one turn") {
        auto tr = run_calendar_episode(CalendarMethod::dc, scenarios[0], 6, 0);
        CHECK(tr.success);
        CHECK(tr.metrics.at("turns") == 1.0);
        CHECK(tr.turns[0].action.kind == ActionKind::execute);
    }
    SUBCASE("retry at k>=1 burns the whole budget") {
        for (size_t i = 1; i < scenarios.size(); ++i) {
            auto tr = run_calendar_episode(CalendarMethod::retry, scenarios[i], 6, 0);
            CHECK_FALSE(tr.success);
            CHECK(tr.metrics.at("turns") == 6.0);
            CHECK(tr.metrics.at("wasted") == 6.0);
        }
    }
    SUBCASE("dc at k=2 absent: one bundled clarification, then execute") {
        auto tr = run_calendar_episode(CalendarMethod::dc, scenarios[3], 6, 0);
        CHECK(tr.success);
        CHECK(tr.metrics.at("turns") == 2.0);
        CHECK(tr.metrics.at("wasted") == 0.0);
        CHECK(tr.metrics.at("clarifications") == 1.0);
    }
    SUBCASE("oracle completeness: 2 turns at every k>=1, 1 turn at k=0") {
        for (const auto& s : scenarios) {
            auto tr = run_calendar_episode(CalendarMethod::dc, s, 6, 3);
            CHECK(tr.success);
            CHECK(tr.metrics.at("turns") == (s.k == 0 ? 1.0 : 2.0));
        }
    }
}

TEST_CASE("calendar_metrics aggregates over runs") {
    auto scenarios = generate_scenarios();
    std::vector<EpisodeTrace> dc_runs;
    for (uint64_t seed = 0; seed < 10; ++seed) {
        dc_runs.push_back(run_calendar_episode(CalendarMethod::dc, scenarios[3], 6, seed));
    }
    auto agg = calendar_metrics(dc_runs);
    CHECK(agg.success_rate == doctest::Approx(1.0));
    CHECK(agg.avg_turns == doctest::Approx(2.0));
    CHECK(agg.first_action_optimality == doctest::Approx(1.0));

    std::vector<EpisodeTrace> retry_k1;
    for (uint64_t seed = 0; seed < 10; ++seed) {
        retry_k1.push_back(run_calendar_episode(CalendarMethod::retry, scenarios[1], 6, seed));
    }
    CHECK(calendar_metrics(retry_k1).first_action_optimality == doctest::Approx(0.0));

    std::vector<EpisodeTrace> dc_k0;
    for (uint64_t seed = 0; seed < 10; ++seed) {
        dc_k0.push_back(run_calendar_episode(CalendarMethod::dc, scenarios[0], 6, seed));
    }
    CHECK(calendar_metrics(dc_k0).first_action_optimality == doctest::Approx(1.0));

    CHECK_THROWS_AS(calendar_metrics({}), precondition_error);
}

TEST_CASE("p_suff never decreases within an episode (lock monotonicity)") {
    auto scenarios = generate_scenarios();
    CalendarOptions noisy;
    noisy.noise_fn = 0.5;
    for (const auto& s : scenarios) {
        for (uint64_t seed = 0; seed < 20; ++seed) {
            auto tr = run_calendar_episode(CalendarMethod::dc, s, 6, seed, noisy);
            double prev = 0.0;
            for (const auto& t : tr.turns) {
                CHECK(t.signals.at("p_suff") >= prev - 1e-12);
                prev = t.signals.at("p_suff");
            }
        }
    }
}

TEST_CASE("false negatives alone never produce an invalid final event") {
    auto scenarios = generate_scenarios();
    for (const auto& s : scenarios) {
        for (double fn : {0.3, 0.7, 0.95}) {
            CalendarOptions opt;
            opt.noise_fn = fn;
            for (uint64_t seed = 0; seed < 10; ++seed) {
                auto tr = run_calendar_episode(CalendarMethod::dc, s, 6, seed, opt);
                for (const auto& t : tr.turns) {
                    if (t.action.kind == ActionKind::execute) CHECK(t.outcome.valid);
                }
            }
        }
    }
}
