#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "decider/core/action.hpp"
#include "decider/core/errors.hpp"
#include "decider/retrieval/bm25.hpp"
#include "decider/retrieval/corpus.hpp"
#include "decider/retrieval/signals.hpp"

namespace decider::retrieval {

// stop-or-expand controller: stop once the signal meets tau, forced stop at
// the expansion budget. k schedule 3 -> 6 -> 9.
struct ControllerConfig {
    double tau = 0.8;
    double alpha = 0.4;
    int budget = 2;  // expansion rounds
    std::array<int, 3> k_schedule = {3, 6, 9};
    double oracle_confidence = 1.0;

    void validate() const {
        if (tau < 0.0 || tau > 1.0) throw config_error("tau out of [0,1]");
        if (alpha < 0.0 || alpha > 1.0) throw config_error("alpha out of [0,1]");
    }
};

// Cumulative top-k passage sets per round, plus the per-round gold flags and
// signal values. Built once per question against the fixed BM25 ranking and
// shared across every method, so all controllers see identical evidence.
struct RetrievalState {
    std::string question_id;
    Bucket bucket = Bucket::hard;
    std::array<std::vector<size_t>, 3> round_passages;  // corpus indices, nested by construction
    std::array<bool, 3> gold_present{};
    std::array<double, 3> dense{};
    std::array<double, 3> llm{};
};

// Difficulty class of a question: the BM25 rank of its annotated passage
// itself (1-based), independent of any signal. <=3 easy, <=9 medium,
// otherwise hard.
inline Bucket assign_bucket(const QuestionItem& question, const Bm25Index& index) {
    auto ranked = index.rank(question.question);
    for (size_t pos = 0; pos < ranked.size(); ++pos) {
        if (index.corpus()[ranked[pos].index].id == question.annotated_passage_id) {
            size_t rank = pos + 1;
            if (rank <= 3) return Bucket::easy;
            if (rank <= 9) return Bucket::medium;
            return Bucket::hard;
        }
    }
    throw data_error("assign_bucket: annotated passage " + question.annotated_passage_id +
                     " not in corpus");
}

inline RetrievalState precompute_state(const QuestionItem& question, const Bm25Index& index,
                                       const HashedEmbedder& embedder,
                                       const ControllerConfig& config = {}) {
    RetrievalState st;
    st.question_id = question.id;
    st.bucket = assign_bucket(question, index);
    auto ranked = index.top_k(question.question, 9);
    for (int r = 0; r < 3; ++r) {
        size_t k = static_cast<size_t>(config.k_schedule[static_cast<size_t>(r)]);
        for (size_t pos = 0; pos < std::min(k, ranked.size()); ++pos) {
            st.round_passages[static_cast<size_t>(r)].push_back(ranked[pos].index);
        }
        std::vector<const Passage*> view;
        for (size_t idx : st.round_passages[static_cast<size_t>(r)]) {
            view.push_back(&index.corpus()[idx]);
        }
        st.gold_present[static_cast<size_t>(r)] = false;
        for (const Passage* p : view) {
            if (contains_ci(p->text, question.gold_answer)) {
                st.gold_present[static_cast<size_t>(r)] = true;
            }
        }
        st.dense[static_cast<size_t>(r)] = dense_signal(question.question, view, embedder).value;
        st.llm[static_cast<size_t>(r)] =
            oracle_judge_signal(question, view, config.oracle_confidence).value;
    }
    return st;
}

// stop if p_hat >= tau; forced stop at the budget; otherwise expand to the
// next k.
inline Action controller_step(double p_hat, int round, const ControllerConfig& config) {
    if (round < 0 || round > config.budget) {
        throw precondition_error("controller_step: round out of range");
    }
    if (p_hat >= config.tau || round == config.budget) return make_action(ActionKind::stop);
    Action a = make_action(ActionKind::expand);
    a.payload["k"] = std::to_string(config.k_schedule[static_cast<size_t>(round) + 1]);
    return a;
}

}  // namespace decider::retrieval
