#pragma once

#include <string>
#include <vector>

#include "decider/core/errors.hpp"
#include "decider/core/rng.hpp"
#include "decider/retrieval/bm25.hpp"
#include "decider/retrieval/corpus.hpp"
#include "decider/retrieval/states.hpp"

namespace decider::retrieval {

struct SynthCounts {
    int easy = 0;
    int medium = 0;
    int hard = 0;
};

struct SynthResult {
    std::vector<Passage> corpus;
    std::vector<QuestionItem> questions;
};

namespace detail {

// Each question owns a disjoint vocabulary (the trailing 'x' keeps numeric
// suffixes from being substrings of each other), so BM25 rank control is
// purely local: the annotated passage matches two question terms, while
// each distractor matches four of them twice and therefore outranks it.
// Easy questions get no distractors (rank 1), medium ones 3..8 (rank 4..9),
// hard ones 12 (rank 13, outside the k=9 horizon), and the gold string
// appears only in the annotated passage.
struct QuestionPlan {
    int index = 0;
    Bucket bucket = Bucket::easy;
    int distractors = 0;
};

inline std::string stem(const char* base, int index) {
    return std::string(base) + std::to_string(index) + "x";
}

inline std::string filler(int index, Rng& rng, int count) {
    std::string out;
    for (int j = 0; j < count; ++j) {
        out += " filler" + std::to_string(index) + "q" + std::to_string(rng.below(1000)) + "x";
    }
    return out;
}

inline void emit_question(const QuestionPlan& plan, Rng& rng, SynthResult& result) {
    int i = plan.index;
    std::string topic = stem("topic", i);
    std::string subject = stem("subject", i);
    std::string det = stem("detail", i);
    std::string fact = stem("fact", i);
    std::string gold = stem("answer", i);

    QuestionItem q;
    q.id = "q" + std::to_string(i);
    q.question = "what is " + fact + " about " + topic + " " + subject + " " + det;
    q.gold_answer = gold;
    q.annotated_passage_id = "p" + std::to_string(i) + "_gold";
    q.bucket = plan.bucket;
    result.questions.push_back(q);

    Passage annotated;
    annotated.id = q.annotated_passage_id;
    annotated.source_question_id = q.id;
    annotated.text = "the record for " + topic + " " + subject + " gives " + gold +
                     filler(i, rng, 4 + static_cast<int>(rng.below(6)));
    result.corpus.push_back(annotated);

    for (int d = 0; d < plan.distractors; ++d) {
        Passage p;
        p.id = "p" + std::to_string(i) + "_d" + std::to_string(d);
        p.text = topic + " " + subject + " " + det + " " + fact + " notes " + topic + " " +
                 subject + " " + det + " " + fact + filler(i, rng, static_cast<int>(rng.below(3)));
        result.corpus.push_back(p);
    }
}

}  // namespace detail

// Seeded benchmark generator standing in for a real annotated corpus; every
// question's bucket is verified post-hoc against assign_bucket, the same
// routine used on ingested data.
inline SynthResult synthesize_corpus(const SynthCounts& counts, uint64_t seed) {
    if (counts.easy < 0 || counts.medium < 0 || counts.hard < 0) {
        throw precondition_error("synthesize_corpus: counts must be >= 0");
    }
    std::vector<detail::QuestionPlan> plans;
    int index = 0;
    Rng plan_rng(seed);
    for (int i = 0; i < counts.easy; ++i) plans.push_back({index++, Bucket::easy, 0});
    for (int i = 0; i < counts.medium; ++i) {
        plans.push_back({index++, Bucket::medium, 3 + static_cast<int>(plan_rng.below(6))});
    }
    for (int i = 0; i < counts.hard; ++i) plans.push_back({index++, Bucket::hard, 12});

    const int max_attempts = 3;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        SynthResult result;
        Rng rng(seed + static_cast<uint64_t>(attempt) * 0x9E37ULL);
        for (const auto& plan : plans) detail::emit_question(plan, rng, result);
        if (result.corpus.empty()) return result;

        Bm25Index index_check(result.corpus);
        bool all_ok = true;
        for (auto& q : result.questions) {
            if (assign_bucket(q, index_check) != q.bucket) {
                all_ok = false;
                break;
            }
        }
        if (all_ok) return result;
    }
    throw synthesis_error("synthesize_corpus: bucket targets unreachable after bounded retries");
}

}  // namespace decider::retrieval
