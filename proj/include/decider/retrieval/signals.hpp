#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "decider/core/errors.hpp"
#include "decider/core/rng.hpp"
#include "decider/core/signal.hpp"
#include "decider/retrieval/bm25.hpp"
#include "decider/retrieval/corpus.hpp"
#include "decider/signals/blend.hpp"

namespace decider::retrieval {

// Hashed bag-of-tokens embedding: 256 dimensions, term-frequency weights,
// all components non-negative, so cosine lands in [0,1] by construction.
class HashedEmbedder {
  public:
    static constexpr size_t kDim = 256;

    explicit HashedEmbedder(uint64_t seed = 0x5EEDED) : seed_(seed) {}

    std::array<double, kDim> embed(const std::string& text) const {
        std::array<double, kDim> v{};
        for (const auto& token : tokenize(text)) {
            uint64_t h = fnv1a64(token) ^ seed_;
            // One extra mix round so distinct tokens spread uniformly.
            h ^= h >> 33;
            h *= 0xff51afd7ed558ccdULL;
            h ^= h >> 33;
            v[h % kDim] += 1.0;
        }
        return v;
    }

    static double cosine(const std::array<double, kDim>& a, const std::array<double, kDim>& b) {
        double dot = 0.0, na = 0.0, nb = 0.0;
        for (size_t i = 0; i < kDim; ++i) {
            dot += a[i] * b[i];
            na += a[i] * a[i];
            nb += b[i] * b[i];
        }
        if (na == 0.0 || nb == 0.0) return 0.0;
        return dot / (std::sqrt(na) * std::sqrt(nb));
    }

  private:
    uint64_t seed_;
};

// Max cosine similarity between the question and any retrieved passage,
// normalized to [0,1]. The built-in embedder's cosine is already in [0,1];
// an external embedder would have to declare its own (lo, hi).
inline Signal dense_signal(const std::string& question, const std::vector<const Passage*>& passages,
                           const HashedEmbedder& embedder, double lo = 0.0, double hi = 1.0) {
    if (passages.empty()) throw precondition_error("dense_signal: no passages");
    auto q = embedder.embed(question);
    double best = 0.0;
    for (const Passage* p : passages) {
        best = std::max(best, HashedEmbedder::cosine(q, embedder.embed(p->text)));
    }
    Signal s;
    s.name = "p_dense";
    s.value = normalize_linear(best, lo, hi);
    s.source = SignalSource::lexical;
    return s;
}

// Deterministic stand-in for an answerability judge: answerable iff the gold
// answer string appears (case-insensitive) in some passage; the signal is
// conf when answerable and 1-conf otherwise. An imperfect judge is modeled
// by lowering conf, not by shipping a model.
inline Signal oracle_judge_signal(const QuestionItem& question,
                                  const std::vector<const Passage*>& passages,
                                  double confidence = 1.0) {
    if (passages.empty()) throw precondition_error("oracle_judge_signal: no passages");
    if (confidence < 0.0 || confidence > 1.0) {
        throw config_error("oracle_judge_signal: confidence out of [0,1]");
    }
    bool answerable = false;
    for (const Passage* p : passages) {
        if (contains_ci(p->text, question.gold_answer)) answerable = true;
    }
    Signal s;
    s.name = "p_llm";
    s.value = answerable ? confidence : 1.0 - confidence;
    s.source = SignalSource::oracle;
    return s;
}

}  // namespace decider::retrieval
