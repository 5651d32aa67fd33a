#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "decider/core/errors.hpp"
#include "decider/retrieval/corpus.hpp"

namespace decider::retrieval {

// Lowercase alphanumeric runs; everything else separates.
inline std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string current;
    for (unsigned char c : text) {
        if (std::isalnum(c)) {
            current += static_cast<char>(std::tolower(c));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

struct ScoredPassage {
    size_t index = 0;  // position in the corpus vector
    double score = 0.0;
};

// Okapi BM25 over an inverted index. Defaults k1=1.2, b=0.75. The IDF uses
// the smoothed log(1 + (N - df + 0.5) / (df + 0.5)) form, which keeps every
// term weight positive. Ranking is total: score descending, passage id
// ascending on ties.
class Bm25Index {
  public:
    Bm25Index(const std::vector<Passage>& corpus, double k1 = 1.2, double b = 0.75)
        : corpus_(&corpus), k1_(k1), b_(b) {
        if (corpus.empty()) throw config_error("Bm25Index: empty corpus");
        doc_len_.resize(corpus.size());
        double total_len = 0.0;
        for (size_t d = 0; d < corpus.size(); ++d) {
            auto tokens = tokenize(corpus[d].text);
            doc_len_[d] = static_cast<double>(tokens.size());
            total_len += doc_len_[d];
            std::unordered_map<std::string, int> tf;
            for (const auto& t : tokens) tf[t]++;
            for (const auto& [term, freq] : tf) {
                postings_[term].push_back({d, freq});
            }
        }
        avg_len_ = total_len / static_cast<double>(corpus.size());
    }

    double idf(const std::string& term) const {
        auto it = postings_.find(term);
        double df = it == postings_.end() ? 0.0 : static_cast<double>(it->second.size());
        double n = static_cast<double>(corpus_->size());
        return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
    }

    std::vector<double> scores(const std::string& query) const {
        std::vector<double> out(corpus_->size(), 0.0);
        auto qtokens = tokenize(query);
        // Duplicate query terms contribute once per occurrence.
        for (const auto& term : qtokens) {
            auto it = postings_.find(term);
            if (it == postings_.end()) continue;
            double w = idf(term);
            for (const auto& [doc, freq] : it->second) {
                double f = static_cast<double>(freq);
                double norm = k1_ * (1.0 - b_ + b_ * doc_len_[doc] / avg_len_);
                out[doc] += w * f * (k1_ + 1.0) / (f + norm);
            }
        }
        return out;
    }

    // Full ranking of the corpus for a query.
    std::vector<ScoredPassage> rank(const std::string& query) const {
        auto s = scores(query);
        std::vector<ScoredPassage> ranked(s.size());
        for (size_t i = 0; i < s.size(); ++i) ranked[i] = {i, s[i]};
        std::sort(ranked.begin(), ranked.end(), [&](const ScoredPassage& a, const ScoredPassage& b) {
            if (a.score != b.score) return a.score > b.score;
            return (*corpus_)[a.index].id < (*corpus_)[b.index].id;
        });
        return ranked;
    }

    std::vector<ScoredPassage> top_k(const std::string& query, size_t k) const {
        auto ranked = rank(query);
        if (ranked.size() > k) ranked.resize(k);
        return ranked;
    }

    const std::vector<Passage>& corpus() const { return *corpus_; }
    double k1() const { return k1_; }
    double b() const { return b_; }

  private:
    const std::vector<Passage>* corpus_;
    double k1_;
    double b_;
    double avg_len_ = 0.0;
    std::vector<double> doc_len_;
    std::unordered_map<std::string, std::vector<std::pair<size_t, int>>> postings_;
};

}  // namespace decider::retrieval
