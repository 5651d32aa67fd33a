#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "decider/core/errors.hpp"
#include "decider/core/json.hpp"

namespace decider::retrieval {

struct Passage {
    std::string id;
    std::string text;
    std::optional<std::string> source_question_id;
};

enum class Bucket { easy, medium, hard };

inline const char* to_string(Bucket b) {
    switch (b) {
        case Bucket::easy: return "easy";
        case Bucket::medium: return "medium";
        case Bucket::hard: return "hard";
    }
    return "hard";
}

inline Bucket bucket_from_string(const std::string& s) {
    if (s == "easy") return Bucket::easy;
    if (s == "medium") return Bucket::medium;
    if (s == "hard") return Bucket::hard;
    throw data_error("unknown bucket: " + s);
}

struct QuestionItem {
    std::string id;
    std::string question;
    std::string gold_answer;
    std::string annotated_passage_id;
    Bucket bucket = Bucket::hard;
};

inline std::string lowercase(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

inline bool contains_ci(const std::string& haystack, const std::string& needle) {
    if (needle.empty()) return true;
    return lowercase(haystack).find(lowercase(needle)) != std::string::npos;
}

// Ingestion format, line-delimited JSON:
//   passages:  {"id": ..., "text": ..., "question_id": ...?}
//   questions: {"id": ..., "question": ..., "gold_answer": ..., "annotated_passage_id": ...}
inline std::vector<Passage> read_passages(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open corpus file: " + path);
    std::vector<Passage> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        Passage p;
        p.id = j.at("id").get<std::string>();
        p.text = j.at("text").get<std::string>();
        if (j.contains("question_id") && !j.at("question_id").is_null()) {
            p.source_question_id = j.at("question_id").get<std::string>();
        }
        if (p.text.empty()) throw data_error("passage " + p.id + " has empty text");
        out.push_back(std::move(p));
    }
    return out;
}

inline std::vector<QuestionItem> read_questions(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open questions file: " + path);
    std::vector<QuestionItem> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        QuestionItem q;
        q.id = j.at("id").get<std::string>();
        q.question = j.at("question").get<std::string>();
        q.gold_answer = j.at("gold_answer").get<std::string>();
        q.annotated_passage_id = j.at("annotated_passage_id").get<std::string>();
        out.push_back(std::move(q));
    }
    return out;
}

inline void write_passages(const std::string& path, const std::vector<Passage>& passages) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot open corpus file for writing: " + path);
    for (const auto& p : passages) {
        json j;
        j["id"] = p.id;
        j["text"] = p.text;
        if (p.source_question_id) j["question_id"] = *p.source_question_id;
        out << j.dump() << "\n";
    }
}

inline void write_questions(const std::string& path, const std::vector<QuestionItem>& questions) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot open questions file for writing: " + path);
    for (const auto& q : questions) {
        json j;
        j["id"] = q.id;
        j["question"] = q.question;
        j["gold_answer"] = q.gold_answer;
        j["annotated_passage_id"] = q.annotated_passage_id;
        out << j.dump() << "\n";
    }
}

}  // namespace decider::retrieval
