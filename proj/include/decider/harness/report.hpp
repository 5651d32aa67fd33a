#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "decider/core/errors.hpp"

namespace decider::harness {

enum class ReportFormat { markdown, csv };

struct ReportTable {
    std::string caption;
    std::vector<std::string> columns;                 // first column is the row label
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> cells) {
        if (cells.size() != columns.size()) {
            throw data_error("report row arity " + std::to_string(cells.size()) +
                             " != column arity " + std::to_string(columns.size()));
        }
        rows.push_back(std::move(cells));
    }
};

// Integer percentages, same as the result tables this mirrors.
inline std::string fmt_pct(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.0f%%", fraction * 100.0);
    return buf;
}

// Rates and averages use two decimals.
inline std::string fmt_rate(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", value);
    return buf;
}

inline std::string csv_escape(const std::string& cell) {
    bool needs_quotes = cell.find_first_of(",\"\n") != std::string::npos;
    if (!needs_quotes) return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

// Byte-stable for a fixed table: no locale formatting, fixed ordering.
inline std::string emit_report(const ReportTable& table, ReportFormat format) {
    std::string out;
    if (format == ReportFormat::csv) {
        for (size_t i = 0; i < table.columns.size(); ++i) {
            if (i > 0) out += ',';
            out += csv_escape(table.columns[i]);
        }
        out += '\n';
        for (const auto& row : table.rows) {
            for (size_t i = 0; i < row.size(); ++i) {
                if (i > 0) out += ',';
                out += csv_escape(row[i]);
            }
            out += '\n';
        }
        return out;
    }
    if (!table.caption.empty()) out += "### " + table.caption + "\n\n";
    out += "|";
    for (const auto& c : table.columns) out += " " + c + " |";
    out += "\n|";
    for (size_t i = 0; i < table.columns.size(); ++i) out += " --- |";
    out += "\n";
    for (const auto& row : table.rows) {
        out += "|";
        for (const auto& cell : row) out += " " + cell + " |";
        out += "\n";
    }
    return out;
}

}  // namespace decider::harness
