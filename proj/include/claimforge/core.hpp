#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "claimforge/date.hpp"
#include "claimforge/error.hpp"

namespace claimforge {

enum class SourceKind { analyst_report, earnings_call };

inline std::string to_string(SourceKind k) {
    return k == SourceKind::analyst_report ? "analyst_report" : "earnings_call";
}

inline SourceKind source_kind_from_string(const std::string& s) {
    if (s == "analyst_report") return SourceKind::analyst_report;
    if (s == "earnings_call") return SourceKind::earnings_call;
    throw DataError("unknown source_kind '" + s + "'");
}

// Final binary decision for a numeric financial sentence.
enum class ClaimLabel { in_claim, out_of_claim };

inline std::string to_string(ClaimLabel c) {
    return c == ClaimLabel::in_claim ? "INCLAIM" : "OUTOFCLAIM";
}

inline ClaimLabel claim_from_string(const std::string& s) {
    if (s == "INCLAIM") return ClaimLabel::in_claim;
    if (s == "OUTOFCLAIM") return ClaimLabel::out_of_claim;
    throw DataError("unknown claim label '" + s + "' (expected INCLAIM or OUTOFCLAIM)");
}

enum class SentimentLabel { positive, negative, neutral };

inline std::string to_string(SentimentLabel s) {
    switch (s) {
        case SentimentLabel::positive: return "POSITIVE";
        case SentimentLabel::negative: return "NEGATIVE";
        default: return "NEUTRAL";
    }
}

inline SentimentLabel sentiment_from_string(const std::string& s) {
    if (s == "POSITIVE") return SentimentLabel::positive;
    if (s == "NEGATIVE") return SentimentLabel::negative;
    if (s == "NEUTRAL") return SentimentLabel::neutral;
    throw DataError("unknown sentiment label '" + s + "'");
}

// A source text with its market identity. `sector` is a 1..12 GSECTOR-style
// code; unset means unknown.
struct Document {
    std::string doc_id;
    SourceKind source_kind = SourceKind::earnings_call;
    std::string ticker;
    std::optional<int> sector;
    Date period;  // event/report date
    std::string raw_text;

    bool operator==(const Document&) const = default;
};

// One segmented sentence. `begin`/`end` slice Document::raw_text exactly to
// `text`; `index` is the 0-based ordinal within the document.
struct Sentence {
    std::string doc_id;
    int index = 0;
    std::string text;
    size_t begin = 0;
    size_t end = 0;
    bool is_numeric = false;
    bool is_financial = false;
    std::optional<ClaimLabel> claim;
    std::optional<SentimentLabel> sentiment;
};

struct GoldLabel {
    std::string doc_id;
    int sentence_index = 0;
    ClaimLabel label = ClaimLabel::out_of_claim;
};

struct MarketBar {
    std::string ticker;
    Date date;
    double close = 0.0;  // > 0
};

struct EpsRecord {
    std::string ticker;
    Date period_end;
    double actual_eps = 0.0;
    double median_forecast_eps = 0.0;
    double quarter_end_price = 0.0;  // > 0
};

// Corpus-level counters for the two-tier filter.
struct FilterStats {
    uint64_t total_sentences = 0;
    uint64_t numeric_sentences = 0;
    uint64_t numeric_financial_sentences = 0;
    double retention_numeric = 0.0;
    double retention_financial = 0.0;

    static FilterStats make(uint64_t total, uint64_t numeric, uint64_t numeric_financial) {
        FilterStats s;
        s.total_sentences = total;
        s.numeric_sentences = numeric;
        s.numeric_financial_sentences = numeric_financial;
        s.retention_numeric = total ? static_cast<double>(numeric) / total : 0.0;
        s.retention_financial = total ? static_cast<double>(numeric_financial) / total : 0.0;
        return s;
    }

    FilterStats& operator+=(const FilterStats& o) {
        *this = make(total_sentences + o.total_sentences,
                     numeric_sentences + o.numeric_sentences,
                     numeric_financial_sentences + o.numeric_financial_sentences);
        return *this;
    }
};

}  // namespace claimforge
