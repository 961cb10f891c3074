#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "claimforge/core.hpp"
#include "claimforge/text.hpp"

namespace claimforge {

// Positive/negative word lists backing the built-in sentiment provider. The
// paper-grade transformer model is external; anything honoring the ternary
// contract can be merged in from file instead.
struct SentimentLexicon {
    TermSet positive;
    TermSet negative;

    void validate() const {
        if (positive.empty() || negative.empty()) {
            throw DataError("sentiment lexicon: positive and negative term sets must be non-empty");
        }
    }
};

inline SentimentLabel classify_lexicon(std::string_view text, const SentimentLexicon& lexicon) {
    auto tokens = tokenize_lower(text);
    const size_t pos = lexicon.positive.count_matches(tokens);
    const size_t neg = lexicon.negative.count_matches(tokens);
    if (pos > neg) return SentimentLabel::positive;
    if (neg > pos) return SentimentLabel::negative;
    return SentimentLabel::neutral;
}

struct SentimentRecord {
    std::string doc_id;
    int sentence_index = 0;
    SentimentLabel label = SentimentLabel::neutral;
};

// Applies externally computed sentence sentiment. Every label must reference
// a known sentence; without `default_neutral`, every sentence must be
// covered.
inline void merge_external_sentiment(std::vector<Sentence>& sentences,
                                     std::span<const SentimentRecord> labels,
                                     bool default_neutral) {
    std::map<std::pair<std::string, int>, size_t> index;
    for (size_t i = 0; i < sentences.size(); ++i) {
        index[{sentences[i].doc_id, sentences[i].index}] = i;
    }
    std::vector<bool> covered(sentences.size(), false);
    for (const auto& rec : labels) {
        auto it = index.find({rec.doc_id, rec.sentence_index});
        if (it == index.end()) {
            throw DataError("sentiment label for unknown sentence (" + rec.doc_id + ", " +
                            std::to_string(rec.sentence_index) + ")");
        }
        sentences[it->second].sentiment = rec.label;
        covered[it->second] = true;
    }
    for (size_t i = 0; i < sentences.size(); ++i) {
        if (covered[i]) continue;
        if (!default_neutral) {
            throw DataError("no sentiment label for sentence (" + sentences[i].doc_id + ", " +
                            std::to_string(sentences[i].index) +
                            ") and --default-neutral not set");
        }
        sentences[i].sentiment = SentimentLabel::neutral;
    }
}

// ---------------------------------------------------------------------------
// Optimism
// ---------------------------------------------------------------------------

// Document- or quarter-level optimism aggregate:
//   optimism = 100 * (pos_in_claim - neg_in_claim) / total_sentences
// where total_sentences counts every segmented sentence, not just the
// filtered ones.
struct OptimismRecord {
    std::string key;  // doc_id or "TICKER:YYYYQn"
    uint64_t pos_in_claim = 0;
    uint64_t neg_in_claim = 0;
    uint64_t total_sentences = 0;
    double optimism = 0.0;

    static OptimismRecord make(std::string key, uint64_t pos, uint64_t neg, uint64_t total) {
        if (total == 0) throw DataError("optimism '" + key + "': zero total sentences");
        if (pos + neg > total) {
            throw DataError("optimism '" + key + "': sentiment counts exceed sentence count");
        }
        OptimismRecord r;
        r.key = std::move(key);
        r.pos_in_claim = pos;
        r.neg_in_claim = neg;
        r.total_sentences = total;
        r.optimism = 100.0 *
                     (static_cast<double>(pos) - static_cast<double>(neg)) /
                     static_cast<double>(total);
        return r;
    }
};

enum class SentenceSubset { unfiltered, numeric, numeric_financial, in_claim };

inline std::string to_string(SentenceSubset s) {
    switch (s) {
        case SentenceSubset::unfiltered: return "unfiltered";
        case SentenceSubset::numeric: return "numeric";
        case SentenceSubset::numeric_financial: return "numeric_financial";
        default: return "in_claim";
    }
}

inline SentenceSubset subset_from_string(const std::string& s) {
    if (s == "unfiltered") return SentenceSubset::unfiltered;
    if (s == "numeric") return SentenceSubset::numeric;
    if (s == "numeric_financial") return SentenceSubset::numeric_financial;
    if (s == "in_claim") return SentenceSubset::in_claim;
    throw DataError("unknown sentence subset '" + s + "'");
}

inline bool in_subset(const Sentence& s, SentenceSubset subset) {
    switch (subset) {
        case SentenceSubset::unfiltered: return true;
        case SentenceSubset::numeric: return s.is_numeric;
        case SentenceSubset::numeric_financial: return s.is_financial;
        case SentenceSubset::in_claim:
            return s.claim.has_value() && *s.claim == ClaimLabel::in_claim;
    }
    return false;
}

// Optimism with the numerator restricted to `subset`; the denominator is
// always the full sentence count. `in_claim` is the canonical measure.
inline OptimismRecord subset_optimism(std::string key, std::span<const Sentence> document_sentences,
                                      SentenceSubset subset) {
    uint64_t pos = 0, neg = 0;
    for (const auto& s : document_sentences) {
        if (!in_subset(s, subset) || !s.sentiment.has_value()) continue;
        if (*s.sentiment == SentimentLabel::positive) ++pos;
        if (*s.sentiment == SentimentLabel::negative) ++neg;
    }
    return OptimismRecord::make(std::move(key), pos, neg, document_sentences.size());
}

inline OptimismRecord compute_optimism(std::string key,
                                       std::span<const Sentence> document_sentences) {
    return subset_optimism(std::move(key), document_sentences, SentenceSubset::in_claim);
}

// Firm-quarter key plus the per-document aggregate it came from.
struct DocOptimism {
    std::string ticker;
    Quarter quarter;
    OptimismRecord record;
};

// Pools counts across a (ticker, quarter) group and recomputes optimism from
// the pooled counts (sentences and claims are aggregated, not averaged).
inline OptimismRecord aggregate_quarter(std::span<const DocOptimism> group) {
    if (group.empty()) throw DataError("aggregate_quarter: empty group");
    const std::string key = group.front().ticker + ":" + group.front().quarter.label();
    uint64_t pos = 0, neg = 0, total = 0;
    for (const auto& g : group) {
        if (g.ticker != group.front().ticker || g.quarter != group.front().quarter) {
            throw DataError("aggregate_quarter: mixed (ticker, quarter) group under " + key);
        }
        pos += g.record.pos_in_claim;
        neg += g.record.neg_in_claim;
        total += g.record.total_sentences;
    }
    return OptimismRecord::make(key, pos, neg, total);
}

// Groups per-document records by (ticker, quarter) and pools each group.
// Output is sorted by key.
inline std::vector<OptimismRecord> aggregate_quarters(std::span<const DocOptimism> records) {
    std::map<std::pair<std::string, Quarter>, std::vector<DocOptimism>> groups;
    for (const auto& r : records) groups[{r.ticker, r.quarter}].push_back(r);
    std::vector<OptimismRecord> out;
    out.reserve(groups.size());
    for (const auto& [key, group] : groups) out.push_back(aggregate_quarter(group));
    return out;
}

}  // namespace claimforge
