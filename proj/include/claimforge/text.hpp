#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace claimforge {

// Word characters for tokenization/boundary purposes: ASCII alphanumerics plus
// any non-ASCII byte (so UTF-8 letters stay inside one token). Everything else
// separates tokens.
inline bool is_word_byte(unsigned char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

inline bool is_ascii_digit(unsigned char c) { return c >= '0' && c <= '9'; }

inline bool is_ascii_upper(unsigned char c) { return c >= 'A' && c <= 'Z'; }

inline bool is_ascii_space(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline char ascii_lower_char(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

inline std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = ascii_lower_char(c);
    return out;
}

inline std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && is_ascii_space(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && is_ascii_space(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

struct TokenSpan {
    size_t begin = 0;
    size_t end = 0;
};

// Byte spans of word tokens within `text`.
inline std::vector<TokenSpan> tokenize_spans(std::string_view text) {
    std::vector<TokenSpan> out;
    size_t i = 0, n = text.size();
    while (i < n) {
        while (i < n && !is_word_byte(static_cast<unsigned char>(text[i]))) ++i;
        if (i >= n) break;
        size_t b = i;
        while (i < n && is_word_byte(static_cast<unsigned char>(text[i]))) ++i;
        out.push_back({b, i});
    }
    return out;
}

// Lower-cased word tokens.
inline std::vector<std::string> tokenize_lower(std::string_view text) {
    std::vector<std::string> out;
    for (const auto& sp : tokenize_spans(text)) {
        out.push_back(ascii_lower(text.substr(sp.begin, sp.end - sp.begin)));
    }
    return out;
}

// Case-insensitive substring search with word-boundary checks on the pattern
// ends that are themselves word characters. This lets colon-suffixed patterns
// ("reasons to buy:") match literally while "entitle to" refuses to match
// inside "entitled to". `text` must already be lower-cased; `pattern` too.
inline bool contains_phrase(std::string_view lower_text, std::string_view lower_pattern) {
    if (lower_pattern.empty()) return false;
    const bool head_is_word = is_word_byte(static_cast<unsigned char>(lower_pattern.front()));
    const bool tail_is_word = is_word_byte(static_cast<unsigned char>(lower_pattern.back()));
    size_t pos = 0;
    while ((pos = lower_text.find(lower_pattern, pos)) != std::string_view::npos) {
        const bool left_ok =
            !head_is_word || pos == 0 ||
            !is_word_byte(static_cast<unsigned char>(lower_text[pos - 1]));
        const size_t after = pos + lower_pattern.size();
        const bool right_ok =
            !tail_is_word || after == lower_text.size() ||
            !is_word_byte(static_cast<unsigned char>(lower_text[after]));
        if (left_ok && right_ok) return true;
        ++pos;
    }
    return false;
}

// A set of lower-cased terms, possibly multi-word. Multi-word terms are
// matched as contiguous token sequences, so "cash-flow" and "cash flow" are
// the same term after tokenization.
class TermSet {
  public:
    TermSet() = default;

    // Returns false if the term normalizes to nothing (blank line).
    bool insert(std::string_view raw) {
        auto toks = tokenize_lower(raw);
        if (toks.empty()) return false;
        if (toks.size() == 1) {
            single_.insert(std::move(toks[0]));
        } else {
            auto& seqs = multi_[toks[0]];
            for (const auto& s : seqs) {
                if (s == toks) return true;  // duplicate
            }
            seqs.push_back(std::move(toks));
        }
        return true;
    }

    bool empty() const { return single_.empty() && multi_.empty(); }

    size_t size() const {
        size_t n = single_.size();
        for (const auto& [head, seqs] : multi_) n += seqs.size();
        return n;
    }

    bool contains_term(std::string_view term) const {
        auto toks = tokenize_lower(term);
        if (toks.empty()) return false;
        if (toks.size() == 1) return single_.count(toks[0]) > 0;
        auto it = multi_.find(toks[0]);
        if (it == multi_.end()) return false;
        for (const auto& s : it->second) {
            if (s == toks) return true;
        }
        return false;
    }

    // True iff any term occurs in the token sequence.
    bool matches(const std::vector<std::string>& tokens) const {
        return count_matches(tokens, /*stop_at_first=*/true) > 0;
    }

    // Number of term occurrences (used by the sentiment lexicon).
    size_t count_matches(const std::vector<std::string>& tokens, bool stop_at_first = false) const {
        size_t hits = 0;
        for (size_t i = 0; i < tokens.size(); ++i) {
            if (single_.count(tokens[i])) {
                ++hits;
                if (stop_at_first) return hits;
                continue;
            }
            auto it = multi_.find(tokens[i]);
            if (it == multi_.end()) continue;
            for (const auto& seq : it->second) {
                if (i + seq.size() > tokens.size()) continue;
                bool ok = true;
                for (size_t k = 1; k < seq.size(); ++k) {
                    if (tokens[i + k] != seq[k]) {
                        ok = false;
                        break;
                    }
                }
                if (ok) {
                    ++hits;
                    if (stop_at_first) return hits;
                    break;
                }
            }
        }
        return hits;
    }

  private:
    std::unordered_set<std::string> single_;
    std::unordered_map<std::string, std::vector<std::vector<std::string>>> multi_;
};

}  // namespace claimforge
