#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "claimforge/core.hpp"
#include "claimforge/text.hpp"

namespace claimforge {

// ---------------------------------------------------------------------------
// Sentence segmentation
// ---------------------------------------------------------------------------
//
// Boundary rule: a terminator run (. ! ?) optionally followed by closing
// quotes/brackets, then whitespace, then a capital letter, digit, or opening
// quote/bracket. Newlines are hard boundaries (transcripts are paragraph
// structured and frequently lower-cased, where the capital-letter cue never
// fires). Guards keep abbreviations, URLs/domains and decimal figures intact:
// a '.' with no whitespace after it is never a boundary, and a '.' closing a
// known abbreviation token is skipped even before a capital.
class Segmenter {
  public:
    Segmenter() : abbreviations_(builtin_abbreviations()) {}

    explicit Segmenter(const std::vector<std::string>& extra_abbreviations) : Segmenter() {
        for (const auto& a : extra_abbreviations) {
            std::string t = ascii_lower(trim(a));
            if (t.empty()) continue;
            if (t.back() != '.') t.push_back('.');
            abbreviations_.insert(std::move(t));
        }
    }

    struct Span {
        size_t begin;
        size_t end;
    };

    std::vector<Span> segment_spans(std::string_view text) const {
        std::vector<Span> out;
        const size_t n = text.size();
        size_t start = skip_space(text, 0);
        size_t i = start;
        while (i < n) {
            const char c = text[i];
            if (c == '\n') {
                flush(text, start, i, out);
                start = skip_space(text, i + 1);
                i = start;
                continue;
            }
            if (c == '.' || c == '!' || c == '?') {
                size_t term_end = i + 1;
                while (term_end < n && is_terminator(text[term_end])) ++term_end;
                while (term_end < n && is_closing(text[term_end])) ++term_end;
                if (term_end < n && is_ascii_space(static_cast<unsigned char>(text[term_end])) &&
                    next_starts_sentence(text, term_end) &&
                    !(c == '.' && is_abbreviation(text, start, i))) {
                    flush(text, start, term_end, out);
                    start = skip_space(text, term_end);
                    i = start;
                    continue;
                }
                i = term_end;
                continue;
            }
            ++i;
        }
        flush(text, start, n, out);
        return out;
    }

    // Segments a document into Sentence records (flags unset).
    std::vector<Sentence> segment(const Document& doc) const {
        std::vector<Sentence> out;
        auto spans = segment_spans(doc.raw_text);
        out.reserve(spans.size());
        int idx = 0;
        for (const auto& sp : spans) {
            Sentence s;
            s.doc_id = doc.doc_id;
            s.index = idx++;
            s.begin = sp.begin;
            s.end = sp.end;
            s.text = doc.raw_text.substr(sp.begin, sp.end - sp.begin);
            out.push_back(std::move(s));
        }
        return out;
    }

    std::vector<std::string> segment_text(std::string_view text) const {
        std::vector<std::string> out;
        for (const auto& sp : segment_spans(text)) {
            out.emplace_back(text.substr(sp.begin, sp.end - sp.begin));
        }
        return out;
    }

    static const std::unordered_set<std::string>& builtin_abbreviations() {
        static const std::unordered_set<std::string> abbr = {
            "mr.",  "mrs.", "ms.",  "dr.",   "prof.", "inc.",  "corp.", "co.",   "ltd.",
            "llc.", "vs.",  "e.g.", "i.e.",  "al.",   "etc.",  "u.s.",  "u.k.",  "no.",
            "st.",  "jr.",  "sr.",  "q1.",   "q2.",   "q3.",   "q4.",   "fig.",  "est.",
            "approx.", "dept.", "jan.", "feb.", "mar.", "apr.", "jun.",  "jul.",  "aug.",
            "sep.", "sept.", "oct.", "nov.", "dec."};
        return abbr;
    }

  private:
    static bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

    static bool is_closing(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }

    static size_t skip_space(std::string_view text, size_t i) {
        while (i < text.size() && is_ascii_space(static_cast<unsigned char>(text[i]))) ++i;
        return i;
    }

    static bool next_starts_sentence(std::string_view text, size_t after_term) {
        size_t j = skip_space(text, after_term);
        if (j >= text.size()) return false;
        const unsigned char c = static_cast<unsigned char>(text[j]);
        return is_ascii_upper(c) || is_ascii_digit(c) || c == '"' || c == '\'' || c == '(' ||
               c == '[';
    }

    // The whitespace-delimited chunk ending at the '.' (leading punctuation
    // stripped), lower-cased, e.g. "(Inc." -> "inc.".
    bool is_abbreviation(std::string_view text, size_t sentence_start, size_t dot) const {
        size_t b = dot;
        while (b > sentence_start &&
               !is_ascii_space(static_cast<unsigned char>(text[b - 1]))) {
            --b;
        }
        while (b < dot && !is_word_byte(static_cast<unsigned char>(text[b]))) ++b;
        if (b >= dot) return false;
        std::string chunk = ascii_lower(text.substr(b, dot - b + 1));
        return abbreviations_.count(chunk) > 0;
    }

    static void flush(std::string_view text, size_t begin, size_t end,
                      std::vector<Span>& out) {
        while (begin < end && is_ascii_space(static_cast<unsigned char>(text[begin]))) ++begin;
        while (end > begin && is_ascii_space(static_cast<unsigned char>(text[end - 1]))) --end;
        if (begin < end) out.push_back({begin, end});
    }

    std::unordered_set<std::string> abbreviations_;
};

// ---------------------------------------------------------------------------
// Numeric / financial filters
// ---------------------------------------------------------------------------

inline const std::vector<std::string>& default_currency_symbols() {
    static const std::vector<std::string> syms = {"$", "€", "£", "¥"};
    return syms;
}

// True iff the text contains a digit group (commas/decimal point allowed)
// immediately preceded by a currency symbol or immediately followed by '%'.
// Adjacency is whitespace-free on the relevant side.
inline bool is_numeric_sentence(std::string_view text,
                                const std::vector<std::string>& currency_symbols =
                                    default_currency_symbols()) {
    const size_t n = text.size();
    size_t i = 0;
    while (i < n) {
        if (!is_ascii_digit(static_cast<unsigned char>(text[i]))) {
            ++i;
            continue;
        }
        const size_t b = i;
        while (i < n) {
            const unsigned char c = static_cast<unsigned char>(text[i]);
            if (is_ascii_digit(c)) {
                ++i;
            } else if ((c == ',' || c == '.') && i + 1 < n &&
                       is_ascii_digit(static_cast<unsigned char>(text[i + 1]))) {
                i += 2;
            } else {
                break;
            }
        }
        if (i < n && text[i] == '%') return true;
        for (const auto& sym : currency_symbols) {
            if (b >= sym.size() && text.substr(b - sym.size(), sym.size()) == sym) return true;
        }
    }
    return false;
}

inline bool is_financial_sentence(std::string_view text, const TermSet& terms) {
    return terms.matches(tokenize_lower(text));
}

// Two-tier filter over one document: flags every segmented sentence, returns
// only the numeric-financial ones plus whole-document stats. The financial
// filter only runs on sentences that passed the numeric filter.
inline std::pair<std::vector<Sentence>, FilterStats> filter_pipeline(
    const Document& doc, const TermSet& terms, const Segmenter& segmenter = Segmenter(),
    const std::vector<std::string>& currency_symbols = default_currency_symbols()) {
    std::vector<Sentence> sentences = segmenter.segment(doc);
    uint64_t numeric = 0, fin = 0;
    std::vector<Sentence> kept;
    for (auto& s : sentences) {
        s.is_numeric = is_numeric_sentence(s.text, currency_symbols);
        if (s.is_numeric) {
            ++numeric;
            s.is_financial = is_financial_sentence(s.text, terms);
            if (s.is_financial) {
                ++fin;
                kept.push_back(s);
            }
        }
    }
    return {std::move(kept), FilterStats::make(sentences.size(), numeric, fin)};
}

// ---------------------------------------------------------------------------
// Lemmatizer
// ---------------------------------------------------------------------------
//
// Table-driven: inflected forms (s/es/ed/ing with e-drop, y-rules and short
// CVC doubling) are generated for a base-verb list and mapped back; lookups
// not in the table return the token unchanged. Idempotent by construction.
class Lemmatizer {
  public:
    Lemmatizer() {
        for (const char* base : builtin_bases()) add_base(base);
        // Irregular doublings the generator does not produce.
        table_["incurred"] = "incur";
        table_["incurring"] = "incur";
    }

    void add_base(const std::string& base) {
        for (const auto& form : inflections(base)) table_[form] = base;
    }

    std::string lemma(std::string_view token) const {
        std::string t = ascii_lower(token);
        auto it = table_.find(t);
        return it == table_.end() ? t : it->second;
    }

    static std::vector<std::string> inflections(const std::string& b) {
        std::vector<std::string> out;
        if (b.empty()) return out;
        const char last = b.back();
        const bool ends_e = last == 'e';
        const bool ends_y_after_consonant =
            last == 'y' && b.size() >= 2 && !is_vowel(b[b.size() - 2]);
        const bool sibilant = last == 's' || last == 'x' || last == 'z' ||
                              ends_with(b, "ch") || ends_with(b, "sh");
        const bool doubles = b.size() <= 4 && is_cvc(b);

        // third person singular
        if (ends_y_after_consonant) {
            out.push_back(b.substr(0, b.size() - 1) + "ies");
        } else if (sibilant) {
            out.push_back(b + "es");
        } else {
            out.push_back(b + "s");
        }
        // past / participle
        if (ends_e) {
            out.push_back(b + "d");
        } else if (ends_y_after_consonant) {
            out.push_back(b.substr(0, b.size() - 1) + "ied");
        } else if (doubles) {
            out.push_back(b + last + "ed");
        } else {
            out.push_back(b + "ed");
        }
        // gerund
        if (ends_e) {
            out.push_back(b.substr(0, b.size() - 1) + "ing");
        } else if (doubles) {
            out.push_back(b + last + "ing");
        } else {
            out.push_back(b + "ing");
        }
        return out;
    }

    static const std::vector<const char*>& builtin_bases() {
        static const std::vector<const char*> bases = {
            "expect", "anticipate", "predict", "forecast",  "envision", "contemplate",
            "project", "plan",      "factor",  "intend",    "aim",      "estimate",
            "peg",     "tout",      "entitle", "incur",     "guide",    "target",
            "assume"};
        return bases;
    }

  private:
    static bool is_vowel(char c) {
        return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
    }

    static bool is_cvc(const std::string& b) {
        if (b.size() < 3) return false;
        const char c3 = b[b.size() - 3], c2 = b[b.size() - 2], c1 = b[b.size() - 1];
        return !is_vowel(c3) && is_vowel(c2) && !is_vowel(c1) && c1 != 'w' && c1 != 'x' &&
               c1 != 'y';
    }

    static bool ends_with(const std::string& s, std::string_view suf) {
        return s.size() >= suf.size() && std::string_view(s).substr(s.size() - suf.size()) == suf;
    }

    std::unordered_map<std::string, std::string> table_;
};

// ---------------------------------------------------------------------------
// "project" part-of-speech heuristic
// ---------------------------------------------------------------------------

enum class PosCall { verb_like, non_verb };

// Determiners, possessives and common pre-noun adjectives that mark a noun
// usage of "project"/"projects".
inline const std::unordered_set<std::string>& project_noun_markers() {
    static const std::unordered_set<std::string> deny = {
        "the",   "a",     "an",    "this",        "that",           "these", "those",
        "each",  "every", "any",   "some",        "no",             "another", "such",
        "our",   "its",   "their", "his",         "her",            "my",    "your",
        "whose", "new",   "major", "key",         "pilot",          "capital",
        "large", "small", "construction", "infrastructure", "development", "expansion"};
    return deny;
}

// Heuristic verb/non-verb call for one occurrence of "project". Participle
// and gerund surface forms are always verb-like; "project"/"projects" are
// verb-like unless the preceding token marks a noun phrase (or is absent).
// Precondition: the token at `position` lemmatizes to "project".
inline PosCall pos_of_project(const std::vector<std::string>& lower_tokens, size_t position,
                              const Lemmatizer& lemmatizer = Lemmatizer()) {
    if (position >= lower_tokens.size() || lemmatizer.lemma(lower_tokens[position]) != "project") {
        throw Error("pos_of_project: token at position does not lemmatize to 'project'");
    }
    const std::string& surface = lower_tokens[position];
    if (surface == "projected" || surface == "projecting") return PosCall::verb_like;
    if (position == 0) return PosCall::non_verb;
    const std::string& prev = lower_tokens[position - 1];
    return project_noun_markers().count(prev) ? PosCall::non_verb : PosCall::verb_like;
}

}  // namespace claimforge
