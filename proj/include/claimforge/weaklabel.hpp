#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "claimforge/core.hpp"
#include "claimforge/text.hpp"
#include "claimforge/textproc.hpp"

namespace claimforge {

// Labeling-function output. OUT_STRONG dominates the aggregation; IN_STRONG
// beats any majority; IN_WEAK only counts in the majority round.
enum class Vote : int8_t {
    out_strong = -1,
    abstain = 0,
    in_weak = 1,
    in_strong = 2,
};

inline int vote_value(Vote v) { return static_cast<int>(v); }

inline Vote vote_from_int(int v) {
    switch (v) {
        case -1: return Vote::out_strong;
        case 0: return Vote::abstain;
        case 1: return Vote::in_weak;
        case 2: return Vote::in_strong;
        default: throw DataError("invalid vote value " + std::to_string(v));
    }
}

enum class Detector { phrase, lemma_word, pos_project };

inline std::string to_string(Detector d) {
    switch (d) {
        case Detector::phrase: return "phrase";
        case Detector::lemma_word: return "lemma_word";
        default: return "pos_project";
    }
}

inline Detector detector_from_string(const std::string& s) {
    if (s == "phrase") return Detector::phrase;
    if (s == "lemma_word") return Detector::lemma_word;
    if (s == "pos_project") return Detector::pos_project;
    throw DataError("unknown detector '" + s + "'");
}

enum class MatchScope { token_boundary, anywhere };

inline std::string to_string(MatchScope m) {
    return m == MatchScope::anywhere ? "anywhere" : "token_boundary";
}

inline MatchScope match_scope_from_string(const std::string& s) {
    if (s == "token_boundary") return MatchScope::token_boundary;
    if (s == "anywhere") return MatchScope::anywhere;
    throw DataError("unknown match_scope '" + s + "'");
}

// One declarative labeling function: emits `emit` on match, abstains otherwise.
struct RuleSpec {
    std::string rule_id;
    Detector detector = Detector::phrase;
    std::vector<std::string> patterns;  // empty only for pos_project
    Vote emit = Vote::in_strong;        // never abstain
    MatchScope match_scope = MatchScope::token_boundary;

    void validate() const {
        if (rule_id.empty()) throw DataError("rule with empty rule_id");
        if (emit == Vote::abstain) {
            throw DataError("rule '" + rule_id + "': emit must be one of -1, 1, 2");
        }
        if (detector != Detector::pos_project && patterns.empty()) {
            throw DataError("rule '" + rule_id + "': patterns must be non-empty");
        }
        for (const auto& p : patterns) {
            if (trim(p).empty()) throw DataError("rule '" + rule_id + "': blank pattern");
        }
    }
};

struct RuleSet {
    std::vector<RuleSpec> rules;

    void validate() const {
        std::unordered_set<std::string> ids;
        for (const auto& r : rules) {
            r.validate();
            if (!ids.insert(r.rule_id).second) {
                throw DataError("duplicate rule_id '" + r.rule_id + "'");
            }
        }
    }

    size_t size() const { return rules.size(); }
};

// Default rule set: the shipped encoding of the five SME rule families, one
// rule per keyword or phrase. Families "out.*" mark past tense / assertions,
// "weak.*" low-confidence claims, "lemma.*"/"pos.*"/"strong.*" high-confidence
// claims.
inline RuleSet default_rules() {
    RuleSet rs;
    auto phrase = [&](std::string id, std::string pat, Vote emit) {
        rs.rules.push_back({std::move(id), Detector::phrase, {std::move(pat)}, emit,
                            MatchScope::token_boundary});
    };
    auto lemma = [&](std::string id, std::string pat, Vote emit) {
        rs.rules.push_back({std::move(id), Detector::lemma_word, {std::move(pat)}, emit,
                            MatchScope::token_boundary});
    };
    // High-confidence out-of-claim: past tense or assertions.
    phrase("out.reasons_to_buy", "reasons to buy:", Vote::out_strong);
    phrase("out.reasons_to_sell", "reasons to sell:", Vote::out_strong);
    phrase("out.was", "was", Vote::out_strong);
    phrase("out.were", "were", Vote::out_strong);
    phrase("out.declares_quarterly_dividend", "declares quarterly dividend", Vote::out_strong);
    phrase("out.last_earnings_report", "last earnings report", Vote::out_strong);
    phrase("out.recorded", "recorded", Vote::out_strong);
    // Low-confidence in-claim phrases.
    phrase("weak.earnings_guidance_to", "earnings guidance to", Vote::in_weak);
    phrase("weak.touted_to", "touted to", Vote::in_weak);
    phrase("weak.entitle_to", "entitle to", Vote::in_weak);
    // High-confidence in-claim, lemmatized verb matching.
    lemma("lemma.expect", "expect", Vote::in_strong);
    lemma("lemma.anticipate", "anticipate", Vote::in_strong);
    lemma("lemma.predict", "predict", Vote::in_strong);
    lemma("lemma.forecast", "forecast", Vote::in_strong);
    lemma("lemma.envision", "envision", Vote::in_strong);
    lemma("lemma.contemplate", "contemplate", Vote::in_strong);
    lemma("lemma.plan", "plan", Vote::in_strong);
    // High-confidence in-claim, verb usage of "project".
    rs.rules.push_back(
        {"pos.project", Detector::pos_project, {}, Vote::in_strong, MatchScope::token_boundary});
    // High-confidence in-claim phrases (probabilistic verb + preposition).
    phrase("strong.to_be", "to be", Vote::in_strong);
    phrase("strong.likely_to", "likely to", Vote::in_strong);
    phrase("strong.on_track_to", "on track to", Vote::in_strong);
    phrase("strong.intends_to", "intends to", Vote::in_strong);
    phrase("strong.aims_to", "aims to", Vote::in_strong);
    phrase("strong.to_incur", "to incur", Vote::in_strong);
    phrase("strong.pegged_at", "pegged at", Vote::in_strong);
    phrase("strong.factoring_in", "factoring in", Vote::in_strong);
    rs.validate();
    return rs;
}

// ---------------------------------------------------------------------------
// Aggregation
// ---------------------------------------------------------------------------

// SME hierarchy: any strong out-of-claim vote decides; otherwise a strong
// in-claim vote decides; otherwise majority over the non-abstaining votes,
// with ties and all-abstain defaulting to out-of-claim.
inline ClaimLabel aggregate_sme(std::span<const Vote> votes) {
    if (votes.empty()) throw DataError("aggregate_sme: empty vote vector");
    bool any_out = false, any_strong_in = false;
    int in = 0, out = 0;
    for (Vote v : votes) {
        switch (v) {
            case Vote::out_strong:
                any_out = true;
                ++out;
                break;
            case Vote::in_strong:
                any_strong_in = true;
                ++in;
                break;
            case Vote::in_weak: ++in; break;
            case Vote::abstain: break;
        }
    }
    if (any_out) return ClaimLabel::out_of_claim;
    if (any_strong_in) return ClaimLabel::in_claim;
    return in > out ? ClaimLabel::in_claim : ClaimLabel::out_of_claim;
}

// Tri-state result of the baseline aggregator. Abstains are never coerced.
enum class TriLabel { in_claim, out_of_claim, abstain };

inline std::string to_string(TriLabel t) {
    switch (t) {
        case TriLabel::in_claim: return "INCLAIM";
        case TriLabel::out_of_claim: return "OUTOFCLAIM";
        default: return "ABSTAIN";
    }
}

inline TriLabel tri_from_string(const std::string& s) {
    if (s == "INCLAIM") return TriLabel::in_claim;
    if (s == "OUTOFCLAIM") return TriLabel::out_of_claim;
    if (s == "ABSTAIN") return TriLabel::abstain;
    throw DataError("unknown label '" + s + "'");
}

inline TriLabel tri_of(ClaimLabel c) {
    return c == ClaimLabel::in_claim ? TriLabel::in_claim : TriLabel::out_of_claim;
}

// Unweighted majority vote over ballots {out, in, abstain}; any tie for the
// top, or an abstain plurality, yields ABSTAIN.
inline TriLabel aggregate_majority(std::span<const Vote> votes) {
    if (votes.empty()) throw DataError("aggregate_majority: empty vote vector");
    int in = 0, out = 0, abst = 0;
    for (Vote v : votes) {
        if (v == Vote::abstain) {
            ++abst;
        } else if (v == Vote::out_strong) {
            ++out;
        } else {
            ++in;
        }
    }
    if (in > out && in > abst) return TriLabel::in_claim;
    if (out > in && out > abst) return TriLabel::out_of_claim;
    return TriLabel::abstain;
}

enum class Aggregator { sme, majority };

inline std::string to_string(Aggregator a) { return a == Aggregator::sme ? "sme" : "majority"; }

inline Aggregator aggregator_from_string(const std::string& s) {
    if (s == "sme") return Aggregator::sme;
    if (s == "majority") return Aggregator::majority;
    throw DataError("unknown aggregator '" + s + "' (expected sme or majority)");
}

// ---------------------------------------------------------------------------
// Rule engine
// ---------------------------------------------------------------------------

// Rule set compiled against a lemmatizer. Stateless after construction; safe
// to share across threads.
class LabelEngine {
  public:
    explicit LabelEngine(RuleSet rules = default_rules(), Lemmatizer lemmatizer = Lemmatizer())
        : rules_(std::move(rules)), lemmatizer_(std::move(lemmatizer)) {
        rules_.validate();
        compiled_.reserve(rules_.rules.size());
        for (const auto& r : rules_.rules) {
            Compiled c;
            for (const auto& p : r.patterns) {
                c.lowered.push_back(ascii_lower(p));
            }
            compiled_.push_back(std::move(c));
        }
    }

    const RuleSet& rules() const { return rules_; }
    const Lemmatizer& lemmatizer() const { return lemmatizer_; }

    // Per-sentence scratch, computed once and shared by all rules.
    struct SentenceView {
        std::string lowered;
        std::vector<std::string> tokens;
        std::vector<std::string> lemmas;
    };

    SentenceView prepare(std::string_view text) const {
        SentenceView v;
        v.lowered = ascii_lower(text);
        v.tokens = tokenize_lower(v.lowered);
        v.lemmas.reserve(v.tokens.size());
        for (const auto& t : v.tokens) v.lemmas.push_back(lemmatizer_.lemma(t));
        return v;
    }

    Vote apply_rule(size_t rule_index, const SentenceView& view) const {
        const RuleSpec& r = rules_.rules[rule_index];
        const Compiled& c = compiled_[rule_index];
        switch (r.detector) {
            case Detector::phrase:
                for (const auto& p : c.lowered) {
                    const bool hit = r.match_scope == MatchScope::anywhere
                                         ? view.lowered.find(p) != std::string::npos
                                         : contains_phrase(view.lowered, p);
                    if (hit) return r.emit;
                }
                return Vote::abstain;
            case Detector::lemma_word:
                for (size_t i = 0; i < view.lemmas.size(); ++i) {
                    for (const auto& p : c.lowered) {
                        if (view.lemmas[i] == p) return r.emit;
                    }
                }
                return Vote::abstain;
            case Detector::pos_project:
                for (size_t i = 0; i < view.lemmas.size(); ++i) {
                    if (view.lemmas[i] == "project" &&
                        pos_of_project(view.tokens, i, lemmatizer_) == PosCall::verb_like) {
                        return r.emit;
                    }
                }
                return Vote::abstain;
        }
        return Vote::abstain;
    }

    Vote apply_rule(const RuleSpec& rule, std::string_view sentence_text) const {
        LabelEngine single(RuleSet{{rule}}, lemmatizer_);
        return single.apply_rule(0, single.prepare(sentence_text));
    }

    // One vote per rule, in rule order.
    std::vector<Vote> vote_vector(std::string_view text) const {
        SentenceView view = prepare(text);
        std::vector<Vote> votes(rules_.rules.size(), Vote::abstain);
        for (size_t i = 0; i < votes.size(); ++i) votes[i] = apply_rule(i, view);
        return votes;
    }

    TriLabel label_sentence(std::string_view text, Aggregator agg = Aggregator::sme) const {
        auto votes = vote_vector(text);
        if (agg == Aggregator::sme) return tri_of(aggregate_sme(votes));
        return aggregate_majority(votes);
    }

  private:
    struct Compiled {
        std::vector<std::string> lowered;
    };

    RuleSet rules_;
    Lemmatizer lemmatizer_;
    std::vector<Compiled> compiled_;
};

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

// Confusion counts with IN_CLAIM as the positive class. An abstaining
// prediction is wrong for whichever class the gold label carries: it counts
// as a false negative on gold IN_CLAIM and a false positive on gold
// OUT_OF_CLAIM.
struct EvalMetrics {
    uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
    double precision = 0.0, recall = 0.0, f1 = 0.0, accuracy = 0.0;

    static EvalMetrics from_counts(uint64_t tp, uint64_t fp, uint64_t fn, uint64_t tn) {
        EvalMetrics m;
        m.tp = tp;
        m.fp = fp;
        m.fn = fn;
        m.tn = tn;
        m.precision = (tp + fp) ? static_cast<double>(tp) / (tp + fp) : 0.0;
        m.recall = (tp + fn) ? static_cast<double>(tp) / (tp + fn) : 0.0;
        m.f1 = (m.precision + m.recall) > 0.0
                   ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                   : 0.0;
        const uint64_t n = tp + fp + fn + tn;
        m.accuracy = n ? static_cast<double>(tp + tn) / n : 0.0;
        return m;
    }
};

inline EvalMetrics evaluate(std::span<const TriLabel> predictions,
                            std::span<const ClaimLabel> gold) {
    if (predictions.size() != gold.size()) {
        throw DataError("evaluate: prediction/gold size mismatch");
    }
    uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
    for (size_t i = 0; i < gold.size(); ++i) {
        const bool gold_in = gold[i] == ClaimLabel::in_claim;
        switch (predictions[i]) {
            case TriLabel::in_claim: gold_in ? ++tp : ++fp; break;
            case TriLabel::out_of_claim: gold_in ? ++fn : ++tn; break;
            case TriLabel::abstain: gold_in ? ++fn : ++fp; break;
        }
    }
    return EvalMetrics::from_counts(tp, fp, fn, tn);
}

// ---------------------------------------------------------------------------
// Labeling-function-count ablation
// ---------------------------------------------------------------------------

struct AblationStep {
    size_t k = 0;
    std::string rule_id;  // rule added at this step
    double accuracy = 0.0;
};

struct GoldSentence {
    std::string text;
    ClaimLabel label = ClaimLabel::out_of_claim;
};

// Greedy forward selection over the in-claim rules with every out-of-claim
// rule always active. At each step the candidate maximizing SME accuracy is
// added; ties break toward the lexicographically smaller rule_id.
inline std::vector<AblationStep> ablate(const RuleSet& rule_set,
                                        std::span<const GoldSentence> gold,
                                        const Lemmatizer& lemmatizer = Lemmatizer()) {
    if (gold.empty()) throw DataError("ablate: empty gold corpus");
    LabelEngine engine(rule_set, lemmatizer);
    const size_t n_rules = rule_set.rules.size();

    // Votes are precomputed once; each greedy evaluation is then a cheap
    // aggregation over a rule subset.
    std::vector<std::vector<Vote>> votes(gold.size());
    for (size_t s = 0; s < gold.size(); ++s) votes[s] = engine.vote_vector(gold[s].text);

    std::vector<size_t> out_rules, in_rules;
    for (size_t i = 0; i < n_rules; ++i) {
        (rule_set.rules[i].emit == Vote::out_strong ? out_rules : in_rules).push_back(i);
    }

    auto accuracy_with = [&](const std::vector<size_t>& selected_in) {
        size_t correct = 0;
        std::vector<Vote> subset;
        subset.reserve(out_rules.size() + selected_in.size());
        for (size_t s = 0; s < gold.size(); ++s) {
            subset.clear();
            for (size_t r : out_rules) subset.push_back(votes[s][r]);
            for (size_t r : selected_in) subset.push_back(votes[s][r]);
            if (subset.empty()) subset.push_back(Vote::abstain);
            if (aggregate_sme(subset) == gold[s].label) ++correct;
        }
        return static_cast<double>(correct) / static_cast<double>(gold.size());
    };

    std::vector<AblationStep> curve;
    std::vector<size_t> selected;
    std::vector<size_t> remaining = in_rules;
    while (!remaining.empty()) {
        double best_acc = -1.0;
        size_t best_pos = 0;
        for (size_t pos = 0; pos < remaining.size(); ++pos) {
            std::vector<size_t> trial = selected;
            trial.push_back(remaining[pos]);
            const double acc = accuracy_with(trial);
            const std::string& id = rule_set.rules[remaining[pos]].rule_id;
            if (acc > best_acc ||
                (acc == best_acc && id < rule_set.rules[remaining[best_pos]].rule_id)) {
                best_acc = acc;
                best_pos = pos;
            }
        }
        selected.push_back(remaining[best_pos]);
        curve.push_back({selected.size(), rule_set.rules[remaining[best_pos]].rule_id, best_acc});
        remaining.erase(remaining.begin() + static_cast<long>(best_pos));
    }
    return curve;
}

}  // namespace claimforge
