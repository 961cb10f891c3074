#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "claimforge/config.hpp"
#include "claimforge/corpus.hpp"
#include "claimforge/core.hpp"
#include "claimforge/csv.hpp"
#include "claimforge/sentiment.hpp"
#include "claimforge/textproc.hpp"
#include "claimforge/weaklabel.hpp"

namespace claimforge {

// Index-sharded parallel loop. Each index writes only its own output slot, so
// results are identical for any thread count.
template <typename Fn>
void parallel_for(size_t n, unsigned threads, Fn&& fn) {
    if (threads <= 1 || n <= 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    const unsigned count = std::min<unsigned>(threads, static_cast<unsigned>(n));
    pool.reserve(count);
    for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

// Fully assembled engine: dictionary, segmenter, labeler and the optional
// lexicon sentiment provider, built once from an EngineConfig and shared
// read-only by all workers.
struct Engine {
    EngineConfig config;
    TermSet dictionary;
    Segmenter segmenter;
    Lemmatizer lemmatizer;
    LabelEngine labeler;
    std::optional<SentimentLexicon> lexicon;

    static Engine build(const EngineConfig& cfg) {
        Engine e{cfg,
                 {},
                 cfg.abbreviations_path.empty() ? Segmenter()
                                                : Segmenter(load_lines(cfg.abbreviations_path)),
                 Lemmatizer(),
                 LabelEngine(cfg.rules_path.empty() ? default_rules()
                                                    : load_rules_json(cfg.rules_path)),
                 std::nullopt};
        if (!cfg.dictionary_path.empty()) e.dictionary = load_dictionary(cfg.dictionary_path);
        if (cfg.financial_filter && e.dictionary.empty()) {
            throw ConfigError("financial filter enabled but no dictionary configured");
        }
        if (!cfg.positive_lexicon_path.empty() || !cfg.negative_lexicon_path.empty()) {
            if (cfg.positive_lexicon_path.empty() || cfg.negative_lexicon_path.empty()) {
                throw ConfigError("positive and negative lexicons must both be configured");
            }
            SentimentLexicon lex;
            for (const auto& t : load_lines(cfg.positive_lexicon_path)) lex.positive.insert(t);
            for (const auto& t : load_lines(cfg.negative_lexicon_path)) lex.negative.insert(t);
            lex.validate();
            for (const auto& t : load_lines(cfg.positive_lexicon_path)) {
                if (lex.negative.contains_term(t)) {
                    throw ConfigError("sentiment lexicons overlap on term '" + t + "'");
                }
            }
            e.lexicon = std::move(lex);
        }
        return e;
    }
};

// Everything the pipeline derives from one document.
struct DocResult {
    std::vector<Sentence> sentences;  // all segmented sentences, flags set
    std::vector<Prediction> predictions;
    FilterStats stats;
};

// Segment, filter, label and (when the lexicon provider is in use) attach
// sentiment for one document. Pure function of the engine and document.
inline DocResult process_document(const Engine& engine, const Document& doc,
                                  bool apply_lexicon = true) {
    DocResult result;
    result.sentences = engine.segmenter.segment(doc);
    uint64_t numeric = 0, fin = 0;
    for (auto& s : result.sentences) {
        // A disabled tier admits every sentence.
        s.is_numeric = !engine.config.numeric_filter ||
                       is_numeric_sentence(s.text, engine.config.currency_symbols);
        if (s.is_numeric) {
            ++numeric;
            s.is_financial =
                !engine.config.financial_filter || is_financial_sentence(s.text, engine.dictionary);
            if (s.is_financial) ++fin;
        }
        if (apply_lexicon && engine.lexicon) {
            s.sentiment = classify_lexicon(s.text, *engine.lexicon);
        }
    }
    for (auto& s : result.sentences) {
        if (!s.is_financial) continue;
        Prediction p;
        p.doc_id = s.doc_id;
        p.sentence_index = s.index;
        p.votes = engine.labeler.vote_vector(s.text);
        if (engine.config.aggregator == Aggregator::sme) {
            p.label = tri_of(aggregate_sme(p.votes));
        } else {
            p.label = aggregate_majority(p.votes);
        }
        if (p.label == TriLabel::in_claim) s.claim = ClaimLabel::in_claim;
        if (p.label == TriLabel::out_of_claim) s.claim = ClaimLabel::out_of_claim;
        result.predictions.push_back(std::move(p));
    }
    result.stats = FilterStats::make(result.sentences.size(), numeric, fin);
    return result;
}

struct PipelineOutput {
    std::vector<Sentence> sentences;      // corpus order: (doc order, index)
    std::vector<Prediction> predictions;  // same order
    std::vector<OptimismRecord> doc_optimism;
    std::vector<OptimismRecord> quarter_optimism;
    FilterStats stats;
};

// Runs the full pipeline over a corpus. Documents are processed in parallel;
// assembly restores document order, so output is independent of thread count.
// An external sentiment file, when given, replaces the lexicon provider.
inline PipelineOutput run_pipeline(
    const Engine& engine, std::span<const Document> docs,
    const std::optional<std::vector<SentimentRecord>>& external_sentiment = std::nullopt,
    bool default_neutral = false) {
    const bool apply_lexicon = !external_sentiment.has_value();
    std::vector<DocResult> results(docs.size());
    parallel_for(docs.size(), engine.config.parallelism, [&](size_t i) {
        try {
            results[i] = process_document(engine, docs[i], apply_lexicon);
        } catch (const Error& e) {
            throw DataError("document '" + docs[i].doc_id + "': " + e.what());
        }
    });

    PipelineOutput out;
    for (auto& r : results) {
        out.stats += r.stats;
        for (auto& s : r.sentences) out.sentences.push_back(std::move(s));
        for (auto& p : r.predictions) out.predictions.push_back(std::move(p));
    }
    if (external_sentiment) {
        merge_external_sentiment(out.sentences, *external_sentiment, default_neutral);
    }

    std::vector<DocOptimism> per_doc;
    size_t cursor = 0;
    for (size_t i = 0; i < docs.size(); ++i) {
        const size_t count = results[i].sentences.size();
        std::span<const Sentence> doc_sents(out.sentences.data() + cursor, count);
        cursor += count;
        if (count == 0) {
            throw DataError("document '" + docs[i].doc_id + "': zero sentences after segmentation");
        }
        DocOptimism rec{docs[i].ticker, Quarter::of(docs[i].period),
                        compute_optimism(docs[i].doc_id, doc_sents)};
        out.doc_optimism.push_back(rec.record);
        per_doc.push_back(std::move(rec));
    }
    out.quarter_optimism = aggregate_quarters(per_doc);
    return out;
}

inline void write_filter_stats_csv(const FilterStats& stats, const std::string& path) {
    CsvWriter out(path);
    out.row({"total_sentences", "numeric_sentences", "numeric_financial_sentences",
             "retention_numeric", "retention_financial"});
    out.row({std::to_string(stats.total_sentences), std::to_string(stats.numeric_sentences),
             std::to_string(stats.numeric_financial_sentences),
             fmt_double(stats.retention_numeric), fmt_double(stats.retention_financial)});
}

inline void write_eval_metrics_csv(const EvalMetrics& m, const std::string& path) {
    CsvWriter out(path);
    out.row({"tp", "fp", "fn", "tn", "precision", "recall", "f1", "accuracy"});
    out.row({std::to_string(m.tp), std::to_string(m.fp), std::to_string(m.fn),
             std::to_string(m.tn), fmt_double(m.precision), fmt_double(m.recall),
             fmt_double(m.f1), fmt_double(m.accuracy)});
}

}  // namespace claimforge
