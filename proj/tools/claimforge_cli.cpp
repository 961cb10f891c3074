// claimforge command-line interface: ingest -> segment/filter -> label ->
// optimism -> study/backtest, plus evaluation, ablation and benchmarking.
//
// Exit codes: 0 success, 1 usage/config error, 2 data validation error,
// 3 internal error.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "claimforge/claimforge.hpp"

namespace {

using namespace claimforge;
namespace fs = std::filesystem;

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
};

EngineConfig load_config_with_env(const std::string& path) {
    EngineConfig cfg = EngineConfig::load(path);
    if (const char* env = std::getenv("CLAIMFORGE_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1) {
            throw ConfigError("CLAIMFORGE_THREADS must be a positive integer, got '" +
                              std::string(env) + "'");
        }
        cfg.parallelism = static_cast<unsigned>(v);
    }
    return cfg;
}

std::string out_path(const CommonArgs& args, const std::string& name) {
    fs::create_directories(args.out_dir);
    return (fs::path(args.out_dir) / name).string();
}

std::vector<Document> load_docs(const std::string& path, const std::string& format) {
    if (format == "jsonl") return load_documents(path, DocumentFormat::jsonl);
    if (format == "plaintext_dir") return load_documents(path, DocumentFormat::plaintext_dir);
    throw ConfigError("unknown document format '" + format + "'");
}

// "2017-2019", "2017,2019" (years expand to their four quarters) or explicit
// quarters "2020Q1,2020Q2".
std::set<Quarter> parse_periods(const std::string& spec) {
    std::set<Quarter> out;
    std::stringstream ss(spec);
    std::string item;
    auto add_year = [&](int year) {
        for (int q = 1; q <= 4; ++q) out.insert({year, q});
    };
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        if (item.find('Q') != std::string::npos) {
            out.insert(Quarter::parse(item));
        } else if (const auto dash = item.find('-'); dash != std::string::npos) {
            const int from = static_cast<int>(parse_long(item.substr(0, dash), "periods"));
            const int to = static_cast<int>(parse_long(item.substr(dash + 1), "periods"));
            if (from > to) throw ConfigError("bad year range '" + item + "'");
            for (int y = from; y <= to; ++y) add_year(y);
        } else {
            add_year(static_cast<int>(parse_long(item, "periods")));
        }
    }
    if (out.empty()) throw ConfigError("empty period set '" + spec + "'");
    return out;
}

std::map<std::string, std::vector<const Sentence*>> group_by_doc(
    const std::vector<Sentence>& sentences) {
    std::map<std::string, std::vector<const Sentence*>> by_doc;
    for (const auto& s : sentences) by_doc[s.doc_id].push_back(&s);
    return by_doc;
}

std::vector<Sentence> doc_sentences_copy(const std::vector<const Sentence*>& ptrs) {
    std::vector<Sentence> out;
    out.reserve(ptrs.size());
    for (const auto* p : ptrs) out.push_back(*p);
    return out;
}

// --- pipeline ---------------------------------------------------------------

struct PipelineArgs : CommonArgs {
    std::string documents;
    std::string format = "jsonl";
    std::string sentiment_path;
    bool default_neutral = false;
};

void cmd_pipeline(const PipelineArgs& args) {
    EngineConfig cfg = load_config_with_env(args.config_path);
    Engine engine = Engine::build(cfg);
    if (!engine.lexicon && args.sentiment_path.empty()) {
        throw ConfigError(
            "no sentiment provider: configure lexicons or pass --sentiment <file>");
    }
    auto docs = load_docs(args.documents, args.format);

    std::optional<std::vector<SentimentRecord>> external;
    if (!args.sentiment_path.empty()) external = load_sentiment_csv(args.sentiment_path);
    PipelineOutput out = run_pipeline(engine, docs, external, args.default_neutral);

    write_sentences_jsonl(out.sentences, out_path(args, "sentences.jsonl"));
    write_predictions_jsonl(out.predictions, out_path(args, "predictions.jsonl"));
    write_optimism_csv(out.doc_optimism, out_path(args, "optimism.csv"));
    write_optimism_csv(out.quarter_optimism, out_path(args, "optimism_quarterly.csv"));
    write_filter_stats_csv(out.stats, out_path(args, "filter_stats.csv"));
    std::cout << "pipeline: " << docs.size() << " documents, " << out.stats.total_sentences
              << " sentences, " << out.stats.numeric_financial_sentences
              << " numeric-financial, " << out.predictions.size() << " labeled\n";
}

// --- segment / filter / label ------------------------------------------------

struct DocsArgs : CommonArgs {
    std::string documents;
    std::string format = "jsonl";
};

void cmd_segment(const DocsArgs& args) {
    EngineConfig cfg = load_config_with_env(args.config_path);
    Segmenter seg = cfg.abbreviations_path.empty()
                        ? Segmenter()
                        : Segmenter(load_lines(cfg.abbreviations_path));
    auto docs = load_docs(args.documents, args.format);
    std::vector<Sentence> all;
    for (const auto& d : docs) {
        for (auto& s : seg.segment(d)) all.push_back(std::move(s));
    }
    write_sentences_jsonl(all, out_path(args, "sentences.jsonl"));
    std::cout << "segment: " << docs.size() << " documents, " << all.size() << " sentences\n";
}

void cmd_filter(const DocsArgs& args) {
    EngineConfig cfg = load_config_with_env(args.config_path);
    Engine engine = Engine::build(cfg);
    auto docs = load_docs(args.documents, args.format);
    std::vector<Sentence> kept;
    FilterStats stats;
    for (const auto& d : docs) {
        auto [sentences, doc_stats] =
            filter_pipeline(d, engine.dictionary, engine.segmenter, cfg.currency_symbols);
        stats += doc_stats;
        for (auto& s : sentences) kept.push_back(std::move(s));
    }
    write_sentences_jsonl(kept, out_path(args, "sentences.jsonl"));
    write_filter_stats_csv(stats, out_path(args, "filter_stats.csv"));
    std::cout << "filter: kept " << kept.size() << " of " << stats.total_sentences
              << " sentences\n";
}

void cmd_label(const DocsArgs& args) {
    EngineConfig cfg = load_config_with_env(args.config_path);
    Engine engine = Engine::build(cfg);
    auto docs = load_docs(args.documents, args.format);
    PipelineOutput out = run_pipeline(engine, docs);
    write_predictions_jsonl(out.predictions, out_path(args, "predictions.jsonl"));
    std::cout << "label: " << out.predictions.size() << " predictions\n";
}

// --- optimism ----------------------------------------------------------------

struct OptimismArgs : CommonArgs {
    std::string documents;
    std::string format = "jsonl";
    std::string sentences_path;
    std::string sentiment_path;
    bool default_neutral = false;
    std::string subset = "in_claim";
};

void cmd_optimism(const OptimismArgs& args) {
    load_config_with_env(args.config_path);
    auto docs = load_docs(args.documents, args.format);
    std::vector<Sentence> sentences = load_sentences_jsonl(args.sentences_path);
    if (!args.sentiment_path.empty()) {
        auto labels = load_sentiment_csv(args.sentiment_path);
        merge_external_sentiment(sentences, labels, args.default_neutral);
    }
    const SentenceSubset subset = subset_from_string(args.subset);

    auto by_doc = group_by_doc(sentences);
    std::vector<OptimismRecord> doc_records;
    std::vector<DocOptimism> per_doc;
    for (const auto& d : docs) {
        auto it = by_doc.find(d.doc_id);
        if (it == by_doc.end()) {
            throw DataError("no sentences for document '" + d.doc_id + "'");
        }
        auto sents = doc_sentences_copy(it->second);
        OptimismRecord rec = subset_optimism(d.doc_id, sents, subset);
        doc_records.push_back(rec);
        per_doc.push_back({d.ticker, Quarter::of(d.period), rec});
    }
    write_optimism_csv(doc_records, out_path(args, "optimism.csv"));
    write_optimism_csv(aggregate_quarters(per_doc), out_path(args, "optimism_quarterly.csv"));
    std::cout << "optimism: " << doc_records.size() << " documents (subset " << args.subset
              << ")\n";
}

// --- evaluate ----------------------------------------------------------------

struct EvaluateArgs : CommonArgs {
    std::string predictions_path;
    std::string gold_path;
};

void cmd_evaluate(const EvaluateArgs& args) {
    load_config_with_env(args.config_path);
    auto preds = load_predictions_jsonl(args.predictions_path);
    auto gold = load_gold(args.gold_path);
    std::map<std::pair<std::string, int>, TriLabel> by_key;
    for (const auto& p : preds) by_key[{p.doc_id, p.sentence_index}] = p.label;

    std::vector<TriLabel> pred_seq;
    std::vector<ClaimLabel> gold_seq;
    for (const auto& g : gold) {
        auto it = by_key.find({g.doc_id, g.sentence_index});
        if (it == by_key.end()) {
            throw DataError("no prediction for gold sentence (" + g.doc_id + ", " +
                            std::to_string(g.sentence_index) + ")");
        }
        pred_seq.push_back(it->second);
        gold_seq.push_back(g.label);
    }
    EvalMetrics m = evaluate(pred_seq, gold_seq);
    write_eval_metrics_csv(m, out_path(args, "metrics.csv"));

    std::ostringstream md;
    md << "# Evaluation\n\n"
       << "| metric | value |\n|---|---|\n"
       << "| gold sentences | " << gold.size() << " |\n"
       << "| precision | " << fmt_double(m.precision) << " |\n"
       << "| recall | " << fmt_double(m.recall) << " |\n"
       << "| f1 | " << fmt_double(m.f1) << " |\n"
       << "| accuracy | " << fmt_double(m.accuracy) << " |\n"
       << "| tp / fp / fn / tn | " << m.tp << " / " << m.fp << " / " << m.fn << " / " << m.tn
       << " |\n";
    write_file(out_path(args, "report.md"), md.str());
    std::cout << "evaluate: f1=" << fmt_double(m.f1) << " accuracy=" << fmt_double(m.accuracy)
              << "\n";
}

// --- ablate -------------------------------------------------------------------

struct AblateArgs : CommonArgs {
    std::string documents;
    std::string format = "jsonl";
    std::string gold_path;
};

void cmd_ablate(const AblateArgs& args) {
    EngineConfig cfg = load_config_with_env(args.config_path);
    Engine engine = Engine::build(cfg);
    auto docs = load_docs(args.documents, args.format);
    auto gold = load_gold(args.gold_path);

    std::map<std::string, std::vector<Sentence>> by_doc;
    for (const auto& d : docs) {
        for (auto& s : engine.segmenter.segment(d)) by_doc[d.doc_id].push_back(std::move(s));
    }
    std::vector<GoldSentence> corpus;
    for (const auto& g : gold) {
        auto it = by_doc.find(g.doc_id);
        if (it == by_doc.end() || g.sentence_index >= static_cast<int>(it->second.size())) {
            throw DataError("gold label references unknown sentence (" + g.doc_id + ", " +
                            std::to_string(g.sentence_index) + ")");
        }
        corpus.push_back({it->second[g.sentence_index].text, g.label});
    }
    auto curve = ablate(engine.labeler.rules(), corpus, engine.lemmatizer);
    CsvWriter out(out_path(args, "ablation.csv"));
    out.row({"k", "rule_id", "accuracy"});
    for (const auto& step : curve) {
        out.row({std::to_string(step.k), step.rule_id, fmt_double(step.accuracy)});
    }
    std::cout << "ablate: " << curve.size() << " steps, final accuracy "
              << fmt_double(curve.empty() ? 0.0 : curve.back().accuracy) << "\n";
}

// --- study --------------------------------------------------------------------

struct StudyArgs : CommonArgs {
    std::string optimism_path;
    std::string eps_path;
    std::string prices_path;
    std::string index_path;
    std::string outcome = "all";
    std::string subset;  // empty: main regression on raw optimism
    std::string sentences_path;
    std::string documents;
    std::string format = "jsonl";
};

OutcomePanel outcomes_for(const StudyArgs& args, OutcomeMetric metric,
                          const std::vector<EpsRecord>& eps) {
    if (metric == OutcomeMetric::surprise) {
        return build_outcomes(eps, {}, IndexSeries{}, metric);
    }
    if (args.prices_path.empty() || args.index_path.empty()) {
        throw ConfigError("outcome '" + to_string(metric) + "' requires --prices and --index");
    }
    auto prices = load_prices(args.prices_path);
    auto index = load_index(args.index_path);
    return build_outcomes(eps, prices, index, metric);
}

void cmd_study(const StudyArgs& args) {
    load_config_with_env(args.config_path);
    auto eps = load_eps(args.eps_path);
    std::vector<OutcomeMetric> metrics;
    if (args.outcome == "all") {
        metrics = {OutcomeMetric::surprise, OutcomeMetric::car_2_30, OutcomeMetric::car_2_60};
    } else {
        metrics = {outcome_from_string(args.outcome)};
    }

    std::vector<OptimismRecord> optimism;
    double avg_sentences = 0.0;
    if (args.subset.empty()) {
        optimism = load_optimism_csv(args.optimism_path);
    } else {
        // Appendix-style subset path: recompute subset optimism from the
        // sentence dump and average the subset size per document.
        if (args.sentences_path.empty() || args.documents.empty()) {
            throw ConfigError("--subset requires --sentences and --documents");
        }
        const SentenceSubset subset = subset_from_string(args.subset);
        auto docs = load_docs(args.documents, args.format);
        auto sentences = load_sentences_jsonl(args.sentences_path);
        auto by_doc = group_by_doc(sentences);
        std::vector<DocOptimism> per_doc;
        uint64_t subset_total = 0;
        for (const auto& d : docs) {
            auto it = by_doc.find(d.doc_id);
            if (it == by_doc.end()) {
                throw DataError("no sentences for document '" + d.doc_id + "'");
            }
            auto sents = doc_sentences_copy(it->second);
            for (const auto& s : sents) {
                if (in_subset(s, subset)) ++subset_total;
            }
            per_doc.push_back({d.ticker, Quarter::of(d.period),
                               subset_optimism(d.doc_id, sents, subset)});
        }
        avg_sentences = docs.empty() ? 0.0
                                     : static_cast<double>(subset_total) /
                                           static_cast<double>(docs.size());
        optimism = aggregate_quarters(per_doc);
    }

    CsvWriter table(out_path(args, "regression_table.csv"));
    table.row({"outcome", "alpha", "beta", "se_alpha", "se_beta", "t_beta", "p_beta", "n",
               "stars"});
    std::optional<CsvWriter> adjusted;
    if (!args.subset.empty()) {
        adjusted.emplace(out_path(args, "adjusted_betas.csv"));
        adjusted->row({"subset", "outcome", "avg_sentences", "beta_raw", "beta_adjusted",
                       "stars"});
    }

    std::ostringstream md;
    md << "# Optimism study\n\n";
    if (!args.subset.empty()) md << "Sentence subset: `" << args.subset << "`\n\n";
    md << "| outcome | alpha | beta | n | stars |\n|---|---|---|---|---|\n";

    for (OutcomeMetric metric : metrics) {
        OutcomePanel outcomes = outcomes_for(args, metric, eps);
        StudyPanel panel = join_panel(optimism, outcomes);
        for (const auto& skip : outcomes.skipped) std::cerr << "warning: " << skip << "\n";
        if (panel.unmatched_optimism) {
            std::cerr << "warning: " << panel.unmatched_optimism
                      << " optimism records had no " << to_string(metric) << " outcome\n";
        }
        if (args.subset.empty()) {
            RegressionResult r = run_study(panel);
            table.row({to_string(metric), fmt_double(r.alpha), fmt_double(r.beta),
                       fmt_double(r.se_alpha), fmt_double(r.se_beta), fmt_double(r.t_beta),
                       fmt_double(r.p_beta), std::to_string(r.n), r.stars_beta});
            md << "| " << to_string(metric) << " | " << fmt_double(r.alpha) << r.stars_alpha
               << " | " << fmt_double(r.beta) << r.stars_beta << " | " << r.n << " | "
               << r.stars_beta << " |\n";
        } else {
            AdjustedBetaRecord rec = run_study_subset(panel, args.subset, avg_sentences);
            const RegressionResult& r = rec.regression;
            table.row({to_string(metric), fmt_double(r.alpha), fmt_double(r.beta),
                       fmt_double(r.se_alpha), fmt_double(r.se_beta), fmt_double(r.t_beta),
                       fmt_double(r.p_beta), std::to_string(r.n), r.stars_beta});
            adjusted->row({rec.subset, to_string(metric), fmt_double(rec.avg_sentences),
                           fmt_double(rec.beta_raw), fmt_double(rec.beta_adjusted), rec.stars});
            md << "| " << to_string(metric) << " | " << fmt_double(r.alpha) << r.stars_alpha
               << " | raw " << fmt_double(rec.beta_raw) << " / adj "
               << fmt_double(rec.beta_adjusted) << rec.stars << " | " << r.n << " | "
               << rec.stars << " |\n";
        }
    }
    md << "\nSignificance: `*` p<0.10, `**` p<0.05, `***` p<0.01.\n";
    write_file(out_path(args, "report.md"), md.str());
    std::cout << "study: wrote regression_table.csv\n";
}

// --- backtest -------------------------------------------------------------------

struct BacktestArgs : CommonArgs {
    std::string optimism_path;
    std::string eps_path;
    std::string prices_path;
    std::string index_path;
    std::string outcome = "car_2_60";
    std::string train;
    std::string test;
};

void cmd_backtest(const BacktestArgs& args) {
    load_config_with_env(args.config_path);
    const OutcomeMetric metric = outcome_from_string(args.outcome);
    auto eps = load_eps(args.eps_path);

    StudyArgs outcome_args;
    outcome_args.prices_path = args.prices_path;
    outcome_args.index_path = args.index_path;
    OutcomePanel outcomes = outcomes_for(outcome_args, metric, eps);
    for (const auto& skip : outcomes.skipped) std::cerr << "warning: " << skip << "\n";

    std::vector<QuarterOptimism> records;
    for (const auto& rec : load_optimism_csv(args.optimism_path)) {
        const FirmQuarter key = parse_quarter_key(rec.key);
        records.push_back({key.ticker, key.quarter, rec.optimism});
    }
    BacktestResult result = backtest(records, parse_periods(args.train),
                                     parse_periods(args.test), outcomes.values);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";

    CsvWriter trades(out_path(args, "trades.csv"));
    trades.row({"ticker", "period", "adjusted_optimism", "direction", "outcome_metric",
                "success"});
    for (const auto& t : result.trades) {
        trades.row({t.ticker, t.period.label(), fmt_double(t.adjusted_optimism),
                    to_string(t.direction), fmt_double(t.outcome_metric),
                    t.success ? "1" : "0"});
    }

    const ConfusionMatrix& m = result.confusion;
    CsvWriter conf(out_path(args, "confusion.csv"));
    conf.row({"cell", "count", "row_pct", "total_pct"});
    const char* row_names[2] = {"adjusted_positive_short", "adjusted_negative_long"};
    const char* col_names[2] = {"outcome_negative", "outcome_positive"};
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            conf.row({std::string(row_names[r]) + "_" + col_names[c],
                      std::to_string(m.counts[r][c]), fmt_double(m.row_pct[r][c]),
                      fmt_double(m.total_pct[r][c])});
        }
    }
    conf.row({"trades", std::to_string(m.trades), "", ""});
    conf.row({"accuracy", fmt_double(m.accuracy), "", ""});

    std::ostringstream md;
    md << "# Adjusted-optimism backtest (" << to_string(metric) << ")\n\n"
       << "Trades: " << m.trades << ", accuracy: " << fmt_double(m.accuracy) << "\n\n"
       << "| | " << col_names[0] << " | " << col_names[1] << " |\n|---|---|---|\n";
    for (int r = 0; r < 2; ++r) {
        md << "| " << row_names[r] << " | " << m.counts[r][0] << " (" << fmt_double(m.total_pct[r][0])
           << "%) | " << m.counts[r][1] << " (" << fmt_double(m.total_pct[r][1]) << "%) |\n";
    }
    if (!result.warnings.empty()) {
        md << "\nWarnings:\n";
        for (const auto& w : result.warnings) md << "- " << w << "\n";
    }
    write_file(out_path(args, "report.md"), md.str());
    std::cout << "backtest: " << m.trades << " trades, accuracy " << fmt_double(m.accuracy)
              << "\n";
}

// --- bench ----------------------------------------------------------------------

struct BenchArgs : CommonArgs {
    std::string corpus_path;
    uint64_t generate = 0;
    unsigned repetitions = 5;
};

void cmd_bench(const BenchArgs& args) {
    EngineConfig cfg = load_config_with_env(args.config_path);
    Engine engine = Engine::build(cfg);
    std::vector<std::string> sentences;
    if (!args.corpus_path.empty()) {
        sentences = load_lines(args.corpus_path);
    } else if (args.generate > 0) {
        sentences = generate_bench_corpus(args.generate, cfg.seed);
    } else {
        throw ConfigError("bench: pass --corpus <file> or --generate <n>");
    }
    if (sentences.empty()) throw DataError("bench: empty corpus");
    if (sentences.size() < 1000) {
        throw DataError("bench: corpus must have at least 1,000 sentences, got " +
                        std::to_string(sentences.size()));
    }
    LatencyReport report = run_bench(engine, sentences, args.repetitions);
    write_bench_csv(report, out_path(args, "bench.csv"));
    std::cout << "bench: " << report.sentences_processed << " sentences, "
              << fmt_double(report.throughput) << " sentences/sec (median of "
              << report.repetitions << " passes), p50=" << fmt_double(report.p50_us)
              << "us p95=" << fmt_double(report.p95_us) << "us p99=" << fmt_double(report.p99_us)
              << "us\n";
}

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "engine config file")->required();
    cmd->add_option("--out", args.out_dir, "output directory")->required();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"claimforge: numerical financial claim detection and market analysis"};
    app.require_subcommand(1);

    PipelineArgs pipeline_args;
    auto* pipe = app.add_subcommand("pipeline", "run the full labeling pipeline");
    add_common(pipe, pipeline_args);
    pipe->add_option("--documents", pipeline_args.documents, "documents input")->required();
    pipe->add_option("--format", pipeline_args.format, "jsonl or plaintext_dir");
    pipe->add_option("--sentiment", pipeline_args.sentiment_path, "external sentiment.csv");
    pipe->add_flag("--default-neutral", pipeline_args.default_neutral,
                   "treat uncovered sentences as NEUTRAL");
    pipe->callback([&] { cmd_pipeline(pipeline_args); });

    DocsArgs segment_args;
    auto* seg = app.add_subcommand("segment", "sentence segmentation only");
    add_common(seg, segment_args);
    seg->add_option("--documents", segment_args.documents, "documents input")->required();
    seg->add_option("--format", segment_args.format, "jsonl or plaintext_dir");
    seg->callback([&] { cmd_segment(segment_args); });

    DocsArgs filter_args;
    auto* filt = app.add_subcommand("filter", "numeric/financial filtering");
    add_common(filt, filter_args);
    filt->add_option("--documents", filter_args.documents, "documents input")->required();
    filt->add_option("--format", filter_args.format, "jsonl or plaintext_dir");
    filt->callback([&] { cmd_filter(filter_args); });

    DocsArgs label_args;
    auto* lab = app.add_subcommand("label", "weak-supervision labeling");
    add_common(lab, label_args);
    lab->add_option("--documents", label_args.documents, "documents input")->required();
    lab->add_option("--format", label_args.format, "jsonl or plaintext_dir");
    lab->callback([&] { cmd_label(label_args); });

    OptimismArgs optimism_args;
    auto* opt = app.add_subcommand("optimism", "optimism aggregation");
    add_common(opt, optimism_args);
    opt->add_option("--documents", optimism_args.documents, "documents input")->required();
    opt->add_option("--format", optimism_args.format, "jsonl or plaintext_dir");
    opt->add_option("--sentences", optimism_args.sentences_path, "sentences.jsonl")->required();
    opt->add_option("--sentiment", optimism_args.sentiment_path, "external sentiment.csv");
    opt->add_flag("--default-neutral", optimism_args.default_neutral,
                  "treat uncovered sentences as NEUTRAL");
    opt->add_option("--subset", optimism_args.subset,
                    "unfiltered, numeric, numeric_financial or in_claim");
    opt->callback([&] { cmd_optimism(optimism_args); });

    EvaluateArgs evaluate_args;
    auto* eval = app.add_subcommand("evaluate", "score predictions against gold labels");
    add_common(eval, evaluate_args);
    eval->add_option("--predictions", evaluate_args.predictions_path, "predictions.jsonl")
        ->required();
    eval->add_option("--gold", evaluate_args.gold_path, "gold.csv")->required();
    eval->callback([&] { cmd_evaluate(evaluate_args); });

    AblateArgs ablate_args;
    auto* abl = app.add_subcommand("ablate", "labeling-function-count ablation");
    add_common(abl, ablate_args);
    abl->add_option("--documents", ablate_args.documents, "documents input")->required();
    abl->add_option("--format", ablate_args.format, "jsonl or plaintext_dir");
    abl->add_option("--gold", ablate_args.gold_path, "gold.csv")->required();
    abl->callback([&] { cmd_ablate(ablate_args); });

    StudyArgs study_args;
    auto* study = app.add_subcommand("study", "optimism regression study");
    add_common(study, study_args);
    study->add_option("--optimism", study_args.optimism_path, "quarterly optimism.csv");
    study->add_option("--eps", study_args.eps_path, "eps.csv")->required();
    study->add_option("--prices", study_args.prices_path, "prices.csv");
    study->add_option("--index", study_args.index_path, "index.csv");
    study->add_option("--outcome", study_args.outcome,
                      "surprise, car_2_30, car_2_60 or all");
    study->add_option("--subset", study_args.subset,
                      "sentence subset for the adjusted-beta path");
    study->add_option("--sentences", study_args.sentences_path,
                      "sentences.jsonl (subset path)");
    study->add_option("--documents", study_args.documents, "documents input (subset path)");
    study->add_option("--format", study_args.format, "jsonl or plaintext_dir");
    study->callback([&] {
        if (study_args.subset.empty() && study_args.optimism_path.empty()) {
            throw CLI::RequiredError("--optimism");
        }
        cmd_study(study_args);
    });

    BacktestArgs backtest_args;
    auto* bt = app.add_subcommand("backtest", "adjusted-optimism trading backtest");
    add_common(bt, backtest_args);
    bt->add_option("--optimism", backtest_args.optimism_path, "quarterly optimism.csv")
        ->required();
    bt->add_option("--eps", backtest_args.eps_path, "eps.csv")->required();
    bt->add_option("--prices", backtest_args.prices_path, "prices.csv");
    bt->add_option("--index", backtest_args.index_path, "index.csv");
    bt->add_option("--outcome", backtest_args.outcome, "surprise, car_2_30 or car_2_60");
    bt->add_option("--train", backtest_args.train, "training periods, e.g. 2017-2019")
        ->required();
    bt->add_option("--test", backtest_args.test, "test periods, e.g. 2020")->required();
    bt->callback([&] { cmd_backtest(backtest_args); });

    BenchArgs bench_args;
    auto* bench = app.add_subcommand("bench", "labeling latency benchmark");
    add_common(bench, bench_args);
    bench->add_option("--corpus", bench_args.corpus_path, "one sentence per line");
    bench->add_option("--generate", bench_args.generate, "generate a synthetic corpus of n");
    bench->add_option("--repetitions", bench_args.repetitions, "timed passes (default 5)");
    bench->callback([&] { cmd_bench(bench_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return static_cast<int>(claimforge::ExitCode::usage);
    } catch (const claimforge::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return static_cast<int>(claimforge::ExitCode::usage);
    } catch (const claimforge::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return static_cast<int>(claimforge::ExitCode::data);
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return static_cast<int>(claimforge::ExitCode::internal);
    }
    return static_cast<int>(claimforge::ExitCode::ok);
}
