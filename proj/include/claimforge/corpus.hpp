#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "claimforge/core.hpp"
#include "claimforge/csv.hpp"
#include "claimforge/market.hpp"
#include "claimforge/sentiment.hpp"
#include "claimforge/text.hpp"
#include "claimforge/weaklabel.hpp"

namespace claimforge {

enum class DocumentFormat { jsonl, plaintext_dir };

namespace detail {

inline std::string json_string(const nlohmann::json& obj, const char* key,
                               const std::string& context) {
    if (!obj.contains(key) || !obj[key].is_string()) {
        throw DataError(context + ": missing or non-string field '" + std::string(key) + "'");
    }
    return obj[key].get<std::string>();
}

}  // namespace detail

// documents.jsonl: one object per line with doc_id, ticker, date, text
// required; source_kind and sector optional.
inline std::vector<Document> load_documents_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::vector<Document> docs;
    std::set<std::string> seen;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const std::string context = path + ":" + std::to_string(lineno);
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw DataError(context + ": invalid JSON (" + e.what() + ")");
        }
        if (!obj.is_object()) throw DataError(context + ": record is not a JSON object");
        Document d;
        d.doc_id = detail::json_string(obj, "doc_id", context);
        d.ticker = detail::json_string(obj, "ticker", context);
        try {
            d.period = Date::parse(detail::json_string(obj, "date", context));
        } catch (const DataError& e) {
            throw DataError(context + ": " + e.what());
        }
        d.raw_text = detail::json_string(obj, "text", context);
        if (d.raw_text.empty()) throw DataError(context + ": empty text");
        if (obj.contains("source_kind") && !obj["source_kind"].is_null()) {
            try {
                d.source_kind =
                    source_kind_from_string(detail::json_string(obj, "source_kind", context));
            } catch (const DataError& e) {
                throw DataError(context + ": " + e.what());
            }
        }
        if (obj.contains("sector") && !obj["sector"].is_null()) {
            if (!obj["sector"].is_number_integer()) {
                throw DataError(context + ": sector must be an integer 1..12");
            }
            const int sector = obj["sector"].get<int>();
            if (sector < 1 || sector > 12) {
                throw DataError(context + ": sector " + std::to_string(sector) +
                                " out of range 1..12");
            }
            d.sector = sector;
        }
        if (!seen.insert(d.doc_id).second) {
            throw DataError(context + ": duplicate doc_id '" + d.doc_id + "'");
        }
        docs.push_back(std::move(d));
    }
    std::sort(docs.begin(), docs.end(),
              [](const Document& a, const Document& b) { return a.doc_id < b.doc_id; });
    return docs;
}

// Plaintext dump: one transcript per file named TICKER_YYYY-MM-DD.txt.
inline std::vector<Document> load_documents_dir(const std::string& path) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(path)) throw DataError("'" + path + "' is not a directory");
    std::vector<Document> docs;
    for (const auto& entry : fs::directory_iterator(path)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
        const std::string stem = entry.path().stem().string();
        const auto sep = stem.rfind('_');
        if (sep == std::string::npos || sep == 0) {
            throw DataError("transcript filename '" + entry.path().filename().string() +
                            "' does not match TICKER_YYYY-MM-DD.txt");
        }
        Document d;
        d.doc_id = stem;
        d.ticker = stem.substr(0, sep);
        try {
            d.period = Date::parse(stem.substr(sep + 1));
        } catch (const DataError&) {
            throw DataError("transcript filename '" + entry.path().filename().string() +
                            "' does not match TICKER_YYYY-MM-DD.txt");
        }
        d.source_kind = SourceKind::earnings_call;
        d.raw_text = read_file(entry.path().string());
        if (d.raw_text.empty()) {
            throw DataError("transcript '" + entry.path().filename().string() + "' is empty");
        }
        docs.push_back(std::move(d));
    }
    std::sort(docs.begin(), docs.end(),
              [](const Document& a, const Document& b) { return a.doc_id < b.doc_id; });
    for (size_t i = 1; i < docs.size(); ++i) {
        if (docs[i].doc_id == docs[i - 1].doc_id) {
            throw DataError("duplicate doc_id '" + docs[i].doc_id + "'");
        }
    }
    return docs;
}

inline std::vector<Document> load_documents(const std::string& path, DocumentFormat format) {
    return format == DocumentFormat::jsonl ? load_documents_jsonl(path)
                                           : load_documents_dir(path);
}

inline nlohmann::json document_to_json(const Document& d) {
    nlohmann::json obj;
    obj["doc_id"] = d.doc_id;
    obj["source_kind"] = to_string(d.source_kind);
    obj["ticker"] = d.ticker;
    if (d.sector) obj["sector"] = *d.sector;
    obj["date"] = d.period.to_string();
    obj["text"] = d.raw_text;
    return obj;
}

inline void write_documents_jsonl(std::span<const Document> docs, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    for (const auto& d : docs) out << document_to_json(d).dump() << '\n';
}

// dictionary.txt: one term per line, blank lines skipped, case-folded and
// deduplicated. An empty result is an error: a zero-size whitelist would
// discard the whole corpus.
inline TermSet load_dictionary(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    TermSet terms;
    std::string line;
    while (std::getline(in, line)) terms.insert(line);
    if (terms.empty()) throw DataError("dictionary '" + path + "' contains no terms");
    return terms;
}

inline std::vector<std::string> load_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (!t.empty()) out.push_back(std::move(t));
    }
    return out;
}

// prices.csv: ticker,date,close. Validated, sorted by (ticker, date).
inline std::vector<MarketBar> load_prices(const std::string& path) {
    CsvReader csv(path, {"ticker", "date", "close"});
    std::vector<MarketBar> bars;
    std::set<std::pair<std::string, Date>> seen;
    for (size_t i = 0; i < csv.rows().size(); ++i) {
        const auto& row = csv.rows()[i];
        const std::string context = csv.context(i);
        MarketBar bar;
        bar.ticker = row[0];
        if (bar.ticker.empty()) throw DataError(context + ": empty ticker");
        try {
            bar.date = Date::parse(row[1]);
        } catch (const DataError& e) {
            throw DataError(context + ": " + e.what());
        }
        bar.close = parse_double(row[2], context);
        if (bar.close <= 0.0) {
            throw DataError(context + ": non-positive close " + row[2]);
        }
        if (!seen.insert({bar.ticker, bar.date}).second) {
            throw DataError(context + ": duplicate (ticker, date) " + bar.ticker + "," + row[1]);
        }
        bars.push_back(std::move(bar));
    }
    std::sort(bars.begin(), bars.end(), [](const MarketBar& a, const MarketBar& b) {
        if (a.ticker != b.ticker) return a.ticker < b.ticker;
        return a.date < b.date;
    });
    return bars;
}

// index.csv: date,close. The market benchmark series.
inline IndexSeries load_index(const std::string& path) {
    CsvReader csv(path, {"date", "close"});
    IndexSeries series;
    for (size_t i = 0; i < csv.rows().size(); ++i) {
        const auto& row = csv.rows()[i];
        const std::string context = csv.context(i);
        Date date;
        try {
            date = Date::parse(row[0]);
        } catch (const DataError& e) {
            throw DataError(context + ": " + e.what());
        }
        const double close = parse_double(row[1], context);
        if (close <= 0.0) throw DataError(context + ": non-positive close " + row[1]);
        if (!series.close_by_date.emplace(date, close).second) {
            throw DataError(context + ": duplicate date " + row[0]);
        }
    }
    return series;
}

// eps.csv: ticker,period_end,actual_eps,median_forecast_eps,quarter_end_price
inline std::vector<EpsRecord> load_eps(const std::string& path) {
    CsvReader csv(path,
                  {"ticker", "period_end", "actual_eps", "median_forecast_eps",
                   "quarter_end_price"});
    std::vector<EpsRecord> records;
    std::set<std::pair<std::string, Date>> seen;
    for (size_t i = 0; i < csv.rows().size(); ++i) {
        const auto& row = csv.rows()[i];
        const std::string context = csv.context(i);
        EpsRecord rec;
        rec.ticker = row[0];
        if (rec.ticker.empty()) throw DataError(context + ": empty ticker");
        try {
            rec.period_end = Date::parse(row[1]);
        } catch (const DataError& e) {
            throw DataError(context + ": " + e.what());
        }
        rec.actual_eps = parse_double(row[2], context);
        rec.median_forecast_eps = parse_double(row[3], context);
        rec.quarter_end_price = parse_double(row[4], context);
        if (rec.quarter_end_price <= 0.0) {
            throw DataError(context + ": non-positive quarter_end_price " + row[4]);
        }
        if (!seen.insert({rec.ticker, rec.period_end}).second) {
            throw DataError(context + ": duplicate (ticker, period_end) " + rec.ticker + "," +
                            row[1]);
        }
        records.push_back(std::move(rec));
    }
    std::sort(records.begin(), records.end(), [](const EpsRecord& a, const EpsRecord& b) {
        if (a.ticker != b.ticker) return a.ticker < b.ticker;
        return a.period_end < b.period_end;
    });
    return records;
}

// gold.csv: doc_id,sentence_index,label with label in {INCLAIM, OUTOFCLAIM}.
inline std::vector<GoldLabel> load_gold(const std::string& path) {
    CsvReader csv(path, {"doc_id", "sentence_index", "label"});
    std::vector<GoldLabel> gold;
    std::set<std::pair<std::string, int>> seen;
    for (size_t i = 0; i < csv.rows().size(); ++i) {
        const auto& row = csv.rows()[i];
        const std::string context = csv.context(i);
        GoldLabel g;
        g.doc_id = row[0];
        g.sentence_index = static_cast<int>(parse_long(row[1], context));
        if (g.sentence_index < 0) throw DataError(context + ": negative sentence_index");
        try {
            g.label = claim_from_string(row[2]);
        } catch (const DataError& e) {
            throw DataError(context + ": " + e.what());
        }
        if (!seen.insert({g.doc_id, g.sentence_index}).second) {
            throw DataError(context + ": duplicate (doc_id, sentence_index) " + g.doc_id + "," +
                            row[1]);
        }
        gold.push_back(std::move(g));
    }
    return gold;
}

// sentiment.csv: doc_id,sentence_index,label in {POSITIVE, NEGATIVE, NEUTRAL}.
inline std::vector<SentimentRecord> load_sentiment_csv(const std::string& path) {
    CsvReader csv(path, {"doc_id", "sentence_index", "label"});
    std::vector<SentimentRecord> out;
    std::set<std::pair<std::string, int>> seen;
    for (size_t i = 0; i < csv.rows().size(); ++i) {
        const auto& row = csv.rows()[i];
        const std::string context = csv.context(i);
        SentimentRecord rec;
        rec.doc_id = row[0];
        rec.sentence_index = static_cast<int>(parse_long(row[1], context));
        try {
            rec.label = sentiment_from_string(row[2]);
        } catch (const DataError& e) {
            throw DataError(context + ": " + e.what());
        }
        if (!seen.insert({rec.doc_id, rec.sentence_index}).second) {
            throw DataError(context + ": duplicate (doc_id, sentence_index)");
        }
        out.push_back(std::move(rec));
    }
    return out;
}

// optimism.csv: key,pos_in_claim,neg_in_claim,total_sentences,optimism
inline std::vector<OptimismRecord> load_optimism_csv(const std::string& path) {
    CsvReader csv(path, {"key", "pos_in_claim", "neg_in_claim", "total_sentences", "optimism"});
    std::vector<OptimismRecord> out;
    std::set<std::string> seen;
    for (size_t i = 0; i < csv.rows().size(); ++i) {
        const auto& row = csv.rows()[i];
        const std::string context = csv.context(i);
        if (!seen.insert(row[0]).second) {
            throw DataError(context + ": duplicate key '" + row[0] + "'");
        }
        OptimismRecord rec = OptimismRecord::make(
            row[0], static_cast<uint64_t>(parse_long(row[1], context)),
            static_cast<uint64_t>(parse_long(row[2], context)),
            static_cast<uint64_t>(parse_long(row[3], context)));
        // The stored value is informational; it must agree with the counts.
        const double stored = parse_double(row[4], context);
        if (std::abs(stored - rec.optimism) > 1e-6) {
            throw DataError(context + ": optimism " + row[4] +
                            " inconsistent with counts (expected " + fmt_double(rec.optimism) +
                            ")");
        }
        out.push_back(std::move(rec));
    }
    return out;
}

inline void write_optimism_csv(std::span<const OptimismRecord> records, const std::string& path) {
    CsvWriter out(path);
    out.row({"key", "pos_in_claim", "neg_in_claim", "total_sentences", "optimism"});
    for (const auto& r : records) {
        out.row({r.key, std::to_string(r.pos_in_claim), std::to_string(r.neg_in_claim),
                 std::to_string(r.total_sentences), fmt_double(r.optimism)});
    }
}

// ---------------------------------------------------------------------------
// rules.json
// ---------------------------------------------------------------------------

inline RuleSet load_rules_json(const std::string& path) {
    nlohmann::json arr;
    try {
        arr = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path + ": invalid JSON (" + e.what() + ")");
    }
    if (!arr.is_array()) throw DataError(path + ": expected a JSON array of rules");
    RuleSet rs;
    for (const auto& obj : arr) {
        if (!obj.is_object()) throw DataError(path + ": rule entries must be objects");
        RuleSpec r;
        r.rule_id = detail::json_string(obj, "rule_id", path);
        r.detector = detector_from_string(detail::json_string(obj, "detector", path));
        if (obj.contains("patterns")) {
            if (!obj["patterns"].is_array()) {
                throw DataError(path + ": rule '" + r.rule_id + "': patterns must be an array");
            }
            for (const auto& p : obj["patterns"]) {
                if (!p.is_string()) {
                    throw DataError(path + ": rule '" + r.rule_id + "': non-string pattern");
                }
                r.patterns.push_back(p.get<std::string>());
            }
        }
        if (!obj.contains("emit") || !obj["emit"].is_number_integer()) {
            throw DataError(path + ": rule '" + r.rule_id + "': missing integer 'emit'");
        }
        r.emit = vote_from_int(obj["emit"].get<int>());
        if (obj.contains("match_scope")) {
            r.match_scope = match_scope_from_string(detail::json_string(obj, "match_scope", path));
        }
        rs.rules.push_back(std::move(r));
    }
    rs.validate();
    return rs;
}

inline nlohmann::json rules_to_json(const RuleSet& rs) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rs.rules) {
        nlohmann::json obj;
        obj["rule_id"] = r.rule_id;
        obj["detector"] = to_string(r.detector);
        obj["patterns"] = r.patterns;
        obj["emit"] = vote_value(r.emit);
        obj["match_scope"] = to_string(r.match_scope);
        arr.push_back(std::move(obj));
    }
    return arr;
}

inline void write_rules_json(const RuleSet& rs, const std::string& path) {
    write_file(path, rules_to_json(rs).dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// sentences.jsonl / predictions.jsonl
// ---------------------------------------------------------------------------

inline nlohmann::json sentence_to_json(const Sentence& s) {
    nlohmann::json obj;
    obj["doc_id"] = s.doc_id;
    obj["index"] = s.index;
    obj["text"] = s.text;
    obj["begin"] = s.begin;
    obj["end"] = s.end;
    obj["is_numeric"] = s.is_numeric;
    obj["is_financial"] = s.is_financial;
    obj["claim"] = s.claim ? nlohmann::json(to_string(*s.claim)) : nlohmann::json(nullptr);
    obj["sentiment"] =
        s.sentiment ? nlohmann::json(to_string(*s.sentiment)) : nlohmann::json(nullptr);
    return obj;
}

inline void write_sentences_jsonl(std::span<const Sentence> sentences, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    for (const auto& s : sentences) out << sentence_to_json(s).dump() << '\n';
}

inline std::vector<Sentence> load_sentences_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::vector<Sentence> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const std::string context = path + ":" + std::to_string(lineno);
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw DataError(context + ": invalid JSON (" + e.what() + ")");
        }
        Sentence s;
        try {
            s.doc_id = detail::json_string(obj, "doc_id", context);
            if (!obj.contains("index") || !obj["index"].is_number_integer()) {
                throw DataError(context + ": missing integer 'index'");
            }
            s.index = obj["index"].get<int>();
            s.text = detail::json_string(obj, "text", context);
            s.begin = obj.value("begin", 0ULL);
            s.end = obj.value("end", 0ULL);
            s.is_numeric = obj.value("is_numeric", false);
            s.is_financial = obj.value("is_financial", false);
            if (obj.contains("claim") && obj["claim"].is_string()) {
                s.claim = claim_from_string(obj["claim"].get<std::string>());
            }
            if (obj.contains("sentiment") && obj["sentiment"].is_string()) {
                s.sentiment = sentiment_from_string(obj["sentiment"].get<std::string>());
            }
        } catch (const nlohmann::json::exception& e) {
            throw DataError(context + ": " + e.what());
        }
        out.push_back(std::move(s));
    }
    return out;
}

struct Prediction {
    std::string doc_id;
    int sentence_index = 0;
    TriLabel label = TriLabel::abstain;
    std::vector<Vote> votes;
};

inline void write_predictions_jsonl(std::span<const Prediction> preds, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    for (const auto& p : preds) {
        nlohmann::json obj;
        obj["doc_id"] = p.doc_id;
        obj["sentence_index"] = p.sentence_index;
        obj["label"] = to_string(p.label);
        nlohmann::json votes = nlohmann::json::array();
        for (Vote v : p.votes) votes.push_back(vote_value(v));
        obj["votes"] = std::move(votes);
        out << obj.dump() << '\n';
    }
}

inline std::vector<Prediction> load_predictions_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::vector<Prediction> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const std::string context = path + ":" + std::to_string(lineno);
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw DataError(context + ": invalid JSON (" + e.what() + ")");
        }
        Prediction p;
        try {
            p.doc_id = detail::json_string(obj, "doc_id", context);
            if (!obj.contains("sentence_index") || !obj["sentence_index"].is_number_integer()) {
                throw DataError(context + ": missing integer 'sentence_index'");
            }
            p.sentence_index = obj["sentence_index"].get<int>();
            p.label = tri_from_string(detail::json_string(obj, "label", context));
            if (obj.contains("votes")) {
                for (const auto& v : obj["votes"]) p.votes.push_back(vote_from_int(v.get<int>()));
            }
        } catch (const nlohmann::json::exception& e) {
            throw DataError(context + ": " + e.what());
        }
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace claimforge
