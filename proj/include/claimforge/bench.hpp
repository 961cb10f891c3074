#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "claimforge/csv.hpp"
#include "claimforge/pipeline.hpp"
#include "claimforge/rng.hpp"
#include "claimforge/sentiment.hpp"
#include "claimforge/textproc.hpp"
#include "claimforge/weaklabel.hpp"

namespace claimforge {

// Deterministic synthetic corpus for throughput runs: a mix of forecasts,
// past-tense facts, numeric-only and chatter sentences with randomized
// figures.
inline std::vector<std::string> generate_bench_corpus(size_t n, uint64_t seed) {
    static const char* tickers[] = {"acme", "globex", "initech", "umbrella", "stark",
                                    "wayne", "hooli",  "vandelay", "wonka",   "tyrell"};
    static const char* metrics[] = {"revenue",       "free cash flow", "operating income",
                                    "gross margin",  "ebitda",         "capital expenditures",
                                    "net income",    "comparable sales"};
    Rng rng(seed);
    std::vector<std::string> out;
    out.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        const char* tk = tickers[rng.next_below(10)];
        const char* metric = metrics[rng.next_below(8)];
        const uint64_t dollars = 1 + rng.next_below(9999);
        const uint64_t pct_x10 = 1 + rng.next_below(300);
        char pct[16];
        std::snprintf(pct, sizeof(pct), "%llu.%llu",
                      static_cast<unsigned long long>(pct_x10 / 10),
                      static_cast<unsigned long long>(pct_x10 % 10));
        std::string s;
        switch (rng.next_below(6)) {
            case 0:
                s = "we expect " + std::string(metric) + " of $" + std::to_string(dollars) +
                    " million for " + tk + " next quarter.";
                break;
            case 1:
                s = std::string(metric) + " is likely to grow " + pct + "% at " + tk +
                    " this year.";
                break;
            case 2:
                s = std::string(metric) + " was $" + std::to_string(dollars) + " million, up " +
                    pct + "% year over year.";
                break;
            case 3:
                s = tk + std::string(" recorded ") + metric + " of $" + std::to_string(dollars) +
                    " million.";
                break;
            case 4:
                s = "the team hired " + std::to_string(dollars) + " engineers across " + tk +
                    " offices.";
                break;
            default:
                s = std::string(metric) + " reached $" + std::to_string(dollars) +
                    " million at " + tk + ".";
                break;
        }
        out.push_back(std::move(s));
    }
    return out;
}

// Per-sentence latency distribution plus label tallies. Timing fields vary
// run to run; everything else is a pure function of the corpus and engine.
struct LatencyReport {
    uint64_t sentences_processed = 0;
    unsigned repetitions = 0;
    double wall_time_seconds = 0.0;  // median over repetitions
    double throughput = 0.0;         // sentences / median wall time
    double p50_us = 0.0;
    double p95_us = 0.0;
    double p99_us = 0.0;
    uint64_t in_claim = 0;
    uint64_t out_of_claim = 0;
    uint64_t abstained = 0;
    uint64_t numeric_financial = 0;
};

// Times the end-to-end per-sentence labeling path (numeric filter, financial
// filter, votes, aggregation). One untimed warm-up pass runs first; each of
// `repetitions` timed passes contributes a wall time, and per-sentence
// latencies pool across all timed passes.
inline LatencyReport run_bench(const Engine& engine, std::span<const std::string> sentences,
                               unsigned repetitions) {
    if (sentences.empty()) throw DataError("bench: empty corpus");
    if (repetitions == 0) throw DataError("bench: repetitions must be >= 1");
    using clock = std::chrono::steady_clock;

    LatencyReport report;
    report.sentences_processed = sentences.size();
    report.repetitions = repetitions;

    auto label_one = [&](const std::string& text, bool count) {
        if (!is_numeric_sentence(text, engine.config.currency_symbols)) return;
        if (!is_financial_sentence(text, engine.dictionary)) return;
        if (count) ++report.numeric_financial;
        const auto votes = engine.labeler.vote_vector(text);
        TriLabel label;
        if (engine.config.aggregator == Aggregator::sme) {
            label = tri_of(aggregate_sme(votes));
        } else {
            label = aggregate_majority(votes);
        }
        if (!count) return;
        switch (label) {
            case TriLabel::in_claim: ++report.in_claim; break;
            case TriLabel::out_of_claim: ++report.out_of_claim; break;
            case TriLabel::abstain: ++report.abstained; break;
        }
    };

    // warm-up (excluded from timing and tallies)
    for (const auto& s : sentences) label_one(s, false);

    std::vector<double> walls;
    std::vector<double> latencies_us;
    latencies_us.reserve(sentences.size() * repetitions);
    for (unsigned rep = 0; rep < repetitions; ++rep) {
        const bool count = rep == 0;  // tally labels once
        const auto pass_start = clock::now();
        for (const auto& s : sentences) {
            const auto t0 = clock::now();
            label_one(s, count);
            const auto t1 = clock::now();
            latencies_us.push_back(
                std::chrono::duration<double, std::micro>(t1 - t0).count());
        }
        const auto pass_end = clock::now();
        walls.push_back(std::chrono::duration<double>(pass_end - pass_start).count());
    }

    std::sort(walls.begin(), walls.end());
    report.wall_time_seconds = walls[walls.size() / 2];
    report.throughput = report.wall_time_seconds > 0.0
                            ? static_cast<double>(sentences.size()) / report.wall_time_seconds
                            : 0.0;
    std::sort(latencies_us.begin(), latencies_us.end());
    auto pct = [&](double q) {
        const size_t idx = std::min(latencies_us.size() - 1,
                                    static_cast<size_t>(q * static_cast<double>(latencies_us.size())));
        return latencies_us[idx];
    };
    report.p50_us = pct(0.50);
    report.p95_us = pct(0.95);
    report.p99_us = pct(0.99);
    return report;
}

inline void write_bench_csv(const LatencyReport& r, const std::string& path) {
    CsvWriter out(path);
    out.row({"sentences_processed", "repetitions", "wall_time_seconds", "throughput_per_sec",
             "p50_us", "p95_us", "p99_us", "numeric_financial", "in_claim", "out_of_claim",
             "abstained"});
    out.row({std::to_string(r.sentences_processed), std::to_string(r.repetitions),
             fmt_double(r.wall_time_seconds), fmt_double(r.throughput), fmt_double(r.p50_us),
             fmt_double(r.p95_us), fmt_double(r.p99_us), std::to_string(r.numeric_financial),
             std::to_string(r.in_claim), std::to_string(r.out_of_claim),
             std::to_string(r.abstained)});
}

}  // namespace claimforge
