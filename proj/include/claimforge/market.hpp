#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "claimforge/core.hpp"
#include "claimforge/date.hpp"
#include "claimforge/sentiment.hpp"
#include "claimforge/stats.hpp"

namespace claimforge {

// ---------------------------------------------------------------------------
// Earnings surprise
// ---------------------------------------------------------------------------

// surprise_pct = 100 * (actual - median forecast) / quarter-end price
struct SurpriseRecord {
    std::string ticker;
    Date period_end;
    double surprise_pct = 0.0;
};

inline SurpriseRecord earnings_surprise(const EpsRecord& eps) {
    if (eps.quarter_end_price <= 0.0) {
        throw DataError("earnings_surprise: non-positive quarter_end_price for " + eps.ticker);
    }
    return {eps.ticker, eps.period_end,
            100.0 * (eps.actual_eps - eps.median_forecast_eps) / eps.quarter_end_price};
}

// ---------------------------------------------------------------------------
// Event-window cumulative abnormal return
// ---------------------------------------------------------------------------

struct EventWindow {
    int start_offset = 2;  // trading days after the event
    int end_offset = 30;

    void validate() const {
        if (start_offset < 1 || end_offset < start_offset) {
            throw DataError("invalid event window [" + std::to_string(start_offset) + "," +
                            std::to_string(end_offset) + "]");
        }
    }
};

struct CarRecord {
    std::string ticker;
    Date event_date;
    EventWindow window;
    double car = 0.0;  // sum of daily (stock - benchmark) simple returns
};

// Price history for one ticker, sorted by date, plus a benchmark close series
// keyed by date.
struct IndexSeries {
    std::map<Date, double> close_by_date;

    double at(const Date& d) const {
        auto it = close_by_date.find(d);
        if (it == close_by_date.end()) {
            throw DataError("benchmark index has no close for " + d.to_string());
        }
        return it->second;
    }
};

// Market-adjusted abnormal returns: daily stock simple return minus the
// benchmark simple return over the same calendar interval. Offsets count the
// stock's own trading days; the event anchors to the next trading day when
// the market was closed on event_date.
inline CarRecord car(std::span<const MarketBar> stock_bars, const IndexSeries& index,
                     const std::string& ticker, const Date& event_date, EventWindow window) {
    window.validate();
    std::vector<const MarketBar*> bars;
    for (const auto& b : stock_bars) {
        if (b.ticker == ticker) bars.push_back(&b);
    }
    if (bars.empty()) throw DataError("car: no price data for " + ticker);
    auto anchor = std::lower_bound(bars.begin(), bars.end(), event_date,
                                   [](const MarketBar* b, const Date& d) { return b->date < d; });
    if (anchor == bars.end()) {
        throw DataError("car: no trading day on or after " + event_date.to_string() + " for " +
                        ticker);
    }
    const long i0 = anchor - bars.begin();
    const long need_from = i0 + window.start_offset - 1;
    const long need_to = i0 + window.end_offset;
    if (need_from < 0 || need_to >= static_cast<long>(bars.size())) {
        throw DataError("car: " + ticker + " needs trading days +" +
                        std::to_string(window.start_offset - 1) + "..+" +
                        std::to_string(window.end_offset) + " around " + event_date.to_string() +
                        "; price series ends " + bars.back()->date.to_string());
    }
    double sum = 0.0;
    for (int t = window.start_offset; t <= window.end_offset; ++t) {
        const MarketBar* cur = bars[i0 + t];
        const MarketBar* prev = bars[i0 + t - 1];
        const double r_stock = cur->close / prev->close - 1.0;
        const double r_index = index.at(cur->date) / index.at(prev->date) - 1.0;
        sum += r_stock - r_index;
    }
    return {ticker, event_date, window, sum};
}

// ---------------------------------------------------------------------------
// Panel construction and the optimism regression
// ---------------------------------------------------------------------------

enum class OutcomeMetric { surprise, car_2_30, car_2_60 };

inline std::string to_string(OutcomeMetric m) {
    switch (m) {
        case OutcomeMetric::surprise: return "surprise";
        case OutcomeMetric::car_2_30: return "car_2_30";
        default: return "car_2_60";
    }
}

inline OutcomeMetric outcome_from_string(const std::string& s) {
    if (s == "surprise") return OutcomeMetric::surprise;
    if (s == "car_2_30") return OutcomeMetric::car_2_30;
    if (s == "car_2_60") return OutcomeMetric::car_2_60;
    throw DataError("unknown outcome '" + s + "' (expected surprise, car_2_30 or car_2_60)");
}

inline EventWindow window_of(OutcomeMetric m) {
    return m == OutcomeMetric::car_2_60 ? EventWindow{2, 60} : EventWindow{2, 30};
}

struct FirmQuarter {
    std::string ticker;
    Quarter quarter;

    auto operator<=>(const FirmQuarter&) const = default;
};

// Outcome value per (ticker, quarter). CAR events anchor at the EPS record's
// period_end; records whose CAR window cannot be computed are skipped and
// reported.
struct OutcomePanel {
    std::map<FirmQuarter, double> values;
    std::vector<std::string> skipped;  // human-readable skip reasons
};

inline OutcomePanel build_outcomes(std::span<const EpsRecord> eps,
                                   std::span<const MarketBar> prices, const IndexSeries& index,
                                   OutcomeMetric metric) {
    OutcomePanel panel;
    for (const auto& rec : eps) {
        const FirmQuarter key{rec.ticker, Quarter::of(rec.period_end)};
        if (metric == OutcomeMetric::surprise) {
            panel.values[key] = earnings_surprise(rec).surprise_pct;
            continue;
        }
        try {
            panel.values[key] =
                car(prices, index, rec.ticker, rec.period_end, window_of(metric)).car;
        } catch (const DataError& e) {
            panel.skipped.push_back(std::string(e.what()));
        }
    }
    return panel;
}

// Parses an optimism key of the form "TICKER:YYYYQn".
inline FirmQuarter parse_quarter_key(const std::string& key) {
    const auto pos = key.rfind(':');
    if (pos == std::string::npos || pos == 0) {
        throw DataError("optimism key '" + key + "' is not quarter-keyed (TICKER:YYYYQn)");
    }
    return {key.substr(0, pos), Quarter::parse(key.substr(pos + 1))};
}

struct StudyPanel {
    std::vector<FirmQuarter> keys;
    std::vector<double> optimism;
    std::vector<double> outcome;
    size_t unmatched_optimism = 0;
};

inline StudyPanel join_panel(std::span<const OptimismRecord> optimism,
                             const OutcomePanel& outcomes) {
    StudyPanel panel;
    for (const auto& rec : optimism) {
        const FirmQuarter key = parse_quarter_key(rec.key);
        auto it = outcomes.values.find(key);
        if (it == outcomes.values.end()) {
            ++panel.unmatched_optimism;
            continue;
        }
        panel.keys.push_back(key);
        panel.optimism.push_back(rec.optimism);
        panel.outcome.push_back(it->second);
    }
    return panel;
}

// Main regression: outcome on raw optimism.
inline RegressionResult run_study(const StudyPanel& panel) {
    if (panel.optimism.size() < 3) {
        throw DataError("run_study: joined panel has fewer than 3 observations");
    }
    return ols_univariate(panel.outcome, panel.optimism);
}

// Subset ablation path: optimism is standardized before the regression and
// the coefficient is scaled by the average subset sentence count. Both the
// raw and the adjusted coefficient are kept so the adjustment direction is
// auditable.
struct AdjustedBetaRecord {
    std::string subset;
    double avg_sentences = 0.0;
    double beta_raw = 0.0;
    double beta_adjusted = 0.0;  // beta_raw * avg_sentences
    std::string stars;
    RegressionResult regression;
};

inline AdjustedBetaRecord run_study_subset(const StudyPanel& panel, const std::string& subset_name,
                                           double avg_sentences) {
    if (panel.optimism.size() < 3) {
        throw DataError("run_study_subset: joined panel has fewer than 3 observations");
    }
    const std::vector<double> z = standardize(panel.optimism);
    RegressionResult reg = ols_univariate(panel.outcome, z);
    AdjustedBetaRecord rec;
    rec.subset = subset_name;
    rec.avg_sentences = avg_sentences;
    rec.beta_raw = reg.beta;
    rec.beta_adjusted = reg.beta * avg_sentences;
    rec.stars = reg.stars_beta;
    rec.regression = std::move(reg);
    return rec;
}

// ---------------------------------------------------------------------------
// Adjusted-optimism trading backtest
// ---------------------------------------------------------------------------

enum class TradeDirection { short_position, long_position };

inline std::string to_string(TradeDirection d) {
    return d == TradeDirection::short_position ? "short" : "long";
}

struct TradeRecord {
    std::string ticker;
    Quarter period;
    double adjusted_optimism = 0.0;
    TradeDirection direction = TradeDirection::long_position;
    double outcome_metric = 0.0;
    bool success = false;
};

// 2x2 grid: rows by adjusted-optimism sign (positive -> short, negative ->
// long), columns by outcome sign. A zero outcome is a failed trade and lands
// in the failing column for its row.
struct ConfusionMatrix {
    // [row][col]: row 0 = adjusted > 0 (short), row 1 = adjusted < 0 (long);
    // col 0 = outcome negative, col 1 = outcome positive.
    uint64_t counts[2][2] = {{0, 0}, {0, 0}};
    double row_pct[2][2] = {{0, 0}, {0, 0}};
    double total_pct[2][2] = {{0, 0}, {0, 0}};
    uint64_t trades = 0;
    double accuracy = 0.0;

    static ConfusionMatrix from_trades(std::span<const TradeRecord> trades) {
        ConfusionMatrix m;
        uint64_t wins = 0;
        for (const auto& t : trades) {
            const int row = t.direction == TradeDirection::short_position ? 0 : 1;
            int col;
            if (t.success) {
                col = row == 0 ? 0 : 1;
            } else {
                col = row == 0 ? 1 : 0;
            }
            ++m.counts[row][col];
            if (t.success) ++wins;
        }
        m.trades = trades.size();
        m.accuracy = m.trades ? static_cast<double>(wins) / m.trades : 0.0;
        for (int r = 0; r < 2; ++r) {
            const uint64_t row_total = m.counts[r][0] + m.counts[r][1];
            for (int c = 0; c < 2; ++c) {
                m.row_pct[r][c] = row_total ? 100.0 * m.counts[r][c] / row_total : 0.0;
                m.total_pct[r][c] = m.trades ? 100.0 * m.counts[r][c] / m.trades : 0.0;
            }
        }
        return m;
    }
};

struct QuarterOptimism {
    std::string ticker;
    Quarter quarter;
    double optimism = 0.0;
};

struct BacktestResult {
    std::vector<TradeRecord> trades;
    ConfusionMatrix confusion;
    std::vector<std::string> warnings;  // firms skipped for missing history etc.
};

// Bias-corrected sign strategy. The firm's mean training-period optimism is
// subtracted from each test-period score; positive adjusted optimism is
// shorted, negative is bought, zero is not traded. A short succeeds iff the
// outcome is negative, a long iff positive; a zero outcome fails. Test firms
// without training history are skipped with a warning.
inline BacktestResult backtest(std::span<const QuarterOptimism> optimism_by_firm,
                               const std::set<Quarter>& train_periods,
                               const std::set<Quarter>& test_periods,
                               const std::map<FirmQuarter, double>& outcome_metric) {
    for (const auto& q : train_periods) {
        if (test_periods.count(q)) {
            throw DataError("backtest: period " + q.label() + " is in both train and test sets");
        }
    }
    if (test_periods.empty()) throw DataError("backtest: empty test period set");

    std::map<std::string, std::pair<double, uint64_t>> train_sums;
    std::vector<const QuarterOptimism*> test_records;
    for (const auto& rec : optimism_by_firm) {
        if (train_periods.count(rec.quarter)) {
            auto& [sum, n] = train_sums[rec.ticker];
            sum += rec.optimism;
            ++n;
        } else if (test_periods.count(rec.quarter)) {
            test_records.push_back(&rec);
        }
    }
    if (test_records.empty()) throw DataError("backtest: no optimism records in test periods");

    BacktestResult result;
    std::set<std::string> warned;
    for (const QuarterOptimism* rec : test_records) {
        auto it = train_sums.find(rec->ticker);
        if (it == train_sums.end()) {
            if (warned.insert(rec->ticker).second) {
                result.warnings.push_back("skipping " + rec->ticker +
                                          ": no training-period optimism");
            }
            continue;
        }
        const double train_mean = it->second.first / static_cast<double>(it->second.second);
        const double adjusted = rec->optimism - train_mean;
        if (adjusted == 0.0) continue;  // no trade

        auto out_it = outcome_metric.find({rec->ticker, rec->quarter});
        if (out_it == outcome_metric.end()) {
            result.warnings.push_back("skipping " + rec->ticker + " " + rec->quarter.label() +
                                      ": no outcome value");
            continue;
        }
        TradeRecord trade;
        trade.ticker = rec->ticker;
        trade.period = rec->quarter;
        trade.adjusted_optimism = adjusted;
        trade.direction =
            adjusted > 0.0 ? TradeDirection::short_position : TradeDirection::long_position;
        trade.outcome_metric = out_it->second;
        trade.success = trade.direction == TradeDirection::short_position
                            ? trade.outcome_metric < 0.0
                            : trade.outcome_metric > 0.0;
        result.trades.push_back(std::move(trade));
    }
    std::sort(result.trades.begin(), result.trades.end(),
              [](const TradeRecord& a, const TradeRecord& b) {
                  if (a.ticker != b.ticker) return a.ticker < b.ticker;
                  return a.period < b.period;
              });
    result.confusion = ConfusionMatrix::from_trades(result.trades);
    return result;
}

}  // namespace claimforge
