#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "claimforge/market.hpp"
#include "claimforge/rng.hpp"
#include "claimforge/stats.hpp"

using namespace claimforge;

namespace {

// Sequential trading calendar starting 2020-06-01; calendar gaps are
// irrelevant to the window logic, which counts bars.
Date day(int offset) {
    Date d{2020, 6, 1};
    for (int i = 0; i < offset; ++i) {
        if (d.day < Date::days_in_month(d.year, d.month)) {
            ++d.day;
        } else {
            d.day = 1;
            if (++d.month > 12) {
                d.month = 1;
                ++d.year;
            }
        }
    }
    return d;
}

std::vector<MarketBar> bars_from_returns(const std::string& ticker, double start,
                                         const std::vector<double>& returns) {
    std::vector<MarketBar> bars;
    double px = start;
    bars.push_back({ticker, day(0), px});
    for (size_t i = 0; i < returns.size(); ++i) {
        px *= 1.0 + returns[i];
        bars.push_back({ticker, day(static_cast<int>(i) + 1), px});
    }
    return bars;
}

IndexSeries index_from_returns(double start, const std::vector<double>& returns) {
    IndexSeries idx;
    double px = start;
    idx.close_by_date[day(0)] = px;
    for (size_t i = 0; i < returns.size(); ++i) {
        px *= 1.0 + returns[i];
        idx.close_by_date[day(static_cast<int>(i) + 1)] = px;
    }
    return idx;
}

// Independent extended-precision oracle: solves the 2x2 normal equations
// with Cramer's rule in long double.
std::pair<long double, long double> normal_equation_oracle(const std::vector<double>& y,
                                                           const std::vector<double>& x) {
    long double n = static_cast<long double>(y.size());
    long double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < y.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += static_cast<long double>(x[i]) * x[i];
        sxy += static_cast<long double>(x[i]) * y[i];
    }
    const long double det = n * sxx - sx * sx;
    const long double alpha = (sy * sxx - sx * sxy) / det;
    const long double beta = (n * sxy - sx * sy) / det;
    return {alpha, beta};
}

}  // namespace

TEST_CASE("earnings surprise formula") {
    EpsRecord rec{"AAPL", Date::parse("2020-03-31"), 1.10, 1.00, 50.0};
    CHECK(earnings_surprise(rec).surprise_pct == doctest::Approx(0.2));

    rec.actual_eps = rec.median_forecast_eps = 1.0;
    CHECK(earnings_surprise(rec).surprise_pct == doctest::Approx(0.0));

    EpsRecord neg{"X", Date::parse("2020-03-31"), 0.90, 1.00, 20.0};
    CHECK(earnings_surprise(neg).surprise_pct == doctest::Approx(-0.5));
}

TEST_CASE("car: hand-checked window sums") {
    auto stock = bars_from_returns("T", 100.0, {0.01, 0.02, 0.03, -0.01});
    auto index = index_from_returns(1000.0, {0.005, 0.01, 0.0, 0.0});

    CarRecord r = car(stock, index, "T", day(0), {1, 2});
    CHECK(r.car == doctest::Approx(0.015));

    // stock identical to index: car is zero
    auto same = index_from_returns(100.0, {0.01, 0.02, 0.03, -0.01});
    CHECK(car(stock, same, "T", day(0), {1, 4}).car == doctest::Approx(0.0));

    // degenerate single-day window
    CarRecord single = car(stock, index, "T", day(0), {2, 2});
    CHECK(single.car == doctest::Approx(0.02 - 0.01));
}

TEST_CASE("car: linearity across adjacent windows") {
    Rng rng(21);
    std::vector<double> sr, ir;
    for (int i = 0; i < 40; ++i) {
        sr.push_back(rng.uniform(-0.03, 0.03));
        ir.push_back(rng.uniform(-0.02, 0.02));
    }
    auto stock = bars_from_returns("T", 50.0, sr);
    auto index = index_from_returns(2000.0, ir);
    const double left = car(stock, index, "T", day(0), {2, 5}).car;
    const double right = car(stock, index, "T", day(0), {6, 9}).car;
    const double full = car(stock, index, "T", day(0), {2, 9}).car;
    CHECK(left + right == doctest::Approx(full).epsilon(1e-12));
}

TEST_CASE("car: anchoring and error paths") {
    auto stock = bars_from_returns("T", 100.0, {0.01, 0.02, 0.03});
    auto index = index_from_returns(1000.0, {0.0, 0.0, 0.0});

    // event date between trading days anchors to the next trading day
    Date missing = day(0);
    missing.day -= 1;  // 2020-05-31, before the series
    CarRecord anchored = car(stock, index, "T", missing, {1, 1});
    CHECK(anchored.car == doctest::Approx(0.01));

    // insufficient post-event data names the missing range
    CHECK_THROWS_WITH_AS(static_cast<void>(car(stock, index, "T", day(0), {2, 30})),
                         doctest::Contains("trading days"), DataError);
    // unknown ticker
    CHECK_THROWS_AS(static_cast<void>(car(stock, index, "X", day(0), {1, 2})), DataError);
    // missing benchmark date
    IndexSeries sparse;
    sparse.close_by_date[day(0)] = 1000.0;
    CHECK_THROWS_AS(static_cast<void>(car(stock, sparse, "T", day(0), {1, 2})), DataError);
    // bad window
    CHECK_THROWS_AS(static_cast<void>(car(stock, index, "T", day(0), {3, 2})), DataError);
}

TEST_CASE("ols: exact fit recovers coefficients to 1e-12") {
    std::vector<double> x = {1, 2, 3};
    std::vector<double> y = {2, 4, 6};
    RegressionResult r = ols_univariate(y, x);
    CHECK(std::abs(r.alpha) < 1e-12);
    CHECK(std::abs(r.beta - 2.0) < 1e-12);
    CHECK(r.r_squared == doctest::Approx(1.0));
    CHECK(r.p_beta == 0.0);
    CHECK(r.stars_beta == "***");
}

TEST_CASE("ols: constant outcome and error paths") {
    std::vector<double> x = {1, 2, 3, 4};
    std::vector<double> y = {5, 5, 5, 5};
    RegressionResult r = ols_univariate(y, x);
    CHECK(r.beta == doctest::Approx(0.0));
    CHECK(r.r_squared == doctest::Approx(0.0));

    std::vector<double> xc = {2, 2, 2, 2};
    CHECK_THROWS_AS(static_cast<void>(ols_univariate(y, xc)), DataError);
    std::vector<double> two = {1, 2};
    CHECK_THROWS_AS(static_cast<void>(ols_univariate(two, two)), DataError);
}

TEST_CASE("ols: noisy simulation recovers the design and matches the oracle") {
    Rng rng(777);
    const size_t n = 1000;
    std::vector<double> x, y;
    for (size_t i = 0; i < n; ++i) {
        const double xi = rng.uniform(0.0, 10.0);
        x.push_back(xi);
        y.push_back(3.0 - 2.0 * xi + rng.gaussian(0.0, 0.1));
    }
    RegressionResult r = ols_univariate(y, x);
    CHECK(r.alpha > 2.99);
    CHECK(r.alpha < 3.01);
    CHECK(r.beta > -2.01);
    CHECK(r.beta < -1.99);
    CHECK(r.stars_beta == "***");

    auto [oa, ob] = normal_equation_oracle(y, x);
    CHECK(std::abs(r.alpha - static_cast<double>(oa)) <=
          1e-9 * std::max(1.0, std::abs(static_cast<double>(oa))));
    CHECK(std::abs(r.beta - static_cast<double>(ob)) <=
          1e-9 * std::max(1.0, std::abs(static_cast<double>(ob))));

    // residuals sum to zero
    long double resid = 0;
    for (size_t i = 0; i < n; ++i) resid += y[i] - (r.alpha + r.beta * x[i]);
    CHECK(std::abs(static_cast<double>(resid)) < 1e-6);

    // shifting x by a constant moves only alpha
    std::vector<double> xs = x;
    for (auto& v : xs) v += 5.0;
    RegressionResult rs = ols_univariate(y, xs);
    CHECK(rs.beta == doctest::Approx(r.beta).epsilon(1e-9));
    CHECK(rs.alpha == doctest::Approx(r.alpha - 5.0 * r.beta).epsilon(1e-9));
}

TEST_CASE("student-t p-values at published quantiles") {
    CHECK(student_t_two_sided_p(2.228, 10.0) == doctest::Approx(0.05).epsilon(0.01));
    CHECK(student_t_two_sided_p(1.812, 10.0) == doctest::Approx(0.10).epsilon(0.01));
    CHECK(student_t_two_sided_p(3.169, 10.0) == doctest::Approx(0.01).epsilon(0.01));
    CHECK(student_t_two_sided_p(1.960, 100000.0) == doctest::Approx(0.05).epsilon(0.01));
    CHECK(student_t_two_sided_p(0.0, 5.0) == doctest::Approx(1.0));
    CHECK(significance_stars(0.005) == "***");
    CHECK(significance_stars(0.02) == "**");
    CHECK(significance_stars(0.07) == "*");
    CHECK(significance_stars(0.2) == "");
}

TEST_CASE("standardize") {
    std::vector<double> v = {0.0, 2.0};
    auto z = standardize(v);
    CHECK(z[0] == doctest::Approx(-0.70710678));
    CHECK(z[1] == doctest::Approx(+0.70710678));

    // standardized input is unchanged up to rounding
    auto zz = standardize(z);
    CHECK(zz[0] == doctest::Approx(z[0]));
    CHECK(zz[1] == doctest::Approx(z[1]));

    std::vector<double> constant = {3.0, 3.0, 3.0};
    CHECK_THROWS_AS(static_cast<void>(standardize(constant)), DataError);
    std::vector<double> one = {1.0};
    CHECK_THROWS_AS(static_cast<void>(standardize(one)), DataError);

    Rng rng(5);
    std::vector<double> big;
    for (int i = 0; i < 200; ++i) big.push_back(rng.uniform(-40.0, 90.0));
    auto zbig = standardize(big);
    CHECK(mean(zbig) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(sample_sd(zbig) == doctest::Approx(1.0));
}

TEST_CASE("run_study recovers an exact synthetic panel") {
    // optimism -> outcome wired as y = 0.17 - 1.99 x
    StudyPanel panel;
    const double xs[] = {-2.0, -0.5, 0.0, 1.0, 2.5, 4.0};
    for (double x : xs) {
        panel.optimism.push_back(x);
        panel.outcome.push_back(0.17 - 1.99 * x);
    }
    RegressionResult r = run_study(panel);
    CHECK(r.alpha == doctest::Approx(0.17).epsilon(1e-10));
    CHECK(r.beta == doctest::Approx(-1.99).epsilon(1e-10));

    StudyPanel tiny;
    tiny.optimism = {1.0, 2.0};
    tiny.outcome = {1.0, 2.0};
    CHECK_THROWS_AS(static_cast<void>(run_study(tiny)), DataError);
}

TEST_CASE("run_study: shuffled outcomes are rarely significant") {
    Rng rng(31);
    const size_t n = 60;
    std::vector<double> optimism, outcome;
    for (size_t i = 0; i < n; ++i) {
        optimism.push_back(rng.uniform(-5.0, 5.0));
        outcome.push_back(rng.gaussian(0.0, 1.0));
    }
    int insignificant = 0;
    std::vector<double> shuffled = outcome;
    for (int trial = 0; trial < 100; ++trial) {
        for (size_t i = shuffled.size(); i > 1; --i) {
            std::swap(shuffled[i - 1], shuffled[rng.next_below(i)]);
        }
        StudyPanel panel;
        panel.optimism = optimism;
        panel.outcome = shuffled;
        if (run_study(panel).p_beta > 0.10) ++insignificant;
    }
    CHECK(insignificant >= 85);
}

TEST_CASE("run_study_subset: adjusted beta identity") {
    Rng rng(8);
    StudyPanel panel;
    for (int i = 0; i < 30; ++i) {
        const double x = rng.uniform(-10.0, 30.0);
        panel.optimism.push_back(x);
        panel.outcome.push_back(0.4 - 0.8 * x + rng.gaussian(0.0, 0.5));
    }
    AdjustedBetaRecord rec = run_study_subset(panel, "numeric", 21.6);
    CHECK(rec.beta_adjusted == doctest::Approx(rec.beta_raw * 21.6));
    CHECK(rec.avg_sentences == doctest::Approx(21.6));
    CHECK(rec.subset == "numeric");
    CHECK(rec.stars == rec.regression.stars_beta);
}

TEST_CASE("build_outcomes and join_panel") {
    std::vector<EpsRecord> eps = {
        {"A", Date::parse("2020-03-31"), 1.10, 1.00, 50.0},
        {"B", Date::parse("2020-03-31"), 0.90, 1.00, 20.0},
    };
    OutcomePanel outcomes = build_outcomes(eps, {}, IndexSeries{}, OutcomeMetric::surprise);
    REQUIRE(outcomes.values.size() == 2);
    CHECK(outcomes.values.at({"A", {2020, 1}}) == doctest::Approx(0.2));

    std::vector<OptimismRecord> optimism = {
        OptimismRecord::make("A:2020Q1", 2, 0, 10),
        OptimismRecord::make("B:2020Q1", 0, 2, 10),
        OptimismRecord::make("C:2020Q1", 1, 0, 10),  // no outcome
    };
    StudyPanel panel = join_panel(optimism, outcomes);
    CHECK(panel.optimism.size() == 2);
    CHECK(panel.unmatched_optimism == 1);

    CHECK_THROWS_AS(static_cast<void>(parse_quarter_key("notakey")), DataError);
    CHECK(parse_quarter_key("BRK:B:2020Q3").ticker == "BRK:B");
}

namespace {

BacktestResult tiny_backtest(double outcome_for_acme) {
    std::vector<QuarterOptimism> records = {
        {"ACME", {2019, 1}, 5.0},
        {"ACME", {2019, 2}, 5.0},
        {"ACME", {2020, 1}, 3.0},  // adjusted -2 -> long
        {"NEWCO", {2020, 1}, 4.0},  // no training history -> skipped
    };
    std::set<Quarter> train = {{2019, 1}, {2019, 2}, {2019, 3}, {2019, 4}};
    std::set<Quarter> test = {{2020, 1}};
    std::map<FirmQuarter, double> outcomes = {
        {{"ACME", {2020, 1}}, outcome_for_acme},
        {{"NEWCO", {2020, 1}}, 1.0},
    };
    return backtest(records, train, test, outcomes);
}

}  // namespace

TEST_CASE("backtest: sign rule, skips and success") {
    BacktestResult res = tiny_backtest(0.01);
    REQUIRE(res.trades.size() == 1);
    CHECK(res.trades[0].ticker == "ACME");
    CHECK(res.trades[0].adjusted_optimism == doctest::Approx(-2.0));
    CHECK(res.trades[0].direction == TradeDirection::long_position);
    CHECK(res.trades[0].success);
    REQUIRE(res.warnings.size() == 1);
    CHECK(res.warnings[0].find("NEWCO") != std::string::npos);
    CHECK(res.confusion.accuracy == doctest::Approx(1.0));

    // zero outcome counts as failure
    CHECK_FALSE(tiny_backtest(0.0).trades[0].success);
}

TEST_CASE("backtest: guard rails") {
    std::vector<QuarterOptimism> records = {{"A", {2019, 1}, 1.0}, {"A", {2020, 1}, 1.0}};
    std::map<FirmQuarter, double> outcomes = {{{"A", {2020, 1}}, 1.0}};
    std::set<Quarter> train = {{2019, 1}};
    std::set<Quarter> overlap = {{2019, 1}, {2020, 1}};
    CHECK_THROWS_AS(static_cast<void>(backtest(records, train, overlap, outcomes)), DataError);
    CHECK_THROWS_AS(static_cast<void>(backtest(records, train, {}, outcomes)), DataError);

    // zero adjusted optimism: no trade executed
    BacktestResult res = backtest(records, train, {{2020, 1}}, outcomes);
    CHECK(res.trades.empty());
    CHECK(res.confusion.trades == 0);
}

TEST_CASE("backtest: outcome negation swaps every success flag") {
    Rng rng(17);
    std::vector<QuarterOptimism> records;
    std::map<FirmQuarter, double> outcomes;
    std::set<Quarter> train = {{2019, 1}};
    std::set<Quarter> test = {{2020, 1}};
    for (int f = 0; f < 40; ++f) {
        const std::string tk = "F" + std::to_string(f);
        records.push_back({tk, {2019, 1}, rng.uniform(-5.0, 5.0)});
        records.push_back({tk, {2020, 1}, rng.uniform(-5.0, 5.0)});
        double y = rng.uniform(-0.2, 0.2);
        if (y == 0.0) y = 0.01;
        outcomes[{tk, {2020, 1}}] = y;
    }
    BacktestResult base = backtest(records, train, test, outcomes);
    std::map<FirmQuarter, double> negated;
    for (const auto& [k, v] : outcomes) negated[k] = -v;
    BacktestResult flipped = backtest(records, train, test, negated);
    REQUIRE(base.trades.size() == flipped.trades.size());
    for (size_t i = 0; i < base.trades.size(); ++i) {
        CHECK(base.trades[i].success != flipped.trades[i].success);
    }
}

TEST_CASE("backtest: no look-ahead (test records never move the training mean)") {
    Rng rng(23);
    std::vector<QuarterOptimism> records;
    std::map<FirmQuarter, double> outcomes;
    std::set<Quarter> train = {{2019, 1}, {2019, 2}};
    std::set<Quarter> test = {{2020, 1}, {2020, 2}};
    for (int f = 0; f < 10; ++f) {
        const std::string tk = "F" + std::to_string(f);
        records.push_back({tk, {2019, 1}, rng.uniform(0.0, 10.0)});
        records.push_back({tk, {2019, 2}, rng.uniform(0.0, 10.0)});
        records.push_back({tk, {2020, 1}, rng.uniform(0.0, 10.0)});
        records.push_back({tk, {2020, 2}, rng.uniform(0.0, 10.0)});
        outcomes[{tk, {2020, 1}}] = rng.uniform(-1.0, 1.0);
        outcomes[{tk, {2020, 2}}] = rng.uniform(-1.0, 1.0);
    }
    BacktestResult base = backtest(records, train, test, outcomes);
    std::map<std::pair<std::string, Quarter>, double> base_adjusted;
    for (const auto& t : base.trades) {
        base_adjusted[{t.ticker, t.period}] = t.adjusted_optimism;
    }
    // delete each test-period record in turn: surviving trades keep their
    // adjusted optimism bit for bit
    for (size_t victim = 0; victim < records.size(); ++victim) {
        if (!test.count(records[victim].quarter)) continue;
        std::vector<QuarterOptimism> mutated = records;
        mutated.erase(mutated.begin() + static_cast<long>(victim));
        BacktestResult res = backtest(mutated, train, test, outcomes);
        for (const auto& t : res.trades) {
            auto it = base_adjusted.find({t.ticker, t.period});
            REQUIRE(it != base_adjusted.end());
            CHECK(t.adjusted_optimism == it->second);
        }
    }
}

TEST_CASE("confusion matrix tallies and normalizations") {
    Rng rng(43);
    std::vector<TradeRecord> trades;
    for (int i = 0; i < 257; ++i) {
        TradeRecord t;
        t.ticker = "T" + std::to_string(i);
        t.period = {2020, 1};
        t.adjusted_optimism = rng.uniform(-1.0, 1.0);
        if (t.adjusted_optimism == 0.0) t.adjusted_optimism = 0.5;
        t.direction = t.adjusted_optimism > 0 ? TradeDirection::short_position
                                              : TradeDirection::long_position;
        t.outcome_metric = rng.uniform(-1.0, 1.0);
        t.success = t.direction == TradeDirection::short_position ? t.outcome_metric < 0
                                                                  : t.outcome_metric > 0;
        trades.push_back(t);
    }
    ConfusionMatrix m = ConfusionMatrix::from_trades(trades);
    CHECK(m.counts[0][0] + m.counts[0][1] + m.counts[1][0] + m.counts[1][1] == trades.size());
    CHECK(m.trades == trades.size());
    for (int r = 0; r < 2; ++r) {
        if (m.counts[r][0] + m.counts[r][1] > 0) {
            CHECK(m.row_pct[r][0] + m.row_pct[r][1] == doctest::Approx(100.0).epsilon(1e-4));
        }
    }
    CHECK(m.total_pct[0][0] + m.total_pct[0][1] + m.total_pct[1][0] + m.total_pct[1][1] ==
          doctest::Approx(100.0).epsilon(1e-4));
    uint64_t wins = 0;
    for (const auto& t : trades) wins += t.success ? 1 : 0;
    CHECK(m.accuracy == doctest::Approx(static_cast<double>(wins) / trades.size()));
}
