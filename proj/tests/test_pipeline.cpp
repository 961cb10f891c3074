#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "claimforge/bench.hpp"
#include "claimforge/config.hpp"
#include "claimforge/pipeline.hpp"
#include "gold_suite.hpp"

using namespace claimforge;
namespace fs = std::filesystem;

namespace {

const std::string kDataDir = CLAIMFORGE_DATA_DIR;

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("claimforge_pipe_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name, const std::string& content) const {
        const std::string p = (path / name).string();
        std::ofstream out(p, std::ios::binary);
        out << content;
        return p;
    }
};

EngineConfig shipped_config() { return EngineConfig::load(kDataDir + "/config.json"); }

std::vector<Document> curated_docs() {
    std::vector<Document> docs;
    std::string text;
    for (const auto& g : testgold::curated_six()) {
        text += g.text;
        text += '\n';
    }
    Document d;
    d.doc_id = "curated";
    d.ticker = "ACME";
    d.period = Date::parse("2020-02-05");
    d.raw_text = text;
    docs.push_back(std::move(d));
    return docs;
}

}  // namespace

TEST_CASE("EngineConfig loads the shipped config with relative paths") {
    EngineConfig cfg = shipped_config();
    CHECK(!cfg.dictionary_path.empty());
    CHECK(!cfg.rules_path.empty());
    CHECK(cfg.aggregator == Aggregator::sme);
    CHECK(cfg.parallelism == 1);
    CHECK(cfg.currency_symbols.size() == 4);
    Engine engine = Engine::build(cfg);
    CHECK(engine.lexicon.has_value());
    CHECK(engine.labeler.rules().size() == 26);
}

TEST_CASE("EngineConfig rejects missing files and bad values") {
    TempDir tmp;
    const std::string missing =
        tmp.file("bad.json", R"({"dictionary": "does_not_exist.txt"})");
    CHECK_THROWS_AS(static_cast<void>(EngineConfig::load(missing)), ConfigError);

    const std::string bad_agg = tmp.file("agg.json", R"({"aggregator": "consensus"})");
    CHECK_THROWS_AS(static_cast<void>(EngineConfig::load(bad_agg)), ConfigError);

    const std::string bad_par = tmp.file("par.json", R"({"parallelism": 0})");
    CHECK_THROWS_AS(static_cast<void>(EngineConfig::load(bad_par)), ConfigError);

    const std::string not_json = tmp.file("nj.json", "not json at all");
    CHECK_THROWS_AS(static_cast<void>(EngineConfig::load(not_json)), ConfigError);

    // financial filter without a dictionary cannot build an engine
    const std::string no_dict = tmp.file("nd.json", R"({"filters": {"financial": true}})");
    CHECK_THROWS_AS(static_cast<void>(Engine::build(EngineConfig::load(no_dict))), ConfigError);
}

TEST_CASE("pipeline labels the curated document 3 in-claim / 3 out-of-claim") {
    Engine engine = Engine::build(shipped_config());
    auto docs = curated_docs();
    PipelineOutput out = run_pipeline(engine, docs);
    CHECK(out.stats.total_sentences == 6);
    CHECK(out.stats.numeric_sentences == 6);
    CHECK(out.stats.numeric_financial_sentences == 6);
    REQUIRE(out.predictions.size() == 6);
    int in = 0, outc = 0;
    for (const auto& p : out.predictions) {
        if (p.label == TriLabel::in_claim) ++in;
        if (p.label == TriLabel::out_of_claim) ++outc;
        CHECK(p.votes.size() == engine.labeler.rules().size());
    }
    CHECK(in == 3);
    CHECK(outc == 3);
    REQUIRE(out.doc_optimism.size() == 1);
    CHECK(out.doc_optimism[0].total_sentences == 6);
    REQUIRE(out.quarter_optimism.size() == 1);
    CHECK(out.quarter_optimism[0].key == "ACME:2020Q1");
}

TEST_CASE("pipeline output is identical across thread counts") {
    // a corpus of every gold sentence spread over several documents
    std::vector<Document> docs;
    const auto suite = testgold::full_suite();
    for (size_t d = 0; d < 8; ++d) {
        std::string text;
        for (size_t i = d; i < suite.size(); i += 8) {
            text += suite[i].text;
            text += '\n';
        }
        Document doc;
        doc.doc_id = "doc" + std::to_string(d);
        doc.ticker = d % 2 ? "ACME" : "GLOBEX";
        doc.period = Date::parse(d % 3 ? "2020-02-05" : "2020-05-05");
        doc.raw_text = text;
        docs.push_back(std::move(doc));
    }

    EngineConfig cfg = shipped_config();
    auto run_with = [&](unsigned threads) {
        EngineConfig c = cfg;
        c.parallelism = threads;
        Engine engine = Engine::build(c);
        return run_pipeline(engine, docs);
    };
    PipelineOutput serial = run_with(1);
    PipelineOutput parallel = run_with(4);

    REQUIRE(serial.sentences.size() == parallel.sentences.size());
    for (size_t i = 0; i < serial.sentences.size(); ++i) {
        CHECK(serial.sentences[i].doc_id == parallel.sentences[i].doc_id);
        CHECK(serial.sentences[i].index == parallel.sentences[i].index);
        CHECK(serial.sentences[i].text == parallel.sentences[i].text);
        CHECK(serial.sentences[i].claim == parallel.sentences[i].claim);
        CHECK(serial.sentences[i].sentiment == parallel.sentences[i].sentiment);
        // the financial flag only ever appears on numeric sentences
        if (serial.sentences[i].is_financial) CHECK(serial.sentences[i].is_numeric);
    }
    REQUIRE(serial.predictions.size() == parallel.predictions.size());
    for (size_t i = 0; i < serial.predictions.size(); ++i) {
        CHECK(serial.predictions[i].label == parallel.predictions[i].label);
        CHECK(serial.predictions[i].votes == parallel.predictions[i].votes);
    }
    REQUIRE(serial.quarter_optimism.size() == parallel.quarter_optimism.size());
    for (size_t i = 0; i < serial.quarter_optimism.size(); ++i) {
        CHECK(serial.quarter_optimism[i].key == parallel.quarter_optimism[i].key);
        CHECK(serial.quarter_optimism[i].optimism == parallel.quarter_optimism[i].optimism);
    }
}

TEST_CASE("pipeline propagates per-document errors with context") {
    Engine engine = Engine::build(shipped_config());
    Document d;
    d.doc_id = "blank";
    d.ticker = "T";
    d.period = Date::parse("2020-01-01");
    d.raw_text = "   ";  // segments to zero sentences
    std::vector<Document> docs = {d};
    CHECK_THROWS_WITH_AS(static_cast<void>(run_pipeline(engine, docs)),
                         doctest::Contains("blank"), DataError);
}

TEST_CASE("external sentiment replaces the lexicon provider") {
    Engine engine = Engine::build(shipped_config());
    auto docs = curated_docs();
    std::vector<SentimentRecord> external;
    for (int i = 0; i < 6; ++i) external.push_back({"curated", i, SentimentLabel::negative});
    PipelineOutput out = run_pipeline(engine, docs, external, false);
    for (const auto& s : out.sentences) {
        CHECK(s.sentiment == SentimentLabel::negative);
    }
    // optimism now counts negative in-claim sentences
    CHECK(out.doc_optimism[0].neg_in_claim == 3);
    CHECK(out.doc_optimism[0].optimism == doctest::Approx(-50.0));
}

TEST_CASE("majority aggregator leaves abstains uncoerced in predictions") {
    EngineConfig cfg = shipped_config();
    cfg.aggregator = Aggregator::majority;
    Engine engine = Engine::build(cfg);
    Document d;
    d.doc_id = "d";
    d.ticker = "T";
    d.period = Date::parse("2020-01-01");
    // one rule fires out of 26: abstain holds the plurality
    d.raw_text = "we expect revenue of $5 million.";
    std::vector<Document> docs = {d};
    PipelineOutput out = run_pipeline(engine, docs);
    REQUIRE(out.predictions.size() == 1);
    CHECK(out.predictions[0].label == TriLabel::abstain);
    // an abstaining sentence carries no claim flag and never counts as in-claim
    CHECK_FALSE(out.sentences[0].claim.has_value());
    CHECK(out.doc_optimism[0].pos_in_claim == 0);
}

TEST_CASE("filter toggles admit everything when disabled") {
    EngineConfig cfg = shipped_config();
    cfg.numeric_filter = false;
    cfg.financial_filter = false;
    Engine engine = Engine::build(cfg);
    Document d;
    d.doc_id = "d";
    d.ticker = "T";
    d.period = Date::parse("2020-01-01");
    d.raw_text = "hello there.\nwe expect growth of 5%.";
    std::vector<Document> docs = {d};
    PipelineOutput out = run_pipeline(engine, docs);
    CHECK(out.stats.numeric_financial_sentences == 2);
    CHECK(out.predictions.size() == 2);
}

TEST_CASE("bench: per-sentence percentiles and determinism of non-timing fields") {
    Engine engine = Engine::build(shipped_config());
    auto corpus = generate_bench_corpus(2000, 42);
    LatencyReport a = run_bench(engine, corpus, 2);
    CHECK(a.sentences_processed == 2000);
    CHECK(a.throughput > 0.0);
    CHECK(a.p50_us <= a.p95_us);
    CHECK(a.p95_us <= a.p99_us);
    CHECK(a.numeric_financial > 0);
    CHECK(a.in_claim > 0);
    CHECK(a.out_of_claim > 0);

    LatencyReport b = run_bench(engine, corpus, 2);
    CHECK(a.sentences_processed == b.sentences_processed);
    CHECK(a.numeric_financial == b.numeric_financial);
    CHECK(a.in_claim == b.in_claim);
    CHECK(a.out_of_claim == b.out_of_claim);
    CHECK(a.abstained == b.abstained);

    CHECK_THROWS_AS(static_cast<void>(run_bench(engine, {}, 1)), DataError);
}

TEST_CASE("bench: identical sentences give a flat latency distribution") {
    Engine engine = Engine::build(shipped_config());
    std::vector<std::string> corpus(1500, "we expect revenue growth of 5% next quarter.");
    LatencyReport r = run_bench(engine, corpus, 1);
    // identical work per sentence: the tail should stay near the median,
    // allowing generous scheduler noise
    CHECK(r.p99_us <= std::max(10.0 * r.p50_us, r.p50_us + 2000.0));
}

TEST_CASE("bench corpus generator is deterministic") {
    auto a = generate_bench_corpus(500, 7);
    auto b = generate_bench_corpus(500, 7);
    CHECK(a == b);
    auto c = generate_bench_corpus(500, 8);
    CHECK(a != c);
}

TEST_CASE("bench wall time scales roughly linearly with corpus size") {
    Engine engine = Engine::build(shipped_config());
    auto small = generate_bench_corpus(30000, 42);
    auto large = generate_bench_corpus(60000, 42);
    LatencyReport rs = run_bench(engine, small, 5);
    LatencyReport rl = run_bench(engine, large, 5);
    const double ratio = rl.wall_time_seconds / rs.wall_time_seconds;
    // doubling the corpus should roughly double the median wall time (30%
    // band on each side, like-for-like sentence mix)
    CHECK(ratio > 1.4);
    CHECK(ratio < 2.6);
}
