#include <doctest.h>

#include <cmath>
#include <random>

#include "clarirank/weighting.hpp"
#include "support/brute_force.hpp"
#include "support/corpus_gen.hpp"

using namespace clarirank;

namespace {

DocumentSet weighting_corpus() {
    DocumentSet docs;
    docs.add(gen::document("d1", {"red", "block"}));
    docs.add(gen::document("d2", {"blue", "block", "tower"}));
    docs.add(gen::document("d3", {"red", "red", "tower"}));
    return docs;
}

WeightedQuery red_tower() { return make_weighted_query("q1", {"red", "tower"}); }

ModelSpec spec_for(WeightingModel model) {
    ModelSpec spec;
    spec.model = model;
    return spec;
}

}  // namespace

TEST_CASE("parse_model_name / model_name round trip") {
    CHECK(parse_model_name("bm25") == WeightingModel::Bm25);
    CHECK(parse_model_name("tfidf") == WeightingModel::TfIdf);
    CHECK(parse_model_name("pl2") == WeightingModel::Pl2);
    CHECK(parse_model_name("dph") == WeightingModel::Dph);
    CHECK_THROWS_AS(parse_model_name("BM25"), Error);
    CHECK_THROWS_AS(parse_model_name("bm25f"), Error);
    CHECK_THROWS_AS(parse_model_name(""), Error);
    for (auto model : {WeightingModel::Bm25, WeightingModel::TfIdf, WeightingModel::Pl2,
                       WeightingModel::Dph})
        CHECK(parse_model_name(model_name(model)) == model);
}

TEST_CASE("make_weighted_query: qtf over qtf_max") {
    WeightedQuery q = make_weighted_query("q7", {"red", "red", "tower"});
    CHECK(q.query_id == "q7");
    CHECK(q.provenance == QueryProvenance::Plain);
    REQUIRE(q.terms.size() == 2);
    CHECK(q.terms.at("red") == 1.0);
    CHECK(q.terms.at("tower") == 0.5);

    CHECK(make_weighted_query("q", {}).terms.empty());
    WeightedQuery uniform = make_weighted_query("q", {"a", "b"});
    CHECK(uniform.terms.at("a") == 1.0);
    CHECK(uniform.terms.at("b") == 1.0);

    QueryRecord record;
    record.query_id = "q9";
    record.tokens = {"red", "red", "tower"};
    CHECK(make_weighted_query(record).terms == q.terms);
}

TEST_CASE("kernels: frozen oracle values on the 3-doc corpus") {
    const double avgdl = 8.0 / 3.0;

    // idf(df=2, N=3) = ln(1.6); tf components quoted in the rank derivation.
    const double idf = std::log((3.0 - 2.0 + 0.5) / 2.5 + 1.0);
    CHECK(bm25_term_weight(2, 3, avgdl, 3, 2, {1.2, 0.75}) ==
          doctest::Approx(idf * 1.328301886792453).epsilon(1e-12));
    CHECK(bm25_term_weight(1, 3, avgdl, 3, 2, {1.2, 0.75}) ==
          doctest::Approx(idf * 0.9513513513513514).epsilon(1e-12));

    CHECK(tfidf_term_weight(1, 3, 2) == doctest::Approx(0.47000362924573563).epsilon(1e-12));

    // tfn = 1, lambda = 1 collapses PL2 to 0.25*log2(2*pi).
    CHECK(pl2_term_weight(1, 4, 4.0, 4, 4, {1.0}) ==
          doctest::Approx(0.6628740323680797).epsilon(1e-12));

    CHECK(dph_term_weight(3, 3, avgdl, 3, 3) == 0.0);  // tf == dl zeroes the norm
    CHECK(dph_term_weight(1, 1, 2.0, 4, 1) == 0.0);

    for (auto zero : {bm25_term_weight(0, 3, avgdl, 3, 2, {1.2, 0.75}),
                      tfidf_term_weight(0, 3, 2), pl2_term_weight(0, 3, avgdl, 3, 2, {1.0}),
                      dph_term_weight(0, 3, avgdl, 3, 2)})
        CHECK(zero == 0.0);
}

TEST_CASE("score_*: frozen oracle values, query 'red tower'") {
    InvertedIndex index = InvertedIndex::build(weighting_corpus());
    WeightedQuery q = red_tower();

    CHECK(score_bm25(q, "d1", index, {}) == doctest::Approx(0.523548346501579).epsilon(1e-12));
    CHECK(score_bm25(q, "d2", index, {}) == doctest::Approx(0.44713858782297017).epsilon(1e-12));
    CHECK(score_bm25(q, "d3", index, {}) == doctest::Approx(1.0714452953493814).epsilon(1e-12));

    CHECK(score_tfidf(q, "d1", index) == doctest::Approx(0.47000362924573563).epsilon(1e-12));
    CHECK(score_tfidf(q, "d2", index) == doctest::Approx(0.47000362924573563).epsilon(1e-12));
    CHECK(score_tfidf(q, "d3", index) == doctest::Approx(1.2657889489560947).epsilon(1e-12));

    CHECK(score_pl2(q, "d1", index, {}) == doctest::Approx(0.6767003055835311).epsilon(1e-12));
    CHECK(score_pl2(q, "d2", index, {}) == doctest::Approx(0.6907506855467711).epsilon(1e-12));
    CHECK(score_pl2(q, "d3", index, {}) == doctest::Approx(1.4548009007841087).epsilon(1e-12));

    CHECK(score_dph(q, "d1", index) == doctest::Approx(0.1550981955018754).epsilon(1e-12));
    CHECK(score_dph(q, "d2", index) == doctest::Approx(0.32184540303431675).epsilon(1e-12));
    CHECK(score_dph(q, "d3", index) == doctest::Approx(0.42160158123768554).epsilon(1e-12));

    WeightedQuery red = make_weighted_query("q", {"red"});
    CHECK(score_pl2(red, "d3", index, {}) == doctest::Approx(0.7640502152373377).epsilon(1e-12));
    WeightedQuery tower = make_weighted_query("q", {"tower"});
    CHECK(score_dph(tower, "d2", index) == doctest::Approx(0.32184540303431675).epsilon(1e-12));

    // Dispatcher agrees with the named entry points.
    CHECK(score(q, "d3", index, spec_for(WeightingModel::Bm25)) == score_bm25(q, "d3", index, {}));
    CHECK(score(q, "d3", index, spec_for(WeightingModel::TfIdf)) == score_tfidf(q, "d3", index));
    CHECK(score(q, "d3", index, spec_for(WeightingModel::Pl2)) == score_pl2(q, "d3", index, {}));
    CHECK(score(q, "d3", index, spec_for(WeightingModel::Dph)) == score_dph(q, "d3", index));

    WeightedQuery oov = make_weighted_query("q", {"green"});
    for (auto model : {WeightingModel::Bm25, WeightingModel::TfIdf, WeightingModel::Pl2,
                       WeightingModel::Dph})
        CHECK(score(oov, "d1", index, spec_for(model)) == 0.0);

    CHECK_THROWS_AS(score_bm25(q, "d9", index, {}), Error);
}

TEST_CASE("bm25: b=0 removes length dependence; tf monotonic; saturation bound") {
    const double avgdl = 5.0;
    Bm25Params flat{1.2, 0.0};
    CHECK(bm25_term_weight(2, 2, avgdl, 10, 3, flat) == bm25_term_weight(2, 40, avgdl, 10, 3, flat));

    Bm25Params params{1.2, 0.75};
    const double idf = std::log((10.0 - 3.0 + 0.5) / 3.5 + 1.0);
    double previous = 0.0;
    for (std::uint64_t tf = 1; tf <= 50; ++tf) {
        const double w = bm25_term_weight(tf, 50, avgdl, 10, 3, params);
        CHECK(w > previous);
        CHECK(w < idf * (params.k1 + 1.0));  // asymptotic saturation ceiling
        previous = w;
    }
}

TEST_CASE("kernels: sign and finiteness over random valid inputs") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<std::uint64_t> tf_dist(1, 6);
    std::uniform_int_distribution<std::uint64_t> extra_dist(0, 40);
    std::uniform_int_distribution<std::uint64_t> n_dist(1, 200);
    for (int i = 0; i < 2000; ++i) {
        const std::uint64_t tf = tf_dist(rng);
        const std::uint64_t dl = tf + extra_dist(rng);
        const std::uint64_t n = n_dist(rng);
        std::uniform_int_distribution<std::size_t> df_dist(1, n);
        const std::size_t df = df_dist(rng);
        const std::uint64_t cf = tf + df_dist(rng);  // cf >= tf always holds in a real index
        const double avgdl = static_cast<double>(dl) * 0.5 + 1.0;

        CHECK(bm25_term_weight(tf, dl, avgdl, n, df, {1.2, 0.75}) >= 0.0);
        CHECK(tfidf_term_weight(tf, n, df) >= 0.0);
        CHECK(std::isfinite(pl2_term_weight(tf, dl, avgdl, n, cf, {1.0})));
        CHECK(std::isfinite(dph_term_weight(tf, dl, avgdl, n, cf)));
    }
}

TEST_CASE("rank: frozen order on the 3-doc corpus") {
    InvertedIndex index = InvertedIndex::build(weighting_corpus());
    Ranking bm = rank(red_tower(), index, spec_for(WeightingModel::Bm25), kDepthAll, false);
    REQUIRE(bm.entries.size() == 3);
    CHECK(bm.entries[0].doc_id == "d3");
    CHECK(bm.entries[1].doc_id == "d1");
    CHECK(bm.entries[2].doc_id == "d2");
    CHECK(bm.entries[0].score == doctest::Approx(1.0714452953493814).epsilon(1e-12));

    // TFIDF ties d1/d2 exactly; doc_id breaks the tie.
    Ranking tf = rank(red_tower(), index, spec_for(WeightingModel::TfIdf), kDepthAll, false);
    CHECK(tf.entries[0].doc_id == "d3");
    CHECK(tf.entries[1].doc_id == "d1");
    CHECK(tf.entries[2].doc_id == "d2");
    CHECK(tf.entries[1].score == tf.entries[2].score);
}

TEST_CASE("rank: scores bitwise-equal to score() on random corpora") {
    std::mt19937 rng(41);
    for (int round = 0; round < 25; ++round) {
        DocumentSet docs = gen::corpus(rng, 15, 8);
        InvertedIndex index = InvertedIndex::build(docs);
        WeightedQuery query = make_weighted_query(gen::query(rng, static_cast<std::size_t>(round)));
        for (auto model : {WeightingModel::Bm25, WeightingModel::TfIdf, WeightingModel::Pl2,
                           WeightingModel::Dph}) {
            Ranking ranking = rank(query, index, spec_for(model), kDepthAll, false);
            REQUIRE(ranking.entries.size() == docs.size());
            for (const ScoredDoc& entry : ranking.entries)
                CHECK(entry.score == score(query, entry.doc_id, index, spec_for(model)));
        }
    }
}

TEST_CASE("rank: agrees with the index-free oracle") {
    std::mt19937 rng(4242);
    for (int round = 0; round < 20; ++round) {
        DocumentSet docs = gen::corpus(rng, 12, 6);
        InvertedIndex index = InvertedIndex::build(docs);
        oracle::Stats stats = oracle::collect(docs);
        WeightedQuery query = make_weighted_query(gen::query(rng, static_cast<std::size_t>(round)));
        const bool heuristic = (round % 2) == 0;

        struct Pair {
            WeightingModel lib;
            oracle::Model ref;
        };
        for (Pair pair : {Pair{WeightingModel::Bm25, oracle::Model::Bm25},
                          Pair{WeightingModel::TfIdf, oracle::Model::TfIdf},
                          Pair{WeightingModel::Pl2, oracle::Model::Pl2},
                          Pair{WeightingModel::Dph, oracle::Model::Dph}}) {
            std::vector<oracle::Entry> pool;
            for (const Document& doc : docs.docs())
                pool.push_back({doc.doc_id,
                                oracle::score(pair.ref, query, doc, stats, 1.2, 0.75, 1.0),
                                doc.tokens.size()});
            std::vector<oracle::Entry> expected = oracle::order(pool, heuristic);
            Ranking got = rank(query, index, spec_for(pair.lib), kDepthAll, heuristic);
            REQUIRE(got.entries.size() == expected.size());
            for (std::size_t i = 0; i < expected.size(); ++i) {
                CHECK(got.entries[i].doc_id == expected[i].doc_id);
                CHECK(got.entries[i].score ==
                      doctest::Approx(expected[i].score).epsilon(1e-9).scale(1.0));
            }
        }
    }
}

TEST_CASE("assemble_ranking: 5-doc zero-heuristic example") {
    std::vector<ScoredPoolEntry> pool = {
        {"d1", 2.1, 4}, {"d2", 0.0, 7}, {"d3", 0.5, 3}, {"d4", 0.0, 2}, {"d5", 0.0, 5}};

    Ranking on = assemble_ranking("q1", pool, kDepthAll, true);
    REQUIRE(on.entries.size() == 5);
    CHECK(on.zero_heuristic);
    CHECK(on.entries[0].doc_id == "d1");
    CHECK(on.entries[1].doc_id == "d3");
    CHECK(on.entries[2].doc_id == "d4");
    CHECK(on.entries[3].doc_id == "d5");
    CHECK(on.entries[4].doc_id == "d2");

    Ranking off = assemble_ranking("q1", pool, kDepthAll, false);
    CHECK(!off.zero_heuristic);
    CHECK(off.entries[0].doc_id == "d1");
    CHECK(off.entries[1].doc_id == "d3");
    CHECK(off.entries[2].doc_id == "d2");
    CHECK(off.entries[3].doc_id == "d4");
    CHECK(off.entries[4].doc_id == "d5");
}

TEST_CASE("assemble_ranking: depth handling") {
    std::vector<ScoredPoolEntry> pool = {{"d1", 1.0, 1}, {"d2", 2.0, 1}, {"d3", 3.0, 1}};
    CHECK_THROWS_AS(assemble_ranking("q", pool, 0, false), Error);

    Ranking top2 = assemble_ranking("q", pool, 2, false);
    REQUIRE(top2.entries.size() == 2);
    CHECK(top2.entries[0].doc_id == "d3");
    CHECK(top2.entries[1].doc_id == "d2");

    CHECK(assemble_ranking("q", pool, 100, false).entries.size() == 3);
    CHECK(assemble_ranking("q", pool, kDepthAll, false).entries.size() == 3);

    InvertedIndex index = InvertedIndex::build(weighting_corpus());
    CHECK_THROWS_AS(rank(red_tower(), index, ModelSpec{}, 0, false), Error);
    CHECK(rank(red_tower(), index, ModelSpec{}, 2, false).entries.size() == 2);
}

TEST_CASE("assemble_ranking: negative block trails, descending") {
    std::vector<ScoredPoolEntry> pool = {{"a", -0.5, 1}, {"b", 1.0, 9}, {"c", 0.0, 9},
                                         {"d", -2.0, 1}, {"e", 0.0, 3}, {"f", -0.5, 1}};
    Ranking r = assemble_ranking("q", pool, kDepthAll, true);
    REQUIRE(r.entries.size() == 6);
    CHECK(r.entries[0].doc_id == "b");   // positive
    CHECK(r.entries[1].doc_id == "e");   // zeros by length
    CHECK(r.entries[2].doc_id == "c");
    CHECK(r.entries[3].doc_id == "a");   // negatives descending, tie by id
    CHECK(r.entries[4].doc_id == "f");
    CHECK(r.entries[5].doc_id == "d");
}

TEST_CASE("assemble_ranking: random pools match the oracle ordering") {
    std::mt19937 rng(1234);
    std::uniform_int_distribution<int> size_dist(1, 30);
    std::uniform_int_distribution<int> kind_dist(0, 2);
    std::uniform_real_distribution<double> mag_dist(0.1, 3.0);
    std::uniform_int_distribution<std::uint64_t> len_dist(0, 9);
    std::uniform_int_distribution<int> coin(0, 1);

    for (int round = 0; round < 1000; ++round) {
        const int n = size_dist(rng);
        std::vector<ScoredPoolEntry> pool;
        std::vector<oracle::Entry> mirror;
        for (int i = 0; i < n; ++i) {
            const int kind = kind_dist(rng);
            // Quantized magnitudes so cross-entry score ties actually occur.
            const double mag = std::round(mag_dist(rng) * 4.0) / 4.0;
            const double score = kind == 0 ? mag : (kind == 1 ? 0.0 : -mag);
            const std::uint64_t length = len_dist(rng);
            const std::string id = gen::padded_id("d", static_cast<std::size_t>(i));
            pool.push_back({id, score, length});
            mirror.push_back({id, score, static_cast<std::size_t>(length)});
        }
        const bool heuristic = coin(rng) == 1;
        Ranking got = assemble_ranking("q", pool, kDepthAll, heuristic);
        std::vector<oracle::Entry> expected = oracle::order(mirror, heuristic);
        REQUIRE(got.entries.size() == expected.size());
        for (std::size_t i = 0; i < expected.size(); ++i) {
            CHECK(got.entries[i].doc_id == expected[i].doc_id);
            CHECK(got.entries[i].score == expected[i].score);
        }
    }
}

TEST_CASE("zero-heuristic: all-zero rankings sort by length then id") {
    std::mt19937 rng(77);
    std::uniform_int_distribution<int> size_dist(2, 25);
    std::uniform_int_distribution<std::uint64_t> len_dist(0, 5);
    for (int round = 0; round < 200; ++round) {
        const int n = size_dist(rng);
        std::vector<ScoredPoolEntry> pool;
        std::map<std::string, std::uint64_t> lengths;
        for (int i = 0; i < n; ++i) {
            const std::string id = gen::padded_id("d", static_cast<std::size_t>(i));
            const std::uint64_t length = len_dist(rng);
            pool.push_back({id, 0.0, length});
            lengths[id] = length;
        }
        Ranking r = assemble_ranking("q", pool, kDepthAll, true);
        for (std::size_t i = 1; i < r.entries.size(); ++i) {
            const std::uint64_t prev = lengths.at(r.entries[i - 1].doc_id);
            const std::uint64_t cur = lengths.at(r.entries[i].doc_id);
            CHECK(prev <= cur);
            if (prev == cur) CHECK(r.entries[i - 1].doc_id < r.entries[i].doc_id);
        }
    }
}
