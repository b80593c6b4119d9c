#include "clarirank/weighting.hpp"

#include <algorithm>
#include <cmath>

namespace clarirank {

namespace {

constexpr double kLog2E = 1.4426950408889634;  // log2(e)
constexpr double kTwoPi = 6.283185307179586;

double log2d(double x) { return std::log2(x); }

}  // namespace

WeightingModel parse_model_name(std::string_view name) {
    if (name == "bm25") return WeightingModel::Bm25;
    if (name == "tfidf") return WeightingModel::TfIdf;
    if (name == "pl2") return WeightingModel::Pl2;
    if (name == "dph") return WeightingModel::Dph;
    throw Error("unknown weighting model: " + std::string(name));
}

std::string_view model_name(WeightingModel model) {
    switch (model) {
        case WeightingModel::Bm25: return "bm25";
        case WeightingModel::TfIdf: return "tfidf";
        case WeightingModel::Pl2: return "pl2";
        case WeightingModel::Dph: return "dph";
    }
    return "bm25";
}

WeightedQuery make_weighted_query(const QueryRecord& query) {
    return make_weighted_query(query.query_id, query.tokens);
}

WeightedQuery make_weighted_query(std::string query_id, const TokenList& tokens) {
    WeightedQuery result;
    result.query_id = std::move(query_id);
    std::map<std::string, std::uint64_t> counts;
    for (const std::string& token : tokens) ++counts[token];
    std::uint64_t max_count = 0;
    for (const auto& [term, count] : counts) max_count = std::max(max_count, count);
    for (const auto& [term, count] : counts)
        result.terms[term] = static_cast<double>(count) / static_cast<double>(max_count);
    return result;
}

double bm25_term_weight(std::uint64_t tf, std::uint64_t dl, double avgdl,
                        std::uint64_t num_docs, std::size_t df, const Bm25Params& params) {
    if (tf == 0) return 0.0;
    const double n = static_cast<double>(num_docs);
    const double idf = std::log((n - static_cast<double>(df) + 0.5) /
                                    (static_cast<double>(df) + 0.5) +
                                1.0);
    const double f = static_cast<double>(tf);
    const double norm = 1.0 - params.b + params.b * (static_cast<double>(dl) / avgdl);
    return idf * f * (params.k1 + 1.0) / (f + params.k1 * norm);
}

double tfidf_term_weight(std::uint64_t tf, std::uint64_t num_docs, std::size_t df) {
    if (tf == 0) return 0.0;
    const double f = static_cast<double>(tf);
    const double n = static_cast<double>(num_docs);
    return (1.0 + std::log(f)) * std::log((n + 1.0) / (static_cast<double>(df) + 0.5));
}

double pl2_term_weight(std::uint64_t tf, std::uint64_t dl, double avgdl,
                       std::uint64_t num_docs, std::uint64_t cf, const Pl2Params& params) {
    if (tf == 0) return 0.0;
    const double f = static_cast<double>(tf);
    const double tfn = f * log2d(1.0 + params.c * avgdl / static_cast<double>(dl));
    const double lambda = static_cast<double>(cf) / static_cast<double>(num_docs);
    return (1.0 / (tfn + 1.0)) *
           (tfn * log2d(tfn / lambda) + (lambda - tfn) * kLog2E + 0.5 * log2d(kTwoPi * tfn));
}

double dph_term_weight(std::uint64_t tf, std::uint64_t dl, double avgdl,
                       std::uint64_t num_docs, std::uint64_t cf) {
    if (tf == 0) return 0.0;
    if (tf == dl) return 0.0;  // f = 1 zeroes the norm; skip before the logs blow up
    const double f = static_cast<double>(tf);
    const double d = static_cast<double>(dl);
    const double ratio = f / d;
    const double norm = (1.0 - ratio) * (1.0 - ratio) / (f + 1.0);
    const double n = static_cast<double>(num_docs);
    const double cfd = static_cast<double>(cf);
    return norm * (f * log2d((f * avgdl / d) * (n / cfd)) +
                   0.5 * log2d(kTwoPi * f * (1.0 - ratio)));
}

namespace {

// One accumulation routine serves both the per-document scorers and rank():
// iterating query terms in map order keeps floating-point sums identical on
// both paths.
template <typename Accumulate>
void for_each_matching_term(const WeightedQuery& query, const InvertedIndex& index,
                            Accumulate&& accumulate) {
    for (const auto& [term, weight] : query.terms) {
        const TermEntry* entry = index.term(term);
        if (entry == nullptr) continue;
        accumulate(term, weight, *entry);
    }
}

double score_one(const WeightedQuery& query, std::uint32_t doc, const InvertedIndex& index,
                 const ModelSpec& spec) {
    const std::uint64_t dl = index.doc_length(doc);
    const std::uint64_t n = index.num_docs();
    const double avgdl = index.avgdl();
    double total = 0.0;
    for_each_matching_term(query, index, [&](const std::string& term, double weight,
                                             const TermEntry& entry) {
        const std::uint64_t tf = index.term_frequency(term, doc);
        if (tf == 0) return;
        switch (spec.model) {
            case WeightingModel::Bm25:
                total += weight * bm25_term_weight(tf, dl, avgdl, n, entry.postings.size(), spec.bm25);
                break;
            case WeightingModel::TfIdf:
                total += weight * tfidf_term_weight(tf, n, entry.postings.size());
                break;
            case WeightingModel::Pl2:
                total += weight * pl2_term_weight(tf, dl, avgdl, n, entry.cf, spec.pl2);
                break;
            case WeightingModel::Dph:
                total += weight * dph_term_weight(tf, dl, avgdl, n, entry.cf);
                break;
        }
    });
    return total;
}

}  // namespace

double score_bm25(const WeightedQuery& query, const std::string& doc_id,
                  const InvertedIndex& index, const Bm25Params& params) {
    ModelSpec spec;
    spec.model = WeightingModel::Bm25;
    spec.bm25 = params;
    return score_one(query, index.doc_index(doc_id), index, spec);
}

double score_tfidf(const WeightedQuery& query, const std::string& doc_id,
                   const InvertedIndex& index) {
    ModelSpec spec;
    spec.model = WeightingModel::TfIdf;
    return score_one(query, index.doc_index(doc_id), index, spec);
}

double score_pl2(const WeightedQuery& query, const std::string& doc_id,
                 const InvertedIndex& index, const Pl2Params& params) {
    ModelSpec spec;
    spec.model = WeightingModel::Pl2;
    spec.pl2 = params;
    return score_one(query, index.doc_index(doc_id), index, spec);
}

double score_dph(const WeightedQuery& query, const std::string& doc_id,
                 const InvertedIndex& index) {
    ModelSpec spec;
    spec.model = WeightingModel::Dph;
    return score_one(query, index.doc_index(doc_id), index, spec);
}

double score(const WeightedQuery& query, const std::string& doc_id, const InvertedIndex& index,
             const ModelSpec& spec) {
    return score_one(query, index.doc_index(doc_id), index, spec);
}

Ranking assemble_ranking(std::string query_id, std::vector<ScoredPoolEntry> pool,
                         std::size_t depth, bool zero_heuristic) {
    if (depth == 0) throw Error("ranking depth must be >= 1");

    // Buckets: positive scores, exact zeros, negatives. The zero block is
    // where the length heuristic applies.
    auto bucket = [](const ScoredPoolEntry& e) {
        if (e.score > 0.0) return 0;
        if (e.score == 0.0) return 1;
        return 2;
    };
    std::sort(pool.begin(), pool.end(), [&](const ScoredPoolEntry& a, const ScoredPoolEntry& b) {
        const int ba = bucket(a);
        const int bb = bucket(b);
        if (ba != bb) return ba < bb;
        if (ba == 1) {
            if (zero_heuristic && a.length != b.length) return a.length < b.length;
            return a.doc_id < b.doc_id;
        }
        if (a.score != b.score) return a.score > b.score;
        return a.doc_id < b.doc_id;
    });

    Ranking ranking;
    ranking.query_id = std::move(query_id);
    ranking.zero_heuristic = zero_heuristic;
    const std::size_t keep = std::min(depth, pool.size());
    ranking.entries.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i)
        ranking.entries.push_back({std::move(pool[i].doc_id), pool[i].score});
    return ranking;
}

Ranking rank(const WeightedQuery& query, const InvertedIndex& index, const ModelSpec& spec,
             std::size_t depth, bool zero_heuristic) {
    if (depth == 0) throw Error("ranking depth must be >= 1");
    const std::uint64_t n = index.num_docs();
    const double avgdl = index.avgdl();

    std::vector<double> scores(n, 0.0);
    for_each_matching_term(query, index, [&](const std::string&, double weight,
                                             const TermEntry& entry) {
        switch (spec.model) {
            case WeightingModel::Bm25:
                for (const Posting& p : entry.postings)
                    scores[p.doc] += weight * bm25_term_weight(p.tf, index.doc_length(p.doc), avgdl,
                                                               n, entry.postings.size(), spec.bm25);
                break;
            case WeightingModel::TfIdf:
                for (const Posting& p : entry.postings)
                    scores[p.doc] += weight * tfidf_term_weight(p.tf, n, entry.postings.size());
                break;
            case WeightingModel::Pl2:
                for (const Posting& p : entry.postings)
                    scores[p.doc] += weight * pl2_term_weight(p.tf, index.doc_length(p.doc), avgdl,
                                                              n, entry.cf, spec.pl2);
                break;
            case WeightingModel::Dph:
                for (const Posting& p : entry.postings)
                    scores[p.doc] += weight * dph_term_weight(p.tf, index.doc_length(p.doc), avgdl,
                                                              n, entry.cf);
                break;
        }
    });

    std::vector<ScoredPoolEntry> pool;
    pool.reserve(n);
    for (std::uint32_t doc = 0; doc < n; ++doc)
        pool.push_back({index.doc_id(doc), scores[doc], index.doc_length(doc)});
    return assemble_ranking(query.query_id, std::move(pool), depth, zero_heuristic);
}

}  // namespace clarirank
