#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "clarirank/index.hpp"
#include "clarirank/types.hpp"

namespace clarirank {

struct Bm25Params {
    double k1 = 1.2;  // >= 0
    double b = 0.75;  // in [0,1]
};

struct Pl2Params {
    double c = 1.0;  // > 0
};

enum class WeightingModel { Bm25, TfIdf, Pl2, Dph };

struct ModelSpec {
    WeightingModel model = WeightingModel::Bm25;
    Bm25Params bm25;
    Pl2Params pl2;
};

/// "bm25" | "tfidf" | "pl2" | "dph"; throws Error otherwise.
WeightingModel parse_model_name(std::string_view name);
std::string_view model_name(WeightingModel model);

/// Plain query weighting: w(t) = qtf / qtf_max over the token list.
WeightedQuery make_weighted_query(const QueryRecord& query);
WeightedQuery make_weighted_query(std::string query_id, const TokenList& tokens);

// Per-term scoring kernels. Contributions are multiplied by the query term
// weight and summed over matching terms.
double bm25_term_weight(std::uint64_t tf, std::uint64_t dl, double avgdl,
                        std::uint64_t num_docs, std::size_t df, const Bm25Params& params);
double tfidf_term_weight(std::uint64_t tf, std::uint64_t num_docs, std::size_t df);
double pl2_term_weight(std::uint64_t tf, std::uint64_t dl, double avgdl,
                       std::uint64_t num_docs, std::uint64_t cf, const Pl2Params& params);
double dph_term_weight(std::uint64_t tf, std::uint64_t dl, double avgdl,
                       std::uint64_t num_docs, std::uint64_t cf);

// Single-document scores. The doc must be registered in the index.
double score_bm25(const WeightedQuery& query, const std::string& doc_id,
                  const InvertedIndex& index, const Bm25Params& params);
double score_tfidf(const WeightedQuery& query, const std::string& doc_id,
                   const InvertedIndex& index);
double score_pl2(const WeightedQuery& query, const std::string& doc_id,
                 const InvertedIndex& index, const Pl2Params& params);
double score_dph(const WeightedQuery& query, const std::string& doc_id,
                 const InvertedIndex& index);
double score(const WeightedQuery& query, const std::string& doc_id,
             const InvertedIndex& index, const ModelSpec& spec);

inline constexpr std::size_t kDepthAll = std::numeric_limits<std::size_t>::max();

/// Fully scored pool entry prior to ordering.
struct ScoredPoolEntry {
    std::string doc_id;
    double score = 0.0;
    std::uint64_t length = 0;  // token count, feeds the zero-score heuristic
};

/// Orders a scored pool: positive scores descending (ties by doc_id), then
/// the zero-score block (length ascending when the heuristic is on, doc_id
/// ascending otherwise), then negative scores descending. Truncates to depth.
Ranking assemble_ranking(std::string query_id, std::vector<ScoredPoolEntry> pool,
                         std::size_t depth, bool zero_heuristic);

/// Scores every registered document and assembles the ranking.
Ranking rank(const WeightedQuery& query, const InvertedIndex& index,
             const ModelSpec& spec, std::size_t depth, bool zero_heuristic);

}  // namespace clarirank
