#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "clarirank/index.hpp"
#include "clarirank/types.hpp"

namespace clarirank {

struct FeedbackConfig {
    std::size_t fb_docs = 3;   // pseudo-relevant depth, >= 1
    std::size_t fb_terms = 10; // expansion terms kept, >= 1
    double alpha = 0.5;        // RM3 original-query weight, in [0,1]
    double mu = 2500.0;        // RM3 Dirichlet smoothing, > 0
};

/// Bo1 term weight for a candidate with summed feedback frequency tf_x.
double bo1_term_weight(std::uint64_t tf_x, std::uint64_t cf, std::uint64_t num_docs);

/// KL term weight; zero unless the feedback probability exceeds the
/// collection probability.
double kl_term_weight(double p_feedback, double p_collection);

// Pseudo-relevance-feedback expansion over the top fb_docs entries of the
// first pass. Candidate terms come only from those documents; selection ties
// break lexicographically. Bo1/KL merge selected terms into the query as
// w_q(t)/max w_q + w(t)/max w(t).
WeightedQuery expand_bo1(const WeightedQuery& query, const Ranking& first_pass,
                         const InvertedIndex& index, const FeedbackConfig& config);
WeightedQuery expand_kl(const WeightedQuery& query, const Ranking& first_pass,
                        const InvertedIndex& index, const FeedbackConfig& config);

/// RM3 relevance model interpolated with the query's ML distribution; kept
/// weights are positive and renormalized to sum to 1. When every feedback
/// document assigns zero likelihood to the query (a query term absent from
/// the whole collection), document weights fall back to uniform and
/// *fell_back_uniform is set.
WeightedQuery expand_rm3(const WeightedQuery& query, const Ranking& first_pass,
                         const InvertedIndex& index, const FeedbackConfig& config,
                         bool* fell_back_uniform = nullptr);

/// Concatenates externally generated texts onto the query's token multiset
/// and recomputes qtf/qtf_max weights.
WeightedQuery expand_external(const QueryRecord& query,
                              const std::vector<std::string>& generated_texts);

}  // namespace clarirank
