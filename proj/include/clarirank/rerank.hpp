#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "clarirank/expansion.hpp"
#include "clarirank/index.hpp"
#include "clarirank/types.hpp"
#include "clarirank/weighting.hpp"

namespace clarirank {

struct RerankConfig {
    std::size_t top_n = 20;  // head size, >= 1
};

/// Throws Error on a zero-norm operand.
double cosine_similarity(std::span<const double> u, std::span<const double> v);

/// Reorders the head (first min(top_n, size) entries) by cosine similarity
/// between the query vector and each document vector, descending, ties by
/// doc_id. Head scores become the cosine values; the tail is untouched.
Ranking rerank_cosine(const Ranking& ranking, const VectorTable& vectors,
                      const RerankConfig& config);

/// Reorders the head by external (query, doc) scores, descending, ties by
/// doc_id. Tail untouched.
Ranking rerank_scores(const Ranking& ranking, const ScoreTable& table,
                      const RerankConfig& config);

// ---------------------------------------------------------------------------
// Two-stage pipeline composition.

enum class ExpansionMethod { Bo1, Kl, Rm3, External };
enum class RerankSource { Vectors, Scores };

struct FirstStageSpec {
    ModelSpec model;
    bool zero_heuristic = false;
};

struct ExpansionSpec {
    ExpansionMethod method = ExpansionMethod::Bo1;
    FeedbackConfig feedback;
    std::optional<ModelSpec> second_stage;  // first-stage model reused when absent
    std::string texts_path;                 // External method only
};

struct RerankSpec {
    RerankSource source = RerankSource::Vectors;
    std::size_t top_n = 20;
    std::string path;  // vectors or scores file
};

struct PipelineSpec {
    FirstStageSpec first_stage;
    std::optional<ExpansionSpec> expansion;
    std::optional<RerankSpec> rerank;
    std::size_t depth = kDepthAll;
};

/// Tables referenced by the pipeline, loaded by the caller.
struct AuxTables {
    const VectorTable* vectors = nullptr;
    const ScoreTable* scores = nullptr;
    const std::map<std::string, std::vector<std::string>>* expansion_texts = nullptr;
};

/// Per query: first-stage rank at full depth, optional expansion plus second
/// pass, optional head rerank, then truncation to depth. Stage errors are
/// rethrown with the query id attached.
Run run_pipeline(const PipelineSpec& spec, const QuerySet& queries,
                 const InvertedIndex& index, const AuxTables& aux);

/// Reads the JSON pipeline config (fields first_stage, expansion, rerank).
PipelineSpec load_pipeline_spec(const std::string& path);

ExpansionMethod parse_expansion_method(std::string_view name);
RerankSource parse_rerank_source(std::string_view name);

}  // namespace clarirank
