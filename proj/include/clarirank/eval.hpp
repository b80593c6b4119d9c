#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "clarirank/index.hpp"
#include "clarirank/types.hpp"

namespace clarirank {

struct QueryEval {
    std::size_t first_relevant_rank = 0;  // 1-based; 0 = not retrieved
    double reciprocal_rank = 0.0;         // 1/rank, cutoff-free
};

struct EvalReport {
    std::vector<std::size_t> cutoffs;
    std::map<std::size_t, double> mrr;  // cutoff -> MRR@cutoff
    std::map<std::string, QueryEval> per_query;
    std::size_t query_count = 0;
};

/// Mean over queries of 1/rank of the first relevant doc, 0 beyond the
/// cutoff. Every run query must be judged; the run must be non-empty.
double mrr_at_k(const Run& run, const Qrels& qrels, std::size_t k);

EvalReport evaluate(const Run& run, const Qrels& qrels, std::vector<std::size_t> cutoffs);

/// Aligned text ("MRR@5  0.250000000000") and the JSON form with 12
/// significant digits.
std::string format_report_text(const EvalReport& report);
std::string format_report_json(const EvalReport& report);

struct GridCell {
    double k1 = 0.0;
    double b = 0.0;
    double mrr = 0.0;
};

struct GridSearchResult {
    std::vector<GridCell> cells;      // k1-major, both grids in given order
    std::size_t best = 0;             // argmax; ties by smaller k1 then smaller b
    std::size_t objective_cutoff = 10;
};

/// Evaluates MRR@objective for every (k1, b) cell with BM25 rankings at the
/// objective depth. Deterministic regardless of evaluation order.
GridSearchResult grid_search_bm25(const InvertedIndex& index, const QuerySet& queries,
                                  const Qrels& qrels, const std::vector<double>& k1_grid,
                                  const std::vector<double>& b_grid,
                                  std::size_t objective_cutoff, bool zero_heuristic);

/// TSV table "k1<TAB>b<TAB>mrr" plus a trailing "# best k1=... b=... mrr=..." line.
std::string format_grid_tsv(const GridSearchResult& result);

}  // namespace clarirank
