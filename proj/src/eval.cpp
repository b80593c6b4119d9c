#include "clarirank/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "clarirank/weighting.hpp"

namespace clarirank {

namespace {

std::string format_double(double value, const char* spec) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), spec, value);
    return buffer;
}

// Rank of the first relevant entry, or 0 if none is retrieved.
std::size_t first_relevant_rank(const Ranking& ranking, const Qrels& qrels) {
    auto it = qrels.find(ranking.query_id);
    if (it == qrels.end())
        throw Error("query " + ranking.query_id + " has no relevance judgments");
    const std::set<std::string>& relevant = it->second;
    for (std::size_t i = 0; i < ranking.entries.size(); ++i)
        if (relevant.count(ranking.entries[i].doc_id) != 0) return i + 1;
    return 0;
}

double mean_reciprocal_rank(const std::vector<std::size_t>& ranks, std::size_t k) {
    double sum = 0.0;
    for (std::size_t rank : ranks)
        if (rank >= 1 && rank <= k) sum += 1.0 / static_cast<double>(rank);
    return sum / static_cast<double>(ranks.size());
}

std::vector<std::size_t> collect_ranks(const Run& run, const Qrels& qrels) {
    if (run.empty()) throw Error("empty run");
    std::vector<std::size_t> ranks;
    ranks.reserve(run.size());
    for (const Ranking& ranking : run) ranks.push_back(first_relevant_rank(ranking, qrels));
    return ranks;
}

}  // namespace

double mrr_at_k(const Run& run, const Qrels& qrels, std::size_t k) {
    if (k == 0) throw Error("cutoff must be >= 1");
    return mean_reciprocal_rank(collect_ranks(run, qrels), k);
}

EvalReport evaluate(const Run& run, const Qrels& qrels, std::vector<std::size_t> cutoffs) {
    if (cutoffs.empty()) throw Error("no cutoffs given");
    for (std::size_t k : cutoffs)
        if (k == 0) throw Error("cutoff must be >= 1");
    std::vector<std::size_t> ranks = collect_ranks(run, qrels);

    EvalReport report;
    report.cutoffs = std::move(cutoffs);
    std::sort(report.cutoffs.begin(), report.cutoffs.end());
    report.cutoffs.erase(std::unique(report.cutoffs.begin(), report.cutoffs.end()),
                         report.cutoffs.end());
    report.query_count = run.size();
    for (std::size_t k : report.cutoffs) report.mrr[k] = mean_reciprocal_rank(ranks, k);
    for (std::size_t i = 0; i < run.size(); ++i) {
        QueryEval qe;
        qe.first_relevant_rank = ranks[i];
        qe.reciprocal_rank = ranks[i] == 0 ? 0.0 : 1.0 / static_cast<double>(ranks[i]);
        report.per_query[run[i].query_id] = qe;
    }
    return report;
}

std::string format_report_text(const EvalReport& report) {
    std::size_t width = 0;
    for (std::size_t k : report.cutoffs)
        width = std::max(width, 4 + std::to_string(k).size());
    std::ostringstream out;
    out << "queries " << report.query_count << "\n";
    for (std::size_t k : report.cutoffs) {
        std::string label = "MRR@" + std::to_string(k);
        label.resize(width, ' ');
        out << label << "  " << format_double(report.mrr.at(k), "%.12f") << "\n";
    }
    return out.str();
}

std::string format_report_json(const EvalReport& report) {
    using nlohmann::json;
    auto quote = [](const std::string& s) { return json(s).dump(); };

    std::string out = "{";
    for (std::size_t k : report.cutoffs) {
        out += quote("MRR@" + std::to_string(k));
        out += ": ";
        out += format_double(report.mrr.at(k), "%.12g");
        out += ", ";
    }
    out += "\"query_count\": " + std::to_string(report.query_count);
    out += ", \"per_query\": {";
    bool first = true;
    for (const auto& [query_id, qe] : report.per_query) {
        if (!first) out += ", ";
        first = false;
        out += quote(query_id);
        out += ": {\"first_relevant_rank\": " + std::to_string(qe.first_relevant_rank);
        out += ", \"reciprocal_rank\": " + format_double(qe.reciprocal_rank, "%.12g") + "}";
    }
    out += "}}\n";
    return out;
}

GridSearchResult grid_search_bm25(const InvertedIndex& index, const QuerySet& queries,
                                  const Qrels& qrels, const std::vector<double>& k1_grid,
                                  const std::vector<double>& b_grid, std::size_t objective_cutoff,
                                  bool zero_heuristic) {
    if (k1_grid.empty() || b_grid.empty()) throw Error("empty parameter grid");
    if (objective_cutoff == 0) throw Error("cutoff must be >= 1");
    for (double k1 : k1_grid)
        if (k1 < 0.0) throw Error("k1 must be >= 0");
    for (double b : b_grid)
        if (b < 0.0 || b > 1.0) throw Error("b must be in [0,1]");
    if (queries.empty()) throw Error("no queries");

    std::vector<WeightedQuery> weighted;
    weighted.reserve(queries.size());
    for (const QueryRecord& query : queries.queries()) weighted.push_back(make_weighted_query(query));

    GridSearchResult result;
    result.objective_cutoff = objective_cutoff;
    for (double k1 : k1_grid) {
        for (double b : b_grid) {
            ModelSpec spec;
            spec.model = WeightingModel::Bm25;
            spec.bm25 = {k1, b};
            Run run;
            run.reserve(weighted.size());
            for (const WeightedQuery& query : weighted)
                run.push_back(rank(query, index, spec, objective_cutoff, zero_heuristic));
            result.cells.push_back({k1, b, mrr_at_k(run, qrels, objective_cutoff)});
        }
    }

    result.best = 0;
    for (std::size_t i = 1; i < result.cells.size(); ++i) {
        const GridCell& cell = result.cells[i];
        const GridCell& best = result.cells[result.best];
        if (cell.mrr > best.mrr ||
            (cell.mrr == best.mrr &&
             (cell.k1 < best.k1 || (cell.k1 == best.k1 && cell.b < best.b))))
            result.best = i;
    }
    return result;
}

std::string format_grid_tsv(const GridSearchResult& result) {
    std::string out;
    for (const GridCell& cell : result.cells) {
        out += format_double(cell.k1, "%g");
        out += '\t';
        out += format_double(cell.b, "%g");
        out += '\t';
        out += format_double(cell.mrr, "%.12f");
        out += '\n';
    }
    const GridCell& best = result.cells.at(result.best);
    out += "# best k1=" + format_double(best.k1, "%g") + " b=" + format_double(best.b, "%g") +
           " mrr=" + format_double(best.mrr, "%.12f") + "\n";
    return out;
}

}  // namespace clarirank
