#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "clarirank/error.hpp"

namespace clarirank {

/// Ordered sequence of non-empty lowercase tokens (no uppercase, no punctuation).
using TokenList = std::vector<std::string>;

/// One clarification question from the candidate pool.
struct Document {
    std::string doc_id;
    std::string raw_text;
    TokenList tokens;
    std::size_t length = 0;  // always tokens.size()
};

/// Question pool in load order. Rejects duplicate ids.
class DocumentSet {
  public:
    void add(Document doc);
    const std::vector<Document>& docs() const { return docs_; }
    const Document* find(const std::string& id) const;
    std::size_t size() const { return docs_.size(); }
    bool empty() const { return docs_.empty(); }

  private:
    std::vector<Document> docs_;
    std::unordered_map<std::string, std::size_t> by_id_;
};

/// One instruction (optionally with concatenated dialogue context).
struct QueryRecord {
    std::string query_id;
    std::string raw_text;
    TokenList tokens;
};

class QuerySet {
  public:
    void add(QueryRecord query);
    const std::vector<QueryRecord>& queries() const { return queries_; }
    std::size_t size() const { return queries_.size(); }
    bool empty() const { return queries_.empty(); }

  private:
    std::vector<QueryRecord> queries_;
    std::unordered_map<std::string, std::size_t> by_id_;
};

/// query_id -> relevant doc ids; entries are always non-empty.
using Qrels = std::map<std::string, std::set<std::string>>;

/// Dense vectors keyed by id, all of one dimension.
struct VectorTable {
    std::size_t dim = 0;
    std::unordered_map<std::string, std::vector<double>> vectors;

    const std::vector<double>* find(const std::string& id) const {
        auto it = vectors.find(id);
        return it == vectors.end() ? nullptr : &it->second;
    }
};

/// Externally produced (query_id, doc_id) -> score table.
struct ScoreTable {
    std::map<std::pair<std::string, std::string>, double> scores;

    const double* find(const std::string& query_id, const std::string& doc_id) const {
        auto it = scores.find({query_id, doc_id});
        return it == scores.end() ? nullptr : &it->second;
    }
};

enum class QueryProvenance { Plain, Expanded };

/// Query as weighted terms; the type every weighting model consumes.
struct WeightedQuery {
    std::string query_id;
    std::map<std::string, double> terms;  // weight > 0 for every term
    QueryProvenance provenance = QueryProvenance::Plain;
};

struct ScoredDoc {
    std::string doc_id;
    double score = 0.0;
};

/// Ordered result list for one query.
struct Ranking {
    std::string query_id;
    std::vector<ScoredDoc> entries;
    bool zero_heuristic = false;  // whether the zero-score block was length-ordered
};

/// One Ranking per query, in query input order.
using Run = std::vector<Ranking>;

}  // namespace clarirank
