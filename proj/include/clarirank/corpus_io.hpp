#pragma once

#include <map>
#include <string>
#include <vector>

#include "clarirank/textprep.hpp"
#include "clarirank/types.hpp"

namespace clarirank {

// JSONL, one object per line with string fields "id" and "text";
// unknown fields are ignored.
DocumentSet load_documents(const std::string& path);
DocumentSet load_documents(const std::string& path, const PreprocessOptions& options);
QuerySet load_queries(const std::string& path);
QuerySet load_queries(const std::string& path, const PreprocessOptions& options);

/// Writes documents back out as JSONL ("id", "text"); reloading yields an
/// identical DocumentSet.
void save_documents(const DocumentSet& docs, const std::string& path);

/// Lines "query_id 0 doc_id relevance", whitespace separated; only
/// relevance > 0 is recorded.
Qrels load_qrels(const std::string& path);

/// TSV lines "id<TAB>v1 v2 ... vd"; every vector must have one dimension.
VectorTable load_vectors(const std::string& path);

/// TSV lines "query_id<TAB>doc_id<TAB>score"; duplicate pairs rejected.
ScoreTable load_scores(const std::string& path);

/// JSONL lines {"id": query_id, "texts": [...]} with externally generated
/// expansion texts.
std::map<std::string, std::vector<std::string>> load_expansion_texts(const std::string& path);

/// Standard run format: "query_id Q0 doc_id rank score tag", rank from 1,
/// score with 6 decimal places.
void write_run(const Run& run, const std::string& path, const std::string& tag);
Run read_run(const std::string& path);

}  // namespace clarirank
