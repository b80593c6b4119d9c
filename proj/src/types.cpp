#include "clarirank/types.hpp"

namespace clarirank {

void DocumentSet::add(Document doc) {
    auto [it, inserted] = by_id_.emplace(doc.doc_id, docs_.size());
    if (!inserted) throw Error("duplicate document id: " + doc.doc_id);
    docs_.push_back(std::move(doc));
}

const Document* DocumentSet::find(const std::string& id) const {
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &docs_[it->second];
}

void QuerySet::add(QueryRecord query) {
    auto [it, inserted] = by_id_.emplace(query.query_id, queries_.size());
    if (!inserted) throw Error("duplicate query id: " + query.query_id);
    queries_.push_back(std::move(query));
}

}  // namespace clarirank
