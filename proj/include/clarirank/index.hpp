#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "clarirank/types.hpp"

namespace clarirank {

/// One (document, term frequency) pair; doc indexes the registry.
struct Posting {
    std::uint32_t doc = 0;
    std::uint64_t tf = 0;
};

/// Per-term dictionary entry. df(t) is postings.size(), cf is F(t).
struct TermEntry {
    std::vector<Posting> postings;  // sorted by doc_id ascending
    std::uint64_t cf = 0;
};

struct CollectionStats {
    std::uint64_t num_docs = 0;
    std::uint64_t total_tokens = 0;
    double avgdl = 0.0;
};

/// Immutable inverted index over a DocumentSet. Safe for any number of
/// concurrent readers once built.
class InvertedIndex {
  public:
    static InvertedIndex build(const DocumentSet& docs);

    /// Versioned binary file; byte-identical across rebuilds from the same
    /// DocumentSet.
    void save(const std::string& path) const;
    static InvertedIndex load(const std::string& path);

    CollectionStats stats() const { return {num_docs(), total_tokens_, avgdl()}; }
    std::uint64_t num_docs() const { return registry_.size(); }
    std::uint64_t total_tokens() const { return total_tokens_; }
    double avgdl() const {
        return registry_.empty() ? 0.0
                                 : static_cast<double>(total_tokens_) / static_cast<double>(registry_.size());
    }
    std::size_t vocab_size() const { return terms_.size(); }

    std::size_t df(std::string_view term) const;
    std::uint64_t collection_frequency(std::string_view term) const;  // F(t)
    const TermEntry* term(std::string_view term) const;
    const std::map<std::string, TermEntry, std::less<>>& terms() const { return terms_; }

    bool has_doc(const std::string& doc_id) const { return by_id_.count(doc_id) != 0; }
    /// Throws Error for an unknown id.
    std::uint32_t doc_index(const std::string& doc_id) const;
    const std::string& doc_id(std::uint32_t index) const { return registry_[index].doc_id; }
    std::uint64_t doc_length(std::uint32_t index) const { return registry_[index].length; }

    /// tf of term in the given document, 0 when absent. Binary search over
    /// the posting list.
    std::uint64_t term_frequency(std::string_view term, std::uint32_t doc) const;

  private:
    struct DocEntry {
        std::string doc_id;
        std::uint64_t length = 0;
    };

    std::vector<DocEntry> registry_;  // input order
    std::unordered_map<std::string, std::uint32_t> by_id_;
    std::map<std::string, TermEntry, std::less<>> terms_;
    std::uint64_t total_tokens_ = 0;
};

}  // namespace clarirank
