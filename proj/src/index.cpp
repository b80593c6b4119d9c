#include "clarirank/index.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>

namespace clarirank {

namespace {

constexpr char kMagic[6] = {'C', 'L', 'R', 'I', 'D', 'X'};
constexpr std::uint32_t kFormatVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
    char bytes[4];
    for (int i = 0; i < 4; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out.write(bytes, 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
    char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out.write(bytes, 8);
}

void put_str(std::ostream& out, const std::string& s) {
    put_u32(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

struct Reader {
    std::istream& in;
    const std::string& path;

    void take(char* dst, std::size_t n) {
        in.read(dst, static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in.gcount()) != n)
            throw IntegrityError("truncated index file: " + path);
    }
    std::uint32_t u32() {
        unsigned char bytes[4];
        take(reinterpret_cast<char*>(bytes), 4);
        std::uint32_t v = 0;
        for (int i = 3; i >= 0; --i) v = (v << 8) | bytes[i];
        return v;
    }
    std::uint64_t u64() {
        unsigned char bytes[8];
        take(reinterpret_cast<char*>(bytes), 8);
        std::uint64_t v = 0;
        for (int i = 7; i >= 0; --i) v = (v << 8) | bytes[i];
        return v;
    }
    std::string str() {
        std::uint32_t n = u32();
        std::string s(n, '\0');
        if (n > 0) take(s.data(), n);
        return s;
    }
};

}  // namespace

InvertedIndex InvertedIndex::build(const DocumentSet& docs) {
    InvertedIndex index;
    index.registry_.reserve(docs.size());
    for (const Document& doc : docs.docs()) {
        auto doc_idx = static_cast<std::uint32_t>(index.registry_.size());
        if (!index.by_id_.emplace(doc.doc_id, doc_idx).second)
            throw Error("duplicate document id: " + doc.doc_id);
        index.registry_.push_back({doc.doc_id, doc.tokens.size()});
        index.total_tokens_ += doc.tokens.size();

        std::map<std::string, std::uint64_t> counts;
        for (const std::string& token : doc.tokens) ++counts[token];
        for (auto& [term, tf] : counts) {
            TermEntry& entry = index.terms_[term];
            entry.postings.push_back({doc_idx, tf});
            entry.cf += tf;
        }
    }
    // Documents are scanned in input order; reorder postings by doc_id.
    for (auto& [term, entry] : index.terms_) {
        std::sort(entry.postings.begin(), entry.postings.end(),
                  [&](const Posting& a, const Posting& b) {
                      return index.registry_[a.doc].doc_id < index.registry_[b.doc].doc_id;
                  });
    }
    return index;
}

std::size_t InvertedIndex::df(std::string_view term) const {
    auto it = terms_.find(term);
    return it == terms_.end() ? 0 : it->second.postings.size();
}

std::uint64_t InvertedIndex::collection_frequency(std::string_view term) const {
    auto it = terms_.find(term);
    return it == terms_.end() ? 0 : it->second.cf;
}

const TermEntry* InvertedIndex::term(std::string_view term) const {
    auto it = terms_.find(term);
    return it == terms_.end() ? nullptr : &it->second;
}

std::uint32_t InvertedIndex::doc_index(const std::string& doc_id) const {
    auto it = by_id_.find(doc_id);
    if (it == by_id_.end()) throw Error("unknown doc_id: " + doc_id);
    return it->second;
}

std::uint64_t InvertedIndex::term_frequency(std::string_view term, std::uint32_t doc) const {
    auto it = terms_.find(term);
    if (it == terms_.end()) return 0;
    const std::string& id = registry_[doc].doc_id;
    const auto& postings = it->second.postings;
    auto pos = std::lower_bound(postings.begin(), postings.end(), id,
                                [&](const Posting& p, const std::string& target) {
                                    return registry_[p.doc].doc_id < target;
                                });
    if (pos == postings.end() || pos->doc != doc) return 0;
    return pos->tf;
}

void InvertedIndex::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write index file: " + path);
    out.write(kMagic, sizeof(kMagic));
    put_u32(out, kFormatVersion);
    put_u64(out, registry_.size());
    put_u64(out, total_tokens_);
    for (const DocEntry& doc : registry_) {
        put_str(out, doc.doc_id);
        put_u64(out, doc.length);
    }
    put_u64(out, terms_.size());
    for (const auto& [term, entry] : terms_) {
        put_str(out, term);
        put_u64(out, entry.cf);
        put_u64(out, entry.postings.size());
        for (const Posting& posting : entry.postings) {
            put_u32(out, posting.doc);
            put_u64(out, posting.tf);
        }
    }
    if (!out) throw Error("write failed: " + path);
}

InvertedIndex InvertedIndex::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open index file: " + path);
    Reader reader{in, path};

    char magic[sizeof(kMagic)];
    reader.take(magic, sizeof(magic));
    if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw IntegrityError("not an index file: " + path);
    std::uint32_t version = reader.u32();
    if (version != kFormatVersion)
        throw VersionError("index file " + path + " has format version " +
                           std::to_string(version) + ", expected " +
                           std::to_string(kFormatVersion));

    InvertedIndex index;
    std::uint64_t num_docs = reader.u64();
    index.total_tokens_ = reader.u64();
    index.registry_.reserve(num_docs);
    std::uint64_t length_sum = 0;
    for (std::uint64_t i = 0; i < num_docs; ++i) {
        DocEntry doc;
        doc.doc_id = reader.str();
        doc.length = reader.u64();
        length_sum += doc.length;
        if (!index.by_id_.emplace(doc.doc_id, static_cast<std::uint32_t>(i)).second)
            throw IntegrityError("duplicate doc_id in index file: " + doc.doc_id);
        index.registry_.push_back(std::move(doc));
    }
    if (length_sum != index.total_tokens_)
        throw IntegrityError("index file " + path + ": document lengths do not sum to total");

    std::uint64_t vocab = reader.u64();
    std::string previous_term;
    for (std::uint64_t i = 0; i < vocab; ++i) {
        std::string term = reader.str();
        if (i > 0 && term <= previous_term)
            throw IntegrityError("index file " + path + ": term dictionary out of order");
        TermEntry entry;
        entry.cf = reader.u64();
        std::uint64_t df = reader.u64();
        if (df == 0 || df > num_docs)
            throw IntegrityError("index file " + path + ": bad document frequency");
        entry.postings.reserve(df);
        std::uint64_t tf_sum = 0;
        for (std::uint64_t p = 0; p < df; ++p) {
            Posting posting;
            posting.doc = reader.u32();
            posting.tf = reader.u64();
            if (posting.doc >= num_docs || posting.tf == 0)
                throw IntegrityError("index file " + path + ": bad posting");
            if (p > 0 && index.registry_[posting.doc].doc_id <=
                             index.registry_[entry.postings.back().doc].doc_id)
                throw IntegrityError("index file " + path + ": postings out of order");
            tf_sum += posting.tf;
            entry.postings.push_back(posting);
        }
        if (tf_sum != entry.cf)
            throw IntegrityError("index file " + path + ": postings do not sum to cf");
        previous_term = term;
        index.terms_.emplace(std::move(term), std::move(entry));
    }
    if (in.peek() != std::char_traits<char>::eof())
        throw IntegrityError("trailing bytes in index file: " + path);
    return index;
}

}  // namespace clarirank
