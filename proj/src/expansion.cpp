#include "clarirank/expansion.hpp"

#include <algorithm>
#include <cmath>

#include "clarirank/textprep.hpp"
#include "clarirank/weighting.hpp"

namespace clarirank {

namespace {

// Feedback view: the pseudo-relevant head of the first pass plus the term
// frequencies of every term occurring in it, gathered in one pass over the
// posting lists.
struct FeedbackView {
    std::vector<std::uint32_t> docs;       // registry indices
    std::vector<std::uint64_t> lengths;    // parallel to docs
    std::uint64_t total_length = 0;
    std::map<std::string, std::vector<std::uint64_t>> term_tfs;  // per feedback doc
};

FeedbackView gather_feedback(const Ranking& first_pass, const InvertedIndex& index,
                             std::size_t fb_docs) {
    if (first_pass.entries.empty()) throw Error("no feedback documents");
    FeedbackView view;
    const std::size_t count = std::min(fb_docs, first_pass.entries.size());
    std::unordered_map<std::uint32_t, std::size_t> slot_of;
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint32_t doc = index.doc_index(first_pass.entries[i].doc_id);
        view.docs.push_back(doc);
        view.lengths.push_back(index.doc_length(doc));
        view.total_length += index.doc_length(doc);
        slot_of.emplace(doc, i);
    }
    for (const auto& [term, entry] : index.terms()) {
        for (const Posting& posting : entry.postings) {
            auto it = slot_of.find(posting.doc);
            if (it == slot_of.end()) continue;
            auto& tfs = view.term_tfs[term];
            if (tfs.empty()) tfs.resize(count, 0);
            tfs[it->second] = posting.tf;
        }
    }
    return view;
}

struct Candidate {
    std::string term;
    double weight = 0.0;
};

// Highest-weight prefix, ties broken lexicographically so growing fb_terms
// only extends the selection.
std::vector<Candidate> select_top(std::vector<Candidate> candidates, std::size_t fb_terms) {
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.weight != b.weight) return a.weight > b.weight;
        return a.term < b.term;
    });
    if (candidates.size() > fb_terms) candidates.resize(fb_terms);
    return candidates;
}

// Bo1/KL merge: max-normalized original weights plus max-normalized
// expansion weights.
WeightedQuery merge_expansion(const WeightedQuery& query, const std::vector<Candidate>& selected) {
    WeightedQuery result;
    result.query_id = query.query_id;
    result.provenance = QueryProvenance::Expanded;

    double max_query = 0.0;
    for (const auto& [term, weight] : query.terms) max_query = std::max(max_query, weight);
    for (const auto& [term, weight] : query.terms) result.terms[term] = weight / max_query;

    double max_selected = 0.0;
    for (const Candidate& c : selected) max_selected = std::max(max_selected, c.weight);
    for (const Candidate& c : selected) result.terms[c.term] += c.weight / max_selected;
    return result;
}

void check_config(const FeedbackConfig& config) {
    if (config.fb_docs < 1) throw Error("fb_docs must be >= 1");
    if (config.fb_terms < 1) throw Error("fb_terms must be >= 1");
    if (config.alpha < 0.0 || config.alpha > 1.0) throw Error("alpha must be in [0,1]");
    if (!(config.mu > 0.0)) throw Error("mu must be > 0");
}

}  // namespace

double bo1_term_weight(std::uint64_t tf_x, std::uint64_t cf, std::uint64_t num_docs) {
    const double p_n = static_cast<double>(cf) / static_cast<double>(num_docs);
    return static_cast<double>(tf_x) * std::log2((1.0 + p_n) / p_n) + std::log2(1.0 + p_n);
}

double kl_term_weight(double p_feedback, double p_collection) {
    if (p_feedback <= p_collection) return 0.0;
    return p_feedback * std::log2(p_feedback / p_collection);
}

WeightedQuery expand_bo1(const WeightedQuery& query, const Ranking& first_pass,
                         const InvertedIndex& index, const FeedbackConfig& config) {
    check_config(config);
    FeedbackView view = gather_feedback(first_pass, index, config.fb_docs);

    std::vector<Candidate> candidates;
    candidates.reserve(view.term_tfs.size());
    for (const auto& [term, tfs] : view.term_tfs) {
        std::uint64_t tf_x = 0;
        for (std::uint64_t tf : tfs) tf_x += tf;
        candidates.push_back({term, bo1_term_weight(tf_x, index.collection_frequency(term),
                                                    index.num_docs())});
    }
    return merge_expansion(query, select_top(std::move(candidates), config.fb_terms));
}

WeightedQuery expand_kl(const WeightedQuery& query, const Ranking& first_pass,
                        const InvertedIndex& index, const FeedbackConfig& config) {
    check_config(config);
    FeedbackView view = gather_feedback(first_pass, index, config.fb_docs);

    std::vector<Candidate> candidates;
    for (const auto& [term, tfs] : view.term_tfs) {
        std::uint64_t tf_x = 0;
        for (std::uint64_t tf : tfs) tf_x += tf;
        const double p_x = static_cast<double>(tf_x) / static_cast<double>(view.total_length);
        const double p_c = static_cast<double>(index.collection_frequency(term)) /
                           static_cast<double>(index.total_tokens());
        const double w = kl_term_weight(p_x, p_c);
        if (w > 0.0) candidates.push_back({term, w});
    }
    return merge_expansion(query, select_top(std::move(candidates), config.fb_terms));
}

WeightedQuery expand_rm3(const WeightedQuery& query, const Ranking& first_pass,
                         const InvertedIndex& index, const FeedbackConfig& config,
                         bool* fell_back_uniform) {
    check_config(config);
    if (fell_back_uniform != nullptr) *fell_back_uniform = false;
    FeedbackView view = gather_feedback(first_pass, index, config.fb_docs);
    const std::size_t count = view.docs.size();
    const double total_tokens = static_cast<double>(index.total_tokens());

    // Dirichlet-smoothed P(t|d) for feedback slot i.
    auto p_term_doc = [&](std::string_view term, std::uint64_t tf, std::size_t i) {
        const double background =
            static_cast<double>(index.collection_frequency(term)) / total_tokens;
        return (static_cast<double>(tf) + config.mu * background) /
               (static_cast<double>(view.lengths[i]) + config.mu);
    };
    auto feedback_tf = [&](const std::string& term, std::size_t i) -> std::uint64_t {
        auto it = view.term_tfs.find(term);
        return it == view.term_tfs.end() ? 0 : it->second[i];
    };

    // Query likelihood per feedback doc, one factor per distinct query term,
    // normalized to a distribution over the feedback set.
    std::vector<double> likelihood(count, 1.0);
    for (std::size_t i = 0; i < count; ++i)
        for (const auto& [term, weight] : query.terms)
            likelihood[i] *= p_term_doc(term, feedback_tf(term, i), i);
    double likelihood_sum = 0.0;
    for (double v : likelihood) likelihood_sum += v;
    if (likelihood_sum <= 0.0) {
        // A query term absent from the whole collection zeroes every
        // likelihood; fall back to uniform document weights.
        std::fill(likelihood.begin(), likelihood.end(), 1.0 / static_cast<double>(count));
        if (fell_back_uniform != nullptr) *fell_back_uniform = true;
    } else {
        for (double& v : likelihood) v /= likelihood_sum;
    }

    auto relevance_model = [&](const std::string& term) {
        double p = 0.0;
        for (std::size_t i = 0; i < count; ++i)
            p += likelihood[i] * p_term_doc(term, feedback_tf(term, i), i);
        return p;
    };

    // P_mle over the query's weighted terms.
    double query_weight_sum = 0.0;
    for (const auto& [term, weight] : query.terms) query_weight_sum += weight;
    auto p_mle = [&](const std::string& term) {
        auto it = query.terms.find(term);
        return it == query.terms.end() ? 0.0 : it->second / query_weight_sum;
    };

    auto interpolate = [&](const std::string& term) {
        return config.alpha * p_mle(term) + (1.0 - config.alpha) * relevance_model(term);
    };

    // Top fb_terms feedback candidates by interpolated probability, plus
    // every original query term.
    std::vector<Candidate> candidates;
    candidates.reserve(view.term_tfs.size());
    for (const auto& [term, tfs] : view.term_tfs) candidates.push_back({term, interpolate(term)});
    std::vector<Candidate> selected = select_top(std::move(candidates), config.fb_terms);

    std::map<std::string, double> kept;
    for (const Candidate& c : selected)
        if (c.weight > 0.0) kept[c.term] = c.weight;
    for (const auto& [term, weight] : query.terms) {
        const double p = interpolate(term);
        if (p > 0.0) kept[term] = p;
    }

    double kept_sum = 0.0;
    for (const auto& [term, p] : kept) kept_sum += p;

    WeightedQuery result;
    result.query_id = query.query_id;
    result.provenance = QueryProvenance::Expanded;
    for (auto& [term, p] : kept) result.terms[term] = p / kept_sum;
    return result;
}

WeightedQuery expand_external(const QueryRecord& query,
                              const std::vector<std::string>& generated_texts) {
    TokenList merged = query.tokens;
    for (const std::string& text : generated_texts) {
        TokenList tokens = preprocess(text);
        merged.insert(merged.end(), std::make_move_iterator(tokens.begin()),
                      std::make_move_iterator(tokens.end()));
    }
    WeightedQuery result = make_weighted_query(query.query_id, merged);
    result.provenance = QueryProvenance::Expanded;
    return result;
}

}  // namespace clarirank
