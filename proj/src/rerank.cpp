#include "clarirank/rerank.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <string_view>

#include <json.hpp>

#include "clarirank/expansion.hpp"

namespace clarirank {

namespace {

double vector_norm(std::span<const double> values) {
    double sum = 0.0;
    for (double v : values) sum += v * v;
    return std::sqrt(sum);
}

const std::vector<double>& lookup_vector(const VectorTable& vectors, const std::string& id) {
    const std::vector<double>* vec = vectors.find(id);
    if (vec == nullptr) throw Error("missing vector for id: " + id);
    return *vec;
}

// Reorder the top_n head by (key desc, doc_id asc), replace scores with the
// key, keep the tail untouched.
Ranking reorder_head(const Ranking& ranking, std::size_t top_n,
                     const std::map<std::string, double>& keys) {
    Ranking result = ranking;
    const std::size_t head = std::min(top_n, result.entries.size());
    std::sort(result.entries.begin(), result.entries.begin() + static_cast<std::ptrdiff_t>(head),
              [&](const ScoredDoc& a, const ScoredDoc& b) {
                  const double ka = keys.at(a.doc_id);
                  const double kb = keys.at(b.doc_id);
                  if (ka != kb) return ka > kb;
                  return a.doc_id < b.doc_id;
              });
    for (std::size_t i = 0; i < head; ++i)
        result.entries[i].score = keys.at(result.entries[i].doc_id);
    return result;
}

void check_top_n(const RerankConfig& config) {
    if (config.top_n < 1) throw Error("top_n must be >= 1");
}

}  // namespace

double cosine_similarity(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) throw Error("vector dimension mismatch");
    const double nu = vector_norm(u);
    const double nv = vector_norm(v);
    if (nu == 0.0 || nv == 0.0) throw Error("zero-norm vector");
    double dot = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) dot += u[i] * v[i];
    return dot / (nu * nv);
}

Ranking rerank_cosine(const Ranking& ranking, const VectorTable& vectors,
                      const RerankConfig& config) {
    check_top_n(config);
    const std::vector<double>& query_vec = lookup_vector(vectors, ranking.query_id);
    if (vector_norm(query_vec) == 0.0)
        throw Error("zero-norm vector for id: " + ranking.query_id);

    const std::size_t head = std::min(config.top_n, ranking.entries.size());
    std::map<std::string, double> keys;
    for (std::size_t i = 0; i < head; ++i) {
        const std::string& doc_id = ranking.entries[i].doc_id;
        const std::vector<double>& doc_vec = lookup_vector(vectors, doc_id);
        if (vector_norm(doc_vec) == 0.0) throw Error("zero-norm vector for id: " + doc_id);
        keys[doc_id] = cosine_similarity(query_vec, doc_vec);
    }
    return reorder_head(ranking, config.top_n, keys);
}

Ranking rerank_scores(const Ranking& ranking, const ScoreTable& scores,
                      const RerankConfig& config) {
    check_top_n(config);
    const std::size_t head = std::min(config.top_n, ranking.entries.size());
    std::map<std::string, double> keys;
    for (std::size_t i = 0; i < head; ++i) {
        const std::string& doc_id = ranking.entries[i].doc_id;
        const double* score = scores.find(ranking.query_id, doc_id);
        if (score == nullptr)
            throw Error("missing score for (" + ranking.query_id + ", " + doc_id + ")");
        keys[doc_id] = *score;
    }
    return reorder_head(ranking, config.top_n, keys);
}

ExpansionMethod parse_expansion_method(std::string_view name) {
    if (name == "bo1") return ExpansionMethod::Bo1;
    if (name == "kl") return ExpansionMethod::Kl;
    if (name == "rm3") return ExpansionMethod::Rm3;
    if (name == "file") return ExpansionMethod::External;
    throw Error("unknown expansion method: " + std::string(name));
}

RerankSource parse_rerank_source(std::string_view name) {
    if (name == "vectors") return RerankSource::Vectors;
    if (name == "scores") return RerankSource::Scores;
    throw Error("unknown rerank source: " + std::string(name));
}

namespace {

void check_model(const ModelSpec& spec) {
    if (spec.model == WeightingModel::Bm25) {
        if (spec.bm25.k1 < 0.0) throw Error("k1 must be >= 0");
        if (spec.bm25.b < 0.0 || spec.bm25.b > 1.0) throw Error("b must be in [0,1]");
    } else if (spec.model == WeightingModel::Pl2) {
        if (!(spec.pl2.c > 0.0)) throw Error("c must be > 0");
    }
}

void check_pipeline(const PipelineSpec& spec) {
    if (spec.depth == 0) throw Error("depth must be >= 1");
    check_model(spec.first_stage.model);
    if (spec.expansion) {
        const ExpansionSpec& ex = *spec.expansion;
        if (ex.method != ExpansionMethod::External) {
            if (ex.feedback.fb_docs < 1) throw Error("fb_docs must be >= 1");
            if (ex.feedback.fb_terms < 1) throw Error("fb_terms must be >= 1");
            if (ex.feedback.alpha < 0.0 || ex.feedback.alpha > 1.0)
                throw Error("alpha must be in [0,1]");
            if (!(ex.feedback.mu > 0.0)) throw Error("mu must be > 0");
        }
        if (ex.second_stage) check_model(*ex.second_stage);
    }
    if (spec.rerank && spec.rerank->top_n < 1) throw Error("top_n must be >= 1");
}

WeightedQuery expand_stage(const QueryRecord& query, const WeightedQuery& weighted,
                           const Ranking& first_pass, const InvertedIndex& index,
                           const ExpansionSpec& spec, const AuxTables& aux) {
    switch (spec.method) {
        case ExpansionMethod::Bo1:
            return expand_bo1(weighted, first_pass, index, spec.feedback);
        case ExpansionMethod::Kl:
            return expand_kl(weighted, first_pass, index, spec.feedback);
        case ExpansionMethod::Rm3: {
            bool fell_back = false;
            WeightedQuery expanded =
                expand_rm3(weighted, first_pass, index, spec.feedback, &fell_back);
            if (fell_back)
                std::cerr << "warning: query " << query.query_id
                          << ": all feedback likelihoods zero, using uniform weights\n";
            return expanded;
        }
        case ExpansionMethod::External: {
            if (aux.expansion_texts == nullptr) throw Error("expansion texts not loaded");
            static const std::vector<std::string> kNoTexts;
            auto it = aux.expansion_texts->find(query.query_id);
            return expand_external(query,
                                   it == aux.expansion_texts->end() ? kNoTexts : it->second);
        }
    }
    throw Error("unknown expansion method");
}

}  // namespace

Run run_pipeline(const PipelineSpec& spec, const QuerySet& queries, const InvertedIndex& index,
                 const AuxTables& aux) {
    check_pipeline(spec);
    Run run;
    run.reserve(queries.size());
    for (const QueryRecord& query : queries.queries()) {
        try {
            const bool zero_heuristic = spec.first_stage.zero_heuristic;
            WeightedQuery weighted = make_weighted_query(query);
            Ranking ranking =
                rank(weighted, index, spec.first_stage.model, kDepthAll, zero_heuristic);
            if (spec.expansion) {
                WeightedQuery expanded =
                    expand_stage(query, weighted, ranking, index, *spec.expansion, aux);
                const ModelSpec& second = spec.expansion->second_stage
                                              ? *spec.expansion->second_stage
                                              : spec.first_stage.model;
                ranking = rank(expanded, index, second, kDepthAll, zero_heuristic);
            }
            if (spec.rerank) {
                RerankConfig config{spec.rerank->top_n};
                if (spec.rerank->source == RerankSource::Vectors) {
                    if (aux.vectors == nullptr) throw Error("vector table not loaded");
                    ranking = rerank_cosine(ranking, *aux.vectors, config);
                } else {
                    if (aux.scores == nullptr) throw Error("score table not loaded");
                    ranking = rerank_scores(ranking, *aux.scores, config);
                }
            }
            if (spec.depth < ranking.entries.size()) ranking.entries.resize(spec.depth);
            run.push_back(std::move(ranking));
        } catch (const Error& e) {
            throw Error("query " + query.query_id + ": " + e.what());
        }
    }
    return run;
}

namespace {

using nlohmann::json;

ModelSpec model_from_json(const json& node) {
    ModelSpec spec;
    spec.model = parse_model_name(node.at("model").get<std::string>());
    if (node.contains("params")) {
        const json& params = node.at("params");
        if (spec.model == WeightingModel::Bm25) {
            if (params.contains("k1")) spec.bm25.k1 = params.at("k1").get<double>();
            if (params.contains("b")) spec.bm25.b = params.at("b").get<double>();
        } else if (spec.model == WeightingModel::Pl2) {
            if (params.contains("c")) spec.pl2.c = params.at("c").get<double>();
        } else if (!params.empty()) {
            throw Error("model " + std::string(model_name(spec.model)) + " takes no parameters");
        }
    }
    return spec;
}

}  // namespace

PipelineSpec load_pipeline_spec(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path);
    json root;
    try {
        root = json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }

    try {
        PipelineSpec spec;
        const json& first = root.at("first_stage");
        spec.first_stage.model = model_from_json(first);
        spec.first_stage.zero_heuristic = first.value("zero_heuristic", false);

        if (root.contains("expansion")) {
            const json& ex = root.at("expansion");
            ExpansionSpec expansion;
            expansion.method = parse_expansion_method(ex.at("method").get<std::string>());
            if (ex.contains("fb_docs"))
                expansion.feedback.fb_docs = ex.at("fb_docs").get<std::size_t>();
            if (ex.contains("fb_terms"))
                expansion.feedback.fb_terms = ex.at("fb_terms").get<std::size_t>();
            if (ex.contains("alpha")) expansion.feedback.alpha = ex.at("alpha").get<double>();
            if (ex.contains("mu")) expansion.feedback.mu = ex.at("mu").get<double>();
            if (ex.contains("model")) expansion.second_stage = model_from_json(ex);
            if (expansion.method == ExpansionMethod::External) {
                if (!ex.contains("path"))
                    throw Error("expansion method \"file\" requires a path");
                expansion.texts_path = ex.at("path").get<std::string>();
            }
            spec.expansion = std::move(expansion);
        }

        if (root.contains("rerank")) {
            const json& rr = root.at("rerank");
            RerankSpec rerank;
            rerank.source = parse_rerank_source(rr.at("source").get<std::string>());
            if (rr.contains("top_n")) rerank.top_n = rr.at("top_n").get<std::size_t>();
            rerank.path = rr.at("path").get<std::string>();
            spec.rerank = std::move(rerank);
        }

        if (root.contains("depth")) {
            const json& depth = root.at("depth");
            if (depth.is_string()) {
                if (depth.get<std::string>() != "all")
                    throw Error("depth must be a positive integer or \"all\"");
                spec.depth = kDepthAll;
            } else {
                const auto value = depth.get<std::int64_t>();
                if (value < 1) throw Error("depth must be >= 1");
                spec.depth = static_cast<std::size_t>(value);
            }
        }
        check_pipeline(spec);
        return spec;
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

}  // namespace clarirank
