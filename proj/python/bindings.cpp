#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "clarirank/cli.hpp"
#include "clarirank/corpus_io.hpp"
#include "clarirank/eval.hpp"
#include "clarirank/expansion.hpp"
#include "clarirank/index.hpp"
#include "clarirank/rerank.hpp"
#include "clarirank/textprep.hpp"
#include "clarirank/weighting.hpp"

namespace py = pybind11;
using namespace clarirank;

namespace {

ModelSpec make_spec(const std::string& model, double k1, double b, double c) {
    ModelSpec spec;
    spec.model = parse_model_name(model);
    spec.bm25 = {k1, b};
    spec.pl2 = {c};
    return spec;
}

FeedbackConfig make_feedback(std::size_t fb_docs, std::size_t fb_terms, double alpha, double mu) {
    return {fb_docs, fb_terms, alpha, mu};
}

py::dict report_to_dict(const EvalReport& report) {
    py::dict mrr;
    for (const auto& [k, value] : report.mrr) mrr[py::str("MRR@" + std::to_string(k))] = value;
    py::dict per_query;
    for (const auto& [query_id, qe] : report.per_query) {
        py::dict entry;
        entry["first_relevant_rank"] = qe.first_relevant_rank;
        entry["reciprocal_rank"] = qe.reciprocal_rank;
        per_query[py::str(query_id)] = entry;
    }
    py::dict out;
    out["mrr"] = mrr;
    out["per_query"] = per_query;
    out["query_count"] = report.query_count;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "clarification-question ranking engine";
    m.attr("__version__") = "1.0.0";

    py::register_exception<Error>(m, "ClarirankError", PyExc_RuntimeError);

    m.def("preprocess", [](const std::string& text) { return preprocess(text); },
          py::arg("text"));

    py::class_<Document>(m, "Document")
        .def_readonly("doc_id", &Document::doc_id)
        .def_readonly("raw_text", &Document::raw_text)
        .def_readonly("tokens", &Document::tokens)
        .def_readonly("length", &Document::length);

    py::class_<DocumentSet>(m, "DocumentSet")
        .def(py::init<>())
        .def("add",
             [](DocumentSet& docs, const std::string& doc_id, const std::string& text) {
                 Document doc;
                 doc.doc_id = doc_id;
                 doc.raw_text = text;
                 doc.tokens = preprocess(text);
                 doc.length = doc.tokens.size();
                 docs.add(std::move(doc));
             },
             py::arg("doc_id"), py::arg("text"))
        .def("__len__", &DocumentSet::size)
        .def("docs", &DocumentSet::docs, py::return_value_policy::reference_internal);

    py::class_<QueryRecord>(m, "QueryRecord")
        .def(py::init([](const std::string& query_id, const std::string& text) {
                 QueryRecord query;
                 query.query_id = query_id;
                 query.raw_text = text;
                 query.tokens = preprocess(text);
                 return query;
             }),
             py::arg("query_id"), py::arg("text"))
        .def_readonly("query_id", &QueryRecord::query_id)
        .def_readonly("raw_text", &QueryRecord::raw_text)
        .def_readonly("tokens", &QueryRecord::tokens);

    py::class_<QuerySet>(m, "QuerySet")
        .def(py::init<>())
        .def("add", [](QuerySet& queries, const QueryRecord& query) { queries.add(query); },
             py::arg("query"))
        .def("__len__", &QuerySet::size)
        .def("queries", &QuerySet::queries, py::return_value_policy::reference_internal);

    py::class_<WeightedQuery>(m, "WeightedQuery")
        .def_readonly("query_id", &WeightedQuery::query_id)
        .def_readonly("terms", &WeightedQuery::terms)
        .def_property_readonly("expanded", [](const WeightedQuery& query) {
            return query.provenance == QueryProvenance::Expanded;
        });

    py::class_<ScoredDoc>(m, "ScoredDoc")
        .def_readonly("doc_id", &ScoredDoc::doc_id)
        .def_readonly("score", &ScoredDoc::score)
        .def("__repr__", [](const ScoredDoc& doc) {
            std::ostringstream out;
            out << "ScoredDoc(" << doc.doc_id << ", " << doc.score << ")";
            return out.str();
        });

    py::class_<Ranking>(m, "Ranking")
        .def_readonly("query_id", &Ranking::query_id)
        .def_readonly("entries", &Ranking::entries)
        .def_readonly("zero_heuristic", &Ranking::zero_heuristic)
        .def("__len__", [](const Ranking& r) { return r.entries.size(); });

    py::class_<InvertedIndex>(m, "InvertedIndex")
        .def_static("build", &InvertedIndex::build, py::arg("docs"))
        .def_static("load", &InvertedIndex::load, py::arg("path"))
        .def("save", &InvertedIndex::save, py::arg("path"))
        .def_property_readonly("num_docs", &InvertedIndex::num_docs)
        .def_property_readonly("total_tokens", &InvertedIndex::total_tokens)
        .def_property_readonly("avgdl", &InvertedIndex::avgdl)
        .def_property_readonly("vocab_size", &InvertedIndex::vocab_size)
        .def("df", [](const InvertedIndex& index, const std::string& term) {
                 return index.df(term);
             }, py::arg("term"))
        .def("collection_frequency",
             [](const InvertedIndex& index, const std::string& term) {
                 return index.collection_frequency(term);
             },
             py::arg("term"))
        .def("term_frequency",
             [](const InvertedIndex& index, const std::string& term, const std::string& doc_id) {
                 return index.term_frequency(term, index.doc_index(doc_id));
             },
             py::arg("term"), py::arg("doc_id"))
        .def("doc_length",
             [](const InvertedIndex& index, const std::string& doc_id) {
                 return index.doc_length(index.doc_index(doc_id));
             },
             py::arg("doc_id"));

    m.def("load_documents",
          [](const std::string& path) { return load_documents(path); }, py::arg("path"));
    m.def("load_queries", [](const std::string& path) { return load_queries(path); },
          py::arg("path"));
    m.def("load_qrels", &load_qrels, py::arg("path"));
    m.def("write_run", &write_run, py::arg("run"), py::arg("path"), py::arg("tag"));
    m.def("read_run", &read_run, py::arg("path"));

    m.def("make_weighted_query",
          [](const std::string& query_id, const TokenList& tokens) {
              return make_weighted_query(query_id, tokens);
          },
          py::arg("query_id"), py::arg("tokens"));

    m.def("score",
          [](const WeightedQuery& query, const std::string& doc_id, const InvertedIndex& index,
             const std::string& model, double k1, double b, double c) {
              return score(query, doc_id, index, make_spec(model, k1, b, c));
          },
          py::arg("query"), py::arg("doc_id"), py::arg("index"), py::arg("model") = "bm25",
          py::arg("k1") = 1.2, py::arg("b") = 0.75, py::arg("c") = 1.0);

    m.def("rank",
          [](const WeightedQuery& query, const InvertedIndex& index, const std::string& model,
             double k1, double b, double c, std::size_t depth, bool zero_heuristic) {
              return rank(query, index, make_spec(model, k1, b, c), depth, zero_heuristic);
          },
          py::arg("query"), py::arg("index"), py::arg("model") = "bm25", py::arg("k1") = 1.2,
          py::arg("b") = 0.75, py::arg("c") = 1.0, py::arg("depth") = kDepthAll,
          py::arg("zero_heuristic") = false);

    m.def("expand_bo1",
          [](const WeightedQuery& query, const Ranking& first_pass, const InvertedIndex& index,
             std::size_t fb_docs, std::size_t fb_terms) {
              return expand_bo1(query, first_pass, index,
                                make_feedback(fb_docs, fb_terms, 0.5, 2500.0));
          },
          py::arg("query"), py::arg("first_pass"), py::arg("index"), py::arg("fb_docs") = 3,
          py::arg("fb_terms") = 10);
    m.def("expand_kl",
          [](const WeightedQuery& query, const Ranking& first_pass, const InvertedIndex& index,
             std::size_t fb_docs, std::size_t fb_terms) {
              return expand_kl(query, first_pass, index,
                               make_feedback(fb_docs, fb_terms, 0.5, 2500.0));
          },
          py::arg("query"), py::arg("first_pass"), py::arg("index"), py::arg("fb_docs") = 3,
          py::arg("fb_terms") = 10);
    m.def("expand_rm3",
          [](const WeightedQuery& query, const Ranking& first_pass, const InvertedIndex& index,
             std::size_t fb_docs, std::size_t fb_terms, double alpha, double mu) {
              return expand_rm3(query, first_pass, index,
                                make_feedback(fb_docs, fb_terms, alpha, mu));
          },
          py::arg("query"), py::arg("first_pass"), py::arg("index"), py::arg("fb_docs") = 3,
          py::arg("fb_terms") = 10, py::arg("alpha") = 0.5, py::arg("mu") = 2500.0);
    m.def("expand_external", &expand_external, py::arg("query"), py::arg("generated_texts"));

    m.def("cosine_similarity",
          [](const std::vector<double>& u, const std::vector<double>& v) {
              return cosine_similarity(u, v);
          },
          py::arg("u"), py::arg("v"));

    m.def("mrr_at_k", &mrr_at_k, py::arg("run"), py::arg("qrels"), py::arg("k"));
    m.def("evaluate",
          [](const Run& run, const Qrels& qrels, const std::vector<std::size_t>& cutoffs) {
              return report_to_dict(evaluate(run, qrels, cutoffs));
          },
          py::arg("run"), py::arg("qrels"), py::arg("cutoffs"));

    m.def("grid_search_bm25",
          [](const InvertedIndex& index, const QuerySet& queries, const Qrels& qrels,
             const std::vector<double>& k1_grid, const std::vector<double>& b_grid,
             std::size_t objective, bool zero_heuristic) {
              GridSearchResult result = grid_search_bm25(index, queries, qrels, k1_grid, b_grid,
                                                         objective, zero_heuristic);
              py::list cells;
              for (const GridCell& cell : result.cells)
                  cells.append(py::make_tuple(cell.k1, cell.b, cell.mrr));
              const GridCell& best = result.cells.at(result.best);
              return py::make_tuple(cells, py::make_tuple(best.k1, best.b, best.mrr));
          },
          py::arg("index"), py::arg("queries"), py::arg("qrels"), py::arg("k1_grid"),
          py::arg("b_grid"), py::arg("objective") = 10, py::arg("zero_heuristic") = false);

    m.def("cli_main",
          [](const std::vector<std::string>& args) {
              std::ostringstream out, err;
              const int code = cli_main(args, out, err);
              return py::make_tuple(code, out.str(), err.str());
          },
          py::arg("args"));
}
