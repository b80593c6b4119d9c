#include "clarirank/cli.hpp"

#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "clarirank/corpus_io.hpp"
#include "clarirank/eval.hpp"
#include "clarirank/index.hpp"
#include "clarirank/rerank.hpp"
#include "clarirank/weighting.hpp"

namespace clarirank {

namespace {

// Bad flag combinations exit with 2, runtime failures with 1.
struct UsageError : Error {
    using Error::Error;
};

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::size_t begin = 0;
    while (true) {
        const std::size_t end = text.find(sep, begin);
        parts.push_back(text.substr(begin, end - begin));
        if (end == std::string::npos) return parts;
        begin = end + 1;
    }
}

double parse_number(const std::string& text) {
    std::size_t consumed = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &consumed);
    } catch (const std::exception&) {
        throw Error("invalid number: \"" + text + "\"");
    }
    if (consumed != text.size()) throw Error("invalid number: \"" + text + "\"");
    return value;
}

std::size_t parse_positive(const std::string& text, const char* what) {
    std::size_t consumed = 0;
    unsigned long long value = 0;
    try {
        value = std::stoull(text, &consumed);
    } catch (const std::exception&) {
        throw UsageError(std::string("invalid ") + what + ": \"" + text + "\"");
    }
    if (consumed != text.size() || value == 0)
        throw UsageError(std::string("invalid ") + what + ": \"" + text + "\"");
    return static_cast<std::size_t>(value);
}

std::size_t parse_depth(const std::string& text) {
    if (text == "all") return kDepthAll;
    return parse_positive(text, "depth");
}

std::vector<std::size_t> parse_cutoffs(const std::string& text) {
    std::vector<std::size_t> cutoffs;
    for (const std::string& part : split(text, ','))
        cutoffs.push_back(parse_positive(part, "cutoff"));
    return cutoffs;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open file for writing: " + path);
    out << text;
    out.flush();
    if (!out) throw Error("write failed: " + path);
}

struct RankArgs {
    std::string index_path;
    std::string queries_path;
    std::string out_path;
    std::string model = "bm25";
    double k1 = 1.2;
    double b = 0.75;
    double c = 1.0;
    bool zero_heuristic = false;
    std::string expand;
    std::string expand_path;
    std::string expand_model;
    std::size_t fb_docs = 3;
    std::size_t fb_terms = 10;
    double alpha = 0.5;
    double mu = 2500.0;
    std::string rerank;
    std::string rerank_path;
    std::size_t top_n = 20;
    std::string depth = "all";
    std::string tag = "clarirank";
    std::string pipeline;
};

PipelineSpec spec_from_flags(const CLI::App* cmd, const RankArgs& args) {
    auto set = [cmd](const char* name) { return cmd->count(name) > 0; };
    auto usage_wrap = [](auto&& parse) {
        try {
            return parse();
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
    };

    PipelineSpec spec;
    spec.first_stage.model.model =
        usage_wrap([&] { return parse_model_name(args.model); });
    spec.first_stage.model.bm25 = {args.k1, args.b};
    spec.first_stage.model.pl2 = {args.c};
    spec.first_stage.zero_heuristic = args.zero_heuristic;

    if (set("--expand")) {
        ExpansionSpec expansion;
        expansion.method = usage_wrap([&] { return parse_expansion_method(args.expand); });
        expansion.feedback = {args.fb_docs, args.fb_terms, args.alpha, args.mu};
        if (set("--expand-model")) {
            ModelSpec second;
            second.model = usage_wrap([&] { return parse_model_name(args.expand_model); });
            second.bm25 = {args.k1, args.b};
            second.pl2 = {args.c};
            expansion.second_stage = second;
        }
        if (expansion.method == ExpansionMethod::External) {
            if (!set("--expand-path"))
                throw UsageError("--expand file requires --expand-path");
        } else if (set("--expand-path")) {
            throw UsageError("--expand-path only applies to --expand file");
        }
        expansion.texts_path = args.expand_path;
        spec.expansion = std::move(expansion);
    } else {
        for (const char* name : {"--expand-path", "--expand-model", "--fb-docs", "--fb-terms",
                                 "--alpha", "--mu"})
            if (set(name)) throw UsageError(std::string(name) + " requires --expand");
    }

    auto stage_uses = [&spec](WeightingModel model) {
        if (spec.first_stage.model.model == model) return true;
        return spec.expansion && spec.expansion->second_stage &&
               spec.expansion->second_stage->model == model;
    };
    if ((set("--k1") || set("--b")) && !stage_uses(WeightingModel::Bm25))
        throw UsageError("--k1/--b require a bm25 stage (model is " +
                         std::string(model_name(spec.first_stage.model.model)) + ")");
    if (set("--c") && !stage_uses(WeightingModel::Pl2))
        throw UsageError("--c requires a pl2 stage (model is " +
                         std::string(model_name(spec.first_stage.model.model)) + ")");

    if (set("--rerank")) {
        RerankSpec rerank;
        rerank.source = usage_wrap([&] { return parse_rerank_source(args.rerank); });
        if (!set("--rerank-path")) throw UsageError("--rerank requires --rerank-path");
        rerank.top_n = args.top_n;
        rerank.path = args.rerank_path;
        spec.rerank = std::move(rerank);
    } else {
        for (const char* name : {"--rerank-path", "--top-n"})
            if (set(name)) throw UsageError(std::string(name) + " requires --rerank");
    }

    spec.depth = parse_depth(args.depth);
    return spec;
}

int run_index(const std::string& docs_path, const std::string& out_path, std::ostream& out) {
    DocumentSet docs = load_documents(docs_path);
    InvertedIndex index = InvertedIndex::build(docs);
    index.save(out_path);
    char line[128];
    std::snprintf(line, sizeof(line), "N=%llu avgdl=%.3f terms=%zu",
                  static_cast<unsigned long long>(index.num_docs()), index.avgdl(),
                  index.vocab_size());
    out << line << "\n";
    return 0;
}

int run_rank(const CLI::App* cmd, const RankArgs& args) {
    auto set = [cmd](const char* name) { return cmd->count(name) > 0; };

    PipelineSpec spec;
    if (set("--pipeline")) {
        for (const char* name :
             {"--model", "--k1", "--b", "--c", "--zero-heuristic", "--expand", "--expand-path",
              "--expand-model", "--fb-docs", "--fb-terms", "--alpha", "--mu", "--rerank",
              "--rerank-path", "--top-n"})
            if (set(name)) throw UsageError(std::string(name) + " conflicts with --pipeline");
        spec = load_pipeline_spec(args.pipeline);
        if (set("--depth")) spec.depth = parse_depth(args.depth);
    } else {
        spec = spec_from_flags(cmd, args);
    }
    if (args.tag.empty() || args.tag.find_first_of(" \t") != std::string::npos)
        throw UsageError("--tag must be non-empty without whitespace");

    InvertedIndex index = InvertedIndex::load(args.index_path);
    QuerySet queries = load_queries(args.queries_path);

    std::optional<VectorTable> vectors;
    std::optional<ScoreTable> scores;
    std::optional<std::map<std::string, std::vector<std::string>>> texts;
    AuxTables aux;
    if (spec.expansion && spec.expansion->method == ExpansionMethod::External) {
        texts = load_expansion_texts(spec.expansion->texts_path);
        aux.expansion_texts = &*texts;
    }
    if (spec.rerank) {
        if (spec.rerank->source == RerankSource::Vectors) {
            vectors = load_vectors(spec.rerank->path);
            aux.vectors = &*vectors;
        } else {
            scores = load_scores(spec.rerank->path);
            aux.scores = &*scores;
        }
    }

    Run run = run_pipeline(spec, queries, index, aux);
    write_run(run, args.out_path, args.tag);
    return 0;
}

int run_eval(const std::string& run_path, const std::string& qrels_path,
             const std::string& cutoffs_text, bool as_json, std::ostream& out) {
    Run run = read_run(run_path);
    Qrels qrels = load_qrels(qrels_path);
    std::set<std::string> run_queries;
    for (const Ranking& ranking : run) run_queries.insert(ranking.query_id);
    for (const auto& [query_id, docs] : qrels)
        if (run_queries.count(query_id) == 0)
            throw Error("run is missing judged query: " + query_id);
    EvalReport report = evaluate(run, qrels, parse_cutoffs(cutoffs_text));
    out << (as_json ? format_report_json(report) : format_report_text(report));
    return 0;
}

int run_grid(const std::string& index_path, const std::string& queries_path,
             const std::string& qrels_path, const std::string& k1_expr,
             const std::string& b_expr, std::size_t objective, bool zero_heuristic,
             const std::string& out_path, std::ostream& out) {
    std::vector<double> k1_grid, b_grid;
    try {
        k1_grid = parse_grid_expression(k1_expr);
        b_grid = parse_grid_expression(b_expr);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }

    InvertedIndex index = InvertedIndex::load(index_path);
    QuerySet queries = load_queries(queries_path);
    Qrels qrels = load_qrels(qrels_path);

    GridSearchResult result =
        grid_search_bm25(index, queries, qrels, k1_grid, b_grid, objective, zero_heuristic);
    write_text_file(out_path, format_grid_tsv(result));

    const GridCell& best = result.cells.at(result.best);
    char line[160];
    std::snprintf(line, sizeof(line), "best k1=%g b=%g mrr=%.12f", best.k1, best.b, best.mrr);
    out << line << "\n";
    return 0;
}

}  // namespace

std::vector<double> parse_grid_expression(const std::string& expression) {
    if (expression.empty()) throw Error("empty grid expression");
    std::vector<double> values;
    if (expression.find(':') != std::string::npos) {
        const std::vector<std::string> parts = split(expression, ':');
        if (parts.size() != 3)
            throw Error("grid range must be start:stop:step: \"" + expression + "\"");
        const double start = parse_number(parts[0]);
        const double stop = parse_number(parts[1]);
        const double step = parse_number(parts[2]);
        if (!(step > 0.0)) throw Error("grid step must be > 0");
        if (stop < start - 1e-12) throw Error("grid stop is below start");
        for (std::size_t i = 0;; ++i) {
            const double value = start + static_cast<double>(i) * step;
            if (value > stop + 1e-12) break;
            if (values.size() >= 100000) throw Error("grid has too many points");
            values.push_back(value);
        }
    } else {
        for (const std::string& part : split(expression, ',')) values.push_back(parse_number(part));
    }
    if (values.empty()) throw Error("empty grid expression");
    return values;
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"deterministic ranking engine for clarification questions", "clarirank"};
    app.require_subcommand(1);

    std::string index_docs_path, index_out_path;
    CLI::App* index_cmd = app.add_subcommand("index", "build an inverted index from a question pool");
    index_cmd->add_option("--docs", index_docs_path, "question pool JSONL")->required();
    index_cmd->add_option("--out", index_out_path, "index file to write")->required();

    RankArgs rank_args;
    CLI::App* rank_cmd = app.add_subcommand("rank", "rank the pool for each query");
    rank_cmd->add_option("--index", rank_args.index_path, "index file")->required();
    rank_cmd->add_option("--queries", rank_args.queries_path, "queries JSONL")->required();
    rank_cmd->add_option("--out", rank_args.out_path, "run file to write")->required();
    rank_cmd->add_option("--model", rank_args.model, "bm25|tfidf|pl2|dph (default bm25)");
    rank_cmd->add_option("--k1", rank_args.k1, "BM25 k1 (default 1.2)");
    rank_cmd->add_option("--b", rank_args.b, "BM25 b (default 0.75)");
    rank_cmd->add_option("--c", rank_args.c, "PL2 c (default 1.0)");
    rank_cmd->add_flag("--zero-heuristic", rank_args.zero_heuristic,
                       "order zero-score docs by length ascending");
    rank_cmd->add_option("--expand", rank_args.expand, "bo1|kl|rm3|file");
    rank_cmd->add_option("--expand-path", rank_args.expand_path,
                         "expansion texts JSONL (--expand file)");
    rank_cmd->add_option("--expand-model", rank_args.expand_model,
                         "second-stage model (default: first-stage model)");
    rank_cmd->add_option("--fb-docs", rank_args.fb_docs, "feedback docs (default 3)");
    rank_cmd->add_option("--fb-terms", rank_args.fb_terms, "expansion terms (default 10)");
    rank_cmd->add_option("--alpha", rank_args.alpha, "RM3 interpolation (default 0.5)");
    rank_cmd->add_option("--mu", rank_args.mu, "RM3 Dirichlet mu (default 2500)");
    rank_cmd->add_option("--rerank", rank_args.rerank, "vectors|scores");
    rank_cmd->add_option("--rerank-path", rank_args.rerank_path, "vector/score table file");
    rank_cmd->add_option("--top-n", rank_args.top_n, "rerank head size (default 20)");
    rank_cmd->add_option("--depth", rank_args.depth, "output depth or \"all\" (default all)");
    rank_cmd->add_option("--tag", rank_args.tag, "run tag (default clarirank)");
    rank_cmd->add_option("--pipeline", rank_args.pipeline, "pipeline config JSON");

    std::string eval_run_path, eval_qrels_path, eval_cutoffs = "5,10,20";
    bool eval_json = false;
    CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a run file with MRR@k");
    eval_cmd->add_option("--run", eval_run_path, "run file")->required();
    eval_cmd->add_option("--qrels", eval_qrels_path, "relevance judgments")->required();
    eval_cmd->add_option("--cutoffs", eval_cutoffs, "comma-separated cutoffs (default 5,10,20)");
    eval_cmd->add_flag("--json", eval_json, "emit the JSON report");

    std::string grid_index_path, grid_queries_path, grid_qrels_path, grid_out_path;
    std::string grid_k1 = "0.2:3.0:0.2", grid_b = "0.0:1.0:0.02";
    std::size_t grid_objective = 10;
    bool grid_zero_heuristic = false;
    CLI::App* grid_cmd = app.add_subcommand("grid", "BM25 parameter sweep over MRR@k");
    grid_cmd->add_option("--index", grid_index_path, "index file")->required();
    grid_cmd->add_option("--queries", grid_queries_path, "queries JSONL")->required();
    grid_cmd->add_option("--qrels", grid_qrels_path, "relevance judgments")->required();
    grid_cmd->add_option("--k1-grid", grid_k1, "k1 range or list (default 0.2:3.0:0.2)");
    grid_cmd->add_option("--b-grid", grid_b, "b range or list (default 0.0:1.0:0.02)");
    grid_cmd->add_option("--objective", grid_objective, "MRR cutoff to optimize (default 10)");
    grid_cmd->add_flag("--zero-heuristic", grid_zero_heuristic,
                       "order zero-score docs by length ascending");
    grid_cmd->add_option("--out", grid_out_path, "TSV table to write")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (index_cmd->parsed()) return run_index(index_docs_path, index_out_path, out);
        if (rank_cmd->parsed()) return run_rank(rank_cmd, rank_args);
        if (eval_cmd->parsed())
            return run_eval(eval_run_path, eval_qrels_path, eval_cutoffs, eval_json, out);
        if (grid_cmd->parsed())
            return run_grid(grid_index_path, grid_queries_path, grid_qrels_path, grid_k1, grid_b,
                            grid_objective, grid_zero_heuristic, grid_out_path, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace clarirank
