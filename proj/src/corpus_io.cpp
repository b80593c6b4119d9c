#include "clarirank/corpus_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace clarirank {

namespace {

using nlohmann::json;

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path);
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path);
    return out;
}

// Parses one JSONL record and pulls the required string fields.
json parse_record(const std::string& line, const std::string& path, std::size_t lineno,
                  std::initializer_list<const char*> fields) {
    json record;
    try {
        record = json::parse(line);
    } catch (const json::parse_error& e) {
        throw ParseError(path + ":" + std::to_string(lineno) + ": malformed JSON: " + e.what());
    }
    if (!record.is_object())
        throw ParseError(path + ":" + std::to_string(lineno) + ": expected a JSON object");
    for (const char* field : fields) {
        if (!record.contains(field) || !record[field].is_string())
            throw ParseError(path + ":" + std::to_string(lineno) + ": missing string field \"" +
                             field + "\"");
    }
    return record;
}

template <typename Fn>
void for_each_line(std::istream& in, Fn&& fn) {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        fn(line, lineno);
    }
}

}  // namespace

DocumentSet load_documents(const std::string& path) {
    return load_documents(path, PreprocessOptions{});
}

DocumentSet load_documents(const std::string& path, const PreprocessOptions& options) {
    auto in = open_input(path);
    DocumentSet set;
    for_each_line(in, [&](const std::string& line, std::size_t lineno) {
        json record = parse_record(line, path, lineno, {"id", "text"});
        Document doc;
        doc.doc_id = record["id"].get<std::string>();
        doc.raw_text = record["text"].get<std::string>();
        doc.tokens = preprocess(doc.raw_text, options);
        doc.length = doc.tokens.size();
        try {
            set.add(std::move(doc));
        } catch (const Error& e) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    });
    return set;
}

QuerySet load_queries(const std::string& path) {
    return load_queries(path, PreprocessOptions{});
}

QuerySet load_queries(const std::string& path, const PreprocessOptions& options) {
    auto in = open_input(path);
    QuerySet set;
    for_each_line(in, [&](const std::string& line, std::size_t lineno) {
        json record = parse_record(line, path, lineno, {"id", "text"});
        QueryRecord query;
        query.query_id = record["id"].get<std::string>();
        query.raw_text = record["text"].get<std::string>();
        query.tokens = preprocess(query.raw_text, options);
        try {
            set.add(std::move(query));
        } catch (const Error& e) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    });
    return set;
}

void save_documents(const DocumentSet& docs, const std::string& path) {
    auto out = open_output(path);
    for (const Document& doc : docs.docs()) {
        json record;
        record["id"] = doc.doc_id;
        record["text"] = doc.raw_text;
        out << record.dump() << '\n';
    }
    if (!out) throw Error("write failed: " + path);
}

Qrels load_qrels(const std::string& path) {
    auto in = open_input(path);
    Qrels qrels;
    for_each_line(in, [&](const std::string& line, std::size_t lineno) {
        std::istringstream fields(line);
        std::string query_id, iteration, doc_id, relevance_text;
        if (!(fields >> query_id >> iteration >> doc_id >> relevance_text))
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": expected \"query_id 0 doc_id relevance\"");
        long relevance = 0;
        std::size_t consumed = 0;
        try {
            relevance = std::stol(relevance_text, &consumed);
        } catch (const std::exception&) {
            consumed = std::string::npos;
        }
        if (consumed != relevance_text.size())
            throw ParseError(path + ":" + std::to_string(lineno) + ": non-integer relevance \"" +
                             relevance_text + "\"");
        if (relevance > 0) qrels[query_id].insert(doc_id);
    });
    return qrels;
}

VectorTable load_vectors(const std::string& path) {
    auto in = open_input(path);
    VectorTable table;
    for_each_line(in, [&](const std::string& line, std::size_t lineno) {
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected \"id<TAB>values\"");
        std::string id = line.substr(0, tab);
        std::istringstream values(line.substr(tab + 1));
        std::vector<double> vec;
        double v = 0.0;
        while (values >> v) vec.push_back(v);
        if (!values.eof())
            throw ParseError(path + ":" + std::to_string(lineno) + ": non-numeric vector component");
        if (vec.empty())
            throw ParseError(path + ":" + std::to_string(lineno) + ": empty vector for id " + id);
        if (table.vectors.empty()) {
            table.dim = vec.size();
        } else if (vec.size() != table.dim) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": vector for id " + id +
                             " has dimension " + std::to_string(vec.size()) + ", expected " +
                             std::to_string(table.dim));
        }
        if (!table.vectors.emplace(std::move(id), std::move(vec)).second)
            throw ParseError(path + ":" + std::to_string(lineno) + ": duplicate vector id");
    });
    return table;
}

ScoreTable load_scores(const std::string& path) {
    auto in = open_input(path);
    ScoreTable table;
    for_each_line(in, [&](const std::string& line, std::size_t lineno) {
        std::istringstream fields(line);
        std::string query_id, doc_id, score_text;
        if (!std::getline(fields, query_id, '\t') || !std::getline(fields, doc_id, '\t') ||
            !std::getline(fields, score_text))
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": expected \"query_id<TAB>doc_id<TAB>score\"");
        double score = 0.0;
        std::size_t consumed = 0;
        try {
            score = std::stod(score_text, &consumed);
        } catch (const std::exception&) {
            consumed = std::string::npos;
        }
        if (consumed != score_text.size())
            throw ParseError(path + ":" + std::to_string(lineno) + ": non-numeric score \"" +
                             score_text + "\"");
        if (!table.scores.emplace(std::make_pair(query_id, doc_id), score).second)
            throw ParseError(path + ":" + std::to_string(lineno) + ": duplicate score for (" +
                             query_id + ", " + doc_id + ")");
    });
    return table;
}

std::map<std::string, std::vector<std::string>> load_expansion_texts(const std::string& path) {
    auto in = open_input(path);
    std::map<std::string, std::vector<std::string>> texts;
    for_each_line(in, [&](const std::string& line, std::size_t lineno) {
        json record = parse_record(line, path, lineno, {"id"});
        if (!record.contains("texts") || !record["texts"].is_array())
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": missing array field \"texts\"");
        std::vector<std::string> list;
        for (const auto& item : record["texts"]) {
            if (!item.is_string())
                throw ParseError(path + ":" + std::to_string(lineno) +
                                 ": \"texts\" entries must be strings");
            list.push_back(item.get<std::string>());
        }
        std::string id = record["id"].get<std::string>();
        if (!texts.emplace(std::move(id), std::move(list)).second)
            throw ParseError(path + ":" + std::to_string(lineno) + ": duplicate id");
    });
    return texts;
}

void write_run(const Run& run, const std::string& path, const std::string& tag) {
    auto out = open_output(path);
    char score_text[64];
    for (const Ranking& ranking : run) {
        std::size_t position = 0;
        for (const ScoredDoc& entry : ranking.entries) {
            ++position;
            std::snprintf(score_text, sizeof(score_text), "%.6f", entry.score);
            out << ranking.query_id << " Q0 " << entry.doc_id << ' ' << position << ' '
                << score_text << ' ' << tag << '\n';
        }
    }
    if (!out) throw Error("write failed: " + path);
}

Run read_run(const std::string& path) {
    auto in = open_input(path);
    Run run;
    for_each_line(in, [&](const std::string& line, std::size_t lineno) {
        std::istringstream fields(line);
        std::string query_id, q0, doc_id, rank_text, score_text, tag;
        if (!(fields >> query_id >> q0 >> doc_id >> rank_text >> score_text >> tag))
            throw ParseError(path + ":" + std::to_string(lineno) + ": malformed run line");
        double score = 0.0;
        try {
            score = std::stod(score_text);
        } catch (const std::exception&) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": non-numeric score");
        }
        unsigned long rank_value = 0;
        std::size_t consumed = 0;
        try {
            rank_value = std::stoul(rank_text, &consumed);
        } catch (const std::exception&) {
            consumed = std::string::npos;
        }
        if (consumed != rank_text.size() || rank_value == 0)
            throw ParseError(path + ":" + std::to_string(lineno) + ": non-integer rank \"" +
                             rank_text + "\"");
        if (run.empty() || run.back().query_id != query_id) {
            run.push_back(Ranking{query_id, {}, false});
        }
        if (rank_value != run.back().entries.size() + 1)
            throw ParseError(path + ":" + std::to_string(lineno) + ": rank " +
                             std::to_string(rank_value) + " out of sequence");
        run.back().entries.push_back({doc_id, score});
    });
    return run;
}

}  // namespace clarirank
