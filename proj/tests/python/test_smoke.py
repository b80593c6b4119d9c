import math

import pytest

import clarirank as cr


@pytest.fixture
def corpus():
    docs = cr.DocumentSet()
    docs.add("d1", "Red block!")
    docs.add("d2", "Blue block tower")
    docs.add("d3", "red red tower")
    return docs


@pytest.fixture
def index(corpus):
    return cr.InvertedIndex.build(corpus)


def test_version():
    assert cr.__version__ == "1.0.0"


def test_preprocess():
    assert cr.preprocess("Which color: RED, or blue?") == [
        "which",
        "color",
        "red",
        "or",
        "blue",
    ]
    assert cr.preprocess("  \t ") == []


def test_index_stats(index):
    assert index.num_docs == 3
    assert index.total_tokens == 8
    assert index.vocab_size == 4
    assert index.avgdl == pytest.approx(8.0 / 3.0, rel=1e-15)
    assert index.df("red") == 2
    assert index.collection_frequency("red") == 3
    assert index.term_frequency("red", "d3") == 2
    assert index.doc_length("d2") == 3


def test_rank_end_to_end(index):
    query = cr.make_weighted_query("q1", ["red", "tower"])
    assert query.terms == {"red": 1.0, "tower": 1.0}
    ranking = cr.rank(query, index)
    assert [e.doc_id for e in ranking.entries] == ["d3", "d1", "d2"]
    assert ranking.entries[0].score == pytest.approx(1.0714452953493814, abs=1e-12)
    # score() must agree bitwise with the ranked score
    assert cr.score(query, "d3", index) == ranking.entries[0].score


def test_zero_heuristic_flag(index):
    query = cr.make_weighted_query("q1", ["zzz"])
    ranking = cr.rank(query, index, zero_heuristic=True)
    assert ranking.zero_heuristic
    # all scores zero -> shortest question first
    assert [e.doc_id for e in ranking.entries] == ["d1", "d2", "d3"]


def test_expansion_and_eval(index):
    query = cr.make_weighted_query("q1", ["red"])
    first = cr.rank(query, index)
    expanded = cr.expand_bo1(query, first, index, fb_docs=2, fb_terms=5)
    assert expanded.expanded
    assert expanded.terms["red"] == pytest.approx(2.0, abs=1e-12)
    assert set(expanded.terms) > {"red"}

    run = [cr.rank(query, index)]
    qrels = {"q1": {"d3"}}
    assert cr.mrr_at_k(run, qrels, 5) == 1.0
    report = cr.evaluate(run, qrels, [5, 10])
    assert report["query_count"] == 1
    assert report["mrr"]["MRR@5"] == 1.0
    assert report["per_query"]["q1"]["first_relevant_rank"] == 1


def test_index_save_load(tmp_path, index):
    path = str(tmp_path / "pool.idx")
    index.save(path)
    loaded = cr.InvertedIndex.load(path)
    assert loaded.num_docs == index.num_docs
    assert loaded.avgdl == index.avgdl
    query = cr.make_weighted_query("q1", ["red", "tower"])
    assert cr.score(query, "d3", loaded) == cr.score(query, "d3", index)


def test_grid_search(index):
    queries = cr.QuerySet()
    queries.add(cr.QueryRecord("q1", "red tower"))
    cells, best = cr.grid_search_bm25(
        index, queries, {"q1": {"d3"}}, [0.9, 1.2], [0.4, 0.75]
    )
    assert len(cells) == 4
    assert best[2] == 1.0
    assert all(math.isfinite(mrr) for (_, _, mrr) in cells)


def test_cli_main(tmp_path):
    docs = tmp_path / "docs.jsonl"
    docs.write_text(
        '{"id": "d1", "text": "Red block!"}\n'
        '{"id": "d2", "text": "Blue block tower"}\n'
        '{"id": "d3", "text": "red red tower"}\n'
    )
    queries = tmp_path / "queries.jsonl"
    queries.write_text('{"id": "q1", "text": "Red tower?"}\n')
    qrels = tmp_path / "qrels.txt"
    qrels.write_text("q1 0 d3 1\n")
    idx = str(tmp_path / "pool.idx")
    run = str(tmp_path / "out.run")

    code, out, err = cr.cli_main(["index", "--docs", str(docs), "--out", idx])
    assert (code, err) == (0, "")
    assert out.startswith("N=3 ")

    code, out, err = cr.cli_main(
        ["rank", "--index", idx, "--queries", str(queries), "--out", run]
    )
    assert code == 0
    first = (tmp_path / "out.run").read_bytes()
    assert first.startswith(b"q1 Q0 d3 1 1.071445")

    code, out, err = cr.cli_main(
        ["eval", "--run", run, "--qrels", str(qrels), "--cutoffs", "5"]
    )
    assert code == 0
    assert out == "queries 1\nMRR@5  1.000000000000\n"

    code, out, err = cr.cli_main(
        ["rank", "--index", idx, "--queries", str(queries), "--out", run,
         "--model", "dph", "--k1", "1.8"]
    )
    assert code == 2
    assert "usage error:" in err

    code, out, err = cr.cli_main(["rank", "--frobnicate"])
    assert code != 0


def test_error_type(corpus):
    with pytest.raises(cr.ClarirankError, match="duplicate document id"):
        corpus.add("d1", "again")
    with pytest.raises(cr.ClarirankError):
        cr.cosine_similarity([0.0, 0.0], [1.0, 0.0])
