import json

import pytest

from stc_engine.cli import main


def _write_corpus(path, n=3):
    lines = []
    for i in range(n):
        lines.append(json.dumps({
            "id": f"p{i}",
            "title": f"post number {i} about topic",
            "body": f"this is the body of post {i} with real words",
            "created_at": "2020-01-01T00:00:00",
            "comments": [
                {"text": f"comment one on {i}", "likes": 3, "dislikes": 1},
                {"text": f"comment two on {i}", "likes": 1, "dislikes": 0},
            ],
        }))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


@pytest.fixture()
def engine_config(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "pv": {"dim": 8, "epochs": 5, "rng_seed": 9},
    }))
    return cfg


@pytest.fixture()
def built_bundle(tmp_path, engine_config):
    corpus = tmp_path / "corpus.jsonl"
    _write_corpus(corpus)
    out = tmp_path / "bundle.stcb"
    rc = main(["build", "--corpus", str(corpus), "--config", str(engine_config),
               "--out", str(out)])
    assert rc == 0
    return out


def test_build_reports_kept_count(tmp_path, engine_config, capsys):
    corpus = tmp_path / "corpus.jsonl"
    _write_corpus(corpus)
    out = tmp_path / "b.stcb"
    rc = main(["build", "--corpus", str(corpus), "--config", str(engine_config),
               "--out", str(out)])
    captured = capsys.readouterr()
    assert rc == 0
    assert "kept=3" in captured.out
    assert out.exists()


def test_build_malformed_line_fails_with_lineno(tmp_path, engine_config, capsys):
    corpus = tmp_path / "corpus.jsonl"
    _write_corpus(corpus)
    with open(corpus, "a") as f:
        f.write("{broken json\n")
    rc = main(["build", "--corpus", str(corpus), "--config", str(engine_config),
               "--out", str(tmp_path / "b.stcb")])
    assert rc == 1
    assert "line 4" in capsys.readouterr().err


def test_build_empty_file_fails(tmp_path, engine_config, capsys):
    corpus = tmp_path / "empty.jsonl"
    corpus.write_text("")
    rc = main(["build", "--corpus", str(corpus), "--config", str(engine_config),
               "--out", str(tmp_path / "b.stcb")])
    assert rc == 1
    assert capsys.readouterr().err


def test_query_seeded_is_deterministic(built_bundle, capsys):
    outputs = []
    for _ in range(2):
        rc = main(["query", "--bundle", str(built_bundle),
                   "--text", "topic with real words", "--seed", "7", "--debug"])
        assert rc == 0
        outputs.append(capsys.readouterr().out)
    assert outputs[0] == outputs[1]


def test_query_prints_a_comment(built_bundle, capsys):
    rc = main(["query", "--bundle", str(built_bundle),
               "--text", "post about topic", "--seed", "1"])
    assert rc == 0
    assert "comment" in capsys.readouterr().out


def test_query_empty_text_fails(built_bundle, capsys):
    rc = main(["query", "--bundle", str(built_bundle), "--text", "   "])
    assert rc == 1


def test_chat_repl_transcript(built_bundle, capsys, monkeypatch):
    lines = iter(["post about topic", ""])

    monkeypatch.setattr("builtins.input", lambda prompt="": next(lines))
    rc = main(["chat", "--bundle", str(built_bundle), "--seed", "3"])
    assert rc == 0
    out1 = capsys.readouterr().out

    lines = iter(["post about topic", ""])
    monkeypatch.setattr("builtins.input", lambda prompt="": next(lines))
    rc = main(["chat", "--bundle", str(built_bundle), "--seed", "3"])
    assert rc == 0
    assert capsys.readouterr().out == out1


def test_chat_blank_line_warns_and_continues(built_bundle, capsys, monkeypatch):
    lines = iter(["  ", "post about topic", ""])
    monkeypatch.setattr("builtins.input", lambda prompt="": next(lines))
    rc = main(["chat", "--bundle", str(built_bundle), "--seed", "1"])
    assert rc == 0
    assert "empty query" in capsys.readouterr().out
