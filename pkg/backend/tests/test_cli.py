import argparse
import json

import pytest

from app.main import EXIT_INVALID, EXIT_LIMIT, EXIT_OK, build_parser, main, run
from app.utils.documents import parse_input


def flags(*argv):
    return build_parser().parse_args(list(argv))


@pytest.fixture
def document(document_json):
    return parse_input(document_json)


def run_json(document, *argv):
    parsed = flags(*argv)
    code, output = run(parsed.command, parsed, document)
    return code, json.loads(output)


def test_check_generator(document):
    code, report = run_json(document, "check", "A")
    assert code == EXIT_OK
    assert report["verdict"] is True
    assert report["cover_verdict"] is True
    assert report["certificate"] == {"kind": "translates-checked"}


def test_check_parallel_pair(document):
    code, report = run_json(document, "check", "B", "--certificate")
    assert code == EXIT_OK
    assert report["verdict"] is False
    assert report["cover_verdict"] is True
    cert = report["certificate"]
    assert cert["kind"] == "failing-translate"
    assert cert["g"] == [1]
    assert cert["inner"]["same_sign"] == {"source": [], "target": [1, 2], "values": [1, 1]}
    assert report["cover_certificate"]["kind"] == "end-partition"


def test_disjoint(document):
    code, report = run_json(document, "disjoint", "A", "C")
    assert code == EXIT_OK
    assert report["verdict"] is True
    assert report["scope"] == "manifold"


def test_disjoint_cover_only(document):
    code, report = run_json(document, "disjoint", "A", "B", "--cover-only", "--certificate")
    assert code == EXIT_OK
    assert report["verdict"] is False
    assert report["certificate"]["opposite_sign"]["values"] == [1, -1]


def test_disjoint_with_non_embeddable_class(document):
    code, report = run_json(document, "disjoint", "A", "B")
    assert code == EXIT_INVALID
    assert report["error"] == "NotEmbeddableInM"


def test_unknown_class(document):
    code, report = run_json(document, "check", "Z")
    assert code == EXIT_INVALID
    assert report["error"] == "UnknownClass"


def test_complex(document):
    code, report = run_json(document, "complex")
    assert code == EXIT_OK
    assert [r["index"] for r in report["rejected"]] == [1]
    assert len(report["vertices"]) == 3
    assert report["simplex_rule"] == "flag"


def test_oracle_named(document):
    code, report = run_json(document, "oracle", "D")
    assert code == EXIT_OK
    assert report["verdict"] is True
    assert report["checks"][0]["agree"] is True


def test_oracle_random(document):
    code, report = run_json(document, "oracle", "--samples", "3", "--seed", "5", "--max-len", "6")
    assert code == EXIT_OK
    assert len(report["checks"]) == 3
    assert report["verdict"] is True


def test_oracle_limit(document):
    code, report = run_json(document, "oracle", "A", "--max-len", "40")
    assert code == EXIT_LIMIT
    assert report["error"] == "LimitExceeded"


def test_text_format(document):
    parsed = flags("check", "A", "--format", "text")
    code, output = run(parsed.command, parsed, document)
    assert code == EXIT_OK
    assert "verdict: True" in output


def test_overlap_radius_flag(document):
    code, report = run_json(document, "check", "D", "--overlap-radius", "1", "--certificate")
    assert code == EXIT_OK
    assert report["verdict"] is True
    assert len(report["certificate"]["checked"]) > 2


def test_main_reads_file(document_file, capsys):
    assert main(["--input", str(document_file), "check", "A"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["verdict"] is True


def test_main_invalid_document(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"rank": 2, "classes": [{"name": "A", "weights": [{"vertex": [1, -1], "gen": 1, "weight": 1}]}]}')
    assert main(["--input", str(path), "check", "A"]) == EXIT_INVALID
    report = json.loads(capsys.readouterr().out)
    assert report["error"] == "NonReducedWord"
    assert report["path"] == "$.classes[0].weights[0].vertex"


def test_main_missing_file(tmp_path, capsys):
    assert main(["--input", str(tmp_path / "missing.json"), "complex"]) == EXIT_INVALID


def test_parser_requires_a_command():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])
    assert isinstance(flags("complex"), argparse.Namespace)


def test_version(capsys):
    with pytest.raises(SystemExit):
        build_parser().parse_args(["--version"])
    assert capsys.readouterr().out.strip() == "spheres 1.0.0"


def _command(argv, threads):
    parsed = flags(*argv, "--threads", threads)
    return parsed.command, parsed


@pytest.mark.parametrize(
    "argv",
    [
        ("check", "D", "--certificate", "--overlap-radius", "1"),
        ("check", "B", "--certificate"),
        ("disjoint", "A", "C", "--certificate"),
        ("complex", "--certificate"),
    ],
)
def test_json_output_does_not_depend_on_threads(document, argv):
    single = run(*_command(argv, "1"), document)
    pooled = run(*_command(argv, "4"), document)
    assert single == pooled