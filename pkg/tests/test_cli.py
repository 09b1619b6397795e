"""Command-line interface, exercised through real subprocesses."""

import subprocess
import sys
from pathlib import Path

import pytest

from ccsabst import corpus


def run_cli(*args: str):
    return subprocess.run(
        [sys.executable, "-m", "ccsabst.cli", *args],
        capture_output=True,
        text=True,
        timeout=120,
    )


@pytest.fixture(scope="module")
def workdir(tmp_path_factory) -> Path:
    """Corpus sources materialised as plain files."""
    root = tmp_path_factory.mktemp("cli")
    for entry_id in ("dekker", "dekker1", "ab-choice"):
        entry = corpus.load(entry_id)
        d = root / entry_id
        d.mkdir()
        for stem, text in entry.sources.items():
            (d / f"{stem}.ccs").write_text(text)
        for stem, text in entry.scripts.items():
            (d / f"{stem}.abst").write_text(text)
        if entry.props:
            (d / "props.mu").write_text(entry.props)
    (root / "infinite.ccs").write_text("agent A = a.(A | A);\n")
    (root / "broken.ccs").write_text("agent A = ;\n")
    return root


def test_parse_echoes_canonical_form(workdir):
    res = run_cli("parse", str(workdir / "ab-choice" / "model.ccs"))
    assert res.returncode == 0
    assert res.stdout == (
        "agent A = a.(b.0 + c.0);\nagent B = a.b.0 + a.c.0;\n"
    )


def test_states_and_determinism(workdir):
    model = str(workdir / "dekker" / "model.ccs")
    first = run_cli("states", model)
    second = run_cli("states", model)
    assert first.returncode == 0
    assert first.stdout.splitlines()[0] == "states: 196"
    assert first.stdout == second.stdout


def test_check_exit_codes(workdir):
    d = workdir / "dekker"
    res = run_cli("check", str(d / "model.ccs"), "--prop", "ME", "--props", str(d / "props.mu"))
    assert (res.returncode, res.stdout.strip()) == (0, "true")
    res = run_cli("check", str(d / "model.ccs"), "--prop", "Nope", "--props", str(d / "props.mu"))
    assert res.returncode == 2
    assert "Nope" in res.stderr


def test_check_table(workdir):
    d = workdir / "dekker1"
    res = run_cli(
        "check", str(d / "model.ccs"), "--prop", "Cycle",
        "--props", str(d / "props.mu"), "--table",
    )
    lines = res.stdout.splitlines()
    assert lines[0] == "true"
    assert len(lines) == 1 + 154


def test_classify(workdir):
    d = workdir / "dekker"
    res = run_cli("classify", "--prop", "ME", "--props", str(d / "props.mu"))
    assert (res.returncode, res.stdout.strip()) == (0, "muILBox")


def test_sim_directions(workdir):
    model = str(workdir / "ab-choice" / "model.ccs")
    res = run_cli("sim", model, "--left", "A", "--right", "B")
    assert (res.returncode, res.stdout.strip()) == (1, "false")
    res = run_cli("sim", model, "--left", "B", "--right", "A", "--witness")
    assert res.returncode == 0
    assert res.stdout.splitlines()[0] == "true"
    assert len(res.stdout.splitlines()) > 1


def test_abstract_replays_script(workdir, tmp_path):
    d = workdir / "dekker1"
    out = tmp_path / "final.ccs"
    res = run_cli(
        "abstract", str(d / "model.ccs"),
        "--script", str(d / "dekker-safety.abst"), "-o", str(out),
    )
    assert res.returncode == 0
    assert res.stdout.splitlines()[-1] == "final states: 16"
    reparsed = run_cli("parse", str(out))
    assert reparsed.returncode == 0
    assert reparsed.stdout == out.read_text()


def test_truncation_exit_code(workdir):
    res = run_cli("states", str(workdir / "infinite.ccs"), "--max-states", "50")
    assert res.returncode == 3
    assert "state limit" in res.stderr


def test_usage_and_input_errors(workdir):
    assert run_cli("states", str(workdir / "broken.ccs")).returncode == 2
    assert run_cli("states", str(workdir / "missing.ccs")).returncode == 2
    assert run_cli("frobnicate").returncode == 2
    assert run_cli().returncode == 2
    assert run_cli("--help").returncode == 0


def test_corpus_commands():
    res = run_cli("corpus", "list")
    assert res.returncode == 0
    assert "dekker" in res.stdout.splitlines()
    res = run_cli("corpus", "run", "alternator")
    assert res.returncode == 0
    assert all(line.startswith("ok ") for line in res.stdout.splitlines())
