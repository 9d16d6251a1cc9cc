"""End-to-end checks of the command-line interface, run in process."""

import os

import pytest

from plaidkite.cli import main


def run(tmp_path, *argv):
    return main(list(argv) + ["--out", str(tmp_path)])


def test_invalid_parameter_exits_2(tmp_path):
    assert run(tmp_path, "plaid", "--p", "3", "--q", "9") == 2
    assert run(tmp_path, "graph", "--p", "1", "--q", "3") == 2
    assert run(tmp_path, "verify", "pixellation", "--p", "7", "--q", "4") == 2


def test_plaid_outputs_deterministic(tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    assert run(a, "plaid", "--p", "2", "--q", "9", "--svg") == 0
    assert run(b, "plaid", "--p", "2", "--q", "9", "--svg") == 0
    for name in ("plaid_2_9.txt", "plaid_2_9.svg"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    assert (a / "plaid_2_9.png").exists()
    text = (a / "plaid_2_9.txt").read_text()
    assert text.startswith("#")
    fields = text.splitlines()[1].split()
    assert len(fields) == 3 and fields[0] == "0"


def test_graph_output_format(tmp_path):
    assert run(tmp_path, "graph", "--p", "1", "--q", "2",
               "--window", "3") == 0
    lines = (tmp_path / "graph_1_2.txt").read_text().splitlines()
    assert lines[0].startswith("#")
    # (m,n) (i+,j+) (i-,j-) x y
    fields = lines[1].split()
    assert len(fields) == 5
    assert fields[0].startswith("(") and fields[0].endswith(")")
    assert fields[1].count(",") == 1 and fields[2].count(",") == 1


def test_graph_paper_units(tmp_path):
    assert run(tmp_path, "graph", "--p", "1", "--q", "2", "--window", "3",
               "--paper-units") == 0
    lines = (tmp_path / "graph_1_2.txt").read_text().splitlines()
    row = lines[1].split()
    mn = row[0].strip("()").split(",")
    assert row[3] == mn[0] and row[4] == mn[1]


def test_overlay_writes_both_layers(tmp_path):
    assert run(tmp_path, "overlay", "--p", "1", "--q", "2", "--svg") == 0
    for name in ("overlay_plaid_1_2.txt", "overlay_graph_1_2.txt",
                 "overlay_1_2.png", "overlay_1_2.svg"):
        assert (tmp_path / name).exists()
    svg = (tmp_path / "overlay_1_2.svg").read_text()
    assert 'version="1.1"' in svg


def test_verify_partitions(tmp_path):
    assert run(tmp_path, "verify", "partitions") == 0
    text = (tmp_path / "verify_partitions.txt").read_text()
    assert "# suite partitions PASS" in text
    assert "plaid-cells 26 26 PASS" in text
    assert "rtp-cells 218 218 PASS" in text


def test_verify_pixellation(tmp_path):
    assert run(tmp_path, "verify", "pixellation", "--p", "4", "--q", "5") == 0
    text = (tmp_path / "verify_pixellation.txt").read_text()
    assert "# suite pixellation PASS" in text


def test_oracle_diff(tmp_path):
    assert run(tmp_path, "oracle-diff", "--p", "1", "--q", "2",
               "--window", "5") == 0
    text = (tmp_path / "oracle_diff_1_2.txt").read_text()
    assert text.splitlines()[-1].startswith("# missing 0 extra 0 isolated")


def test_prove_report(tmp_path):
    assert run(tmp_path, "prove") == 0
    lines = (tmp_path / "proof_report.txt").read_text().splitlines()
    # body lines: k sign i j side status method
    body = [l for l in lines if not l.startswith("#")]
    assert len(body) == 462
    fields = body[0].split()
    assert len(fields) == 7
    assert fields[1] in "+-" and fields[5] in ("solved", "recalcitrant")
    assert any("416" in l and "46" in l for l in lines if l.startswith("#"))


def test_env_default_outdir(tmp_path, monkeypatch):
    monkeypatch.setenv("PLAIDKITE_OUT", str(tmp_path))
    assert main(["plaid", "--p", "1", "--q", "2"]) == 0
    assert (tmp_path / "plaid_1_2.txt").exists()
