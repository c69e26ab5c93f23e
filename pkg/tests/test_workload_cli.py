from __future__ import annotations

import pytest

from lazybfs.cli import main
from lazybfs.congest import CSV_HEADER
from lazybfs.graph import eccentricity, write_graph, write_updates
from lazybfs.runner import RunError, emit_csv, emit_summary, run
from lazybfs.workload import DECREMENTAL, FAMILIES, INCREMENTAL, WorkloadError, gen_workload


def test_path_with_chords_insertions():
    w = gen_workload("path_with_chords", 100, 50, 1, INCREMENTAL)
    assert w.q == 50 and all(op == "I" and 2 <= v - u <= 3 for op, u, v in w.changes)
    w.check()
    assert eccentricity(w.graph(), 0) == 99


@pytest.mark.parametrize("family", FAMILIES)
@pytest.mark.parametrize("direction", [INCREMENTAL, DECREMENTAL])
def test_families_are_valid_and_deterministic(family, direction):
    a = gen_workload(family, 60, 40, 7, direction)
    b = gen_workload(family, 60, 40, 7, direction)
    c = gen_workload(family, 60, 40, 8, direction)
    a.check()
    assert (a.edges, a.changes) == (b.edges, b.changes)
    assert a.changes != c.changes


def test_er_deletions_are_present_edges():
    w = gen_workload("er_random", 80, 150, 3, DECREMENTAL)
    present = set(w.edges)
    for _, u, v in w.changes:
        assert (u, v) in present
        present.remove((u, v))


def test_infeasible_requests():
    with pytest.raises(WorkloadError):
        gen_workload("grid", 16, 100, 0, DECREMENTAL)
    with pytest.raises(WorkloadError):
        gen_workload("path_with_chords", 10, 100, 0, INCREMENTAL)
    with pytest.raises(WorkloadError):
        gen_workload("hypercube", 10, 1, 0)


def test_runner_direction_and_mode_checks():
    w = gen_workload("path_with_chords", 30, 10, 0, INCREMENTAL)
    with pytest.raises(RunError):
        run(w, "dec_dist")
    with pytest.raises(RunError):
        run(w, "inc_seq", mode="distributed")
    with pytest.raises(RunError):
        run(w, "naive", epsilon=0)


def test_naive_rounds_track_eccentricity():
    w = gen_workload("path_with_chords", 60, 20, 2, INCREMENTAL)
    rep = run(w, "naive")
    g = w.graph()
    for (op, u, v), row in zip(w.changes, rep.ledger.rows[1:]):
        g.insert_edge(u, v)
        assert row.rounds == eccentricity(g, 0)
    assert rep.passed


def test_es_exact_on_deletions():
    w = gen_workload("long_cycle", 60, 50, 2, DECREMENTAL)
    rep = run(w, "es")
    assert rep.passed and rep.max_ratio == 1.0
    assert all(s.reported_digest == s.oracle_digest for s in rep.stages)


def test_empty_run_and_csv_bytes(tmp_path):
    w = gen_workload("grid", 25, 0, 0, INCREMENTAL)
    rep = run(w, "inc_dist")
    emit_csv(rep, tmp_path / "e.csv")
    assert (tmp_path / "e.csv").read_text() == ",".join(CSV_HEADER) + "\n"
    w = gen_workload("long_cycle", 80, 60, 5, DECREMENTAL)
    emit_csv(run(w, "dec_dist", 0.5), tmp_path / "a.csv")
    emit_csv(run(w, "dec_dist", 0.5), tmp_path / "b.csv")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_summary_block(capsys):
    rep = run(gen_workload("star_chain", 40, 30, 1, INCREMENTAL), "inc_seq", 0.5)
    emit_summary(rep)
    out = capsys.readouterr().out
    assert "status: PASS" in out and "amortized_rounds:" in out


def test_cli_generated_run(tmp_path, capsys):
    out = tmp_path / "ledger.csv"
    code = main(["--family", "long_cycle", "--n", "50", "--q", "40", "--algo", "dec_dist",
                 "--epsilon", "0.5", "--out", str(out)])
    assert code == 0
    assert out.read_text().splitlines()[0] == ",".join(CSV_HEADER)
    assert "status: PASS" in capsys.readouterr().out


def test_cli_file_inputs(tmp_path):
    w = gen_workload("er_random", 30, 20, 4, INCREMENTAL)
    write_graph(w.graph(), tmp_path / "g.txt")
    write_updates(w.changes, tmp_path / "u.txt")
    assert main(["--graph", str(tmp_path / "g.txt"), "--updates", str(tmp_path / "u.txt"),
                 "--algo", "naive", "--mode", "sequential", "--audit", "final"]) == 0
    write_updates([("I", 0, 1), ("D", 0, 1)], tmp_path / "mixed.txt")
    assert main(["--graph", str(tmp_path / "g.txt"), "--updates", str(tmp_path / "mixed.txt")]) == 2


def test_cli_errors(tmp_path, capsys):
    assert main(["--family", "grid", "--n", "16", "--q", "100", "--algo", "dec_dist"]) == 2
    assert main(["--algo", "inc_seq", "--mode", "distributed", "--n", "20"]) == 2
    assert main(["--n", "20", "--out", str(tmp_path / "missing" / "x.csv")]) == 2
    assert "error" in capsys.readouterr().err
