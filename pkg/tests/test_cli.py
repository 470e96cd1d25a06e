import json

import pytest

from wordmaps import cli
from wordmaps.measures import FiniteGroupTable


def run(capsys, *argv):
    rc = cli.main(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


# -- helpers ----------------------------------------------------------


def test_parse_n_range():
    assert cli.parse_n_range("3..6") == [3, 4, 5, 6]
    assert cli.parse_n_range("4") == [4]
    with pytest.raises(ValueError):
        cli.parse_n_range("5..3")
    with pytest.raises(ValueError):
        cli.parse_n_range("0")


def test_parse_group_symmetric():
    assert cli.parse_group("S5") == 5
    with pytest.raises(ValueError):
        cli.parse_group("D4")


def test_parse_group_cayley(tmp_path):
    G = FiniteGroupTable.cyclic(4)
    path = tmp_path / "z4.json"
    path.write_text(
        json.dumps(
            {"order": 4, "table": [list(r) for r in G.table], "names": list(G.names)}
        )
    )
    loaded = cli.parse_group(f"cayley:{path}")
    assert loaded.table == G.table


# -- subcommands ------------------------------------------------------


def test_word_parse(capsys):
    rc, out, _ = run(capsys, "word", "parse", "--word", "xyXY")
    assert rc == 0
    assert '"word": "abAB"' in out


def test_word_syntax_error_exit_code(capsys):
    rc, _, err = run(capsys, "word", "parse", "--word", "x^")
    assert rc == 2 and "error" in err


def test_trw_csv_golden(capsys, tmp_path):
    out_file = tmp_path / "trw.csv"
    rc, _, _ = run(
        capsys,
        "measure", "trw", "--word", "x^3 y^2", "--n", "3..4", "--exact",
        "--out", str(out_file),
    )
    assert rc == 0
    lines = out_file.read_text().splitlines()
    assert lines[0].startswith("# version=")
    assert lines[4] == "N,numerator,denominator,decimal"
    assert lines[5] == "3,3,2,1.5"
    assert lines[6].startswith("4,4,3,1.3333")


def test_csv_workers_invariant(capsys, tmp_path):
    files = []
    for workers in (1, 4):
        f = tmp_path / f"w{workers}.csv"
        rc, _, _ = run(
            capsys,
            "measure", "trw", "--word", "[x,y]", "--n", "3..5", "--exact",
            "--workers", str(workers), "--out", str(f),
        )
        assert rc == 0
        files.append(f.read_bytes())
    assert files[0] == files[1]


def test_rerun_is_byte_identical(capsys, tmp_path):
    blobs = []
    for name in ("a.json", "b.json"):
        f = tmp_path / name
        rc, _, _ = run(capsys, "ext", "pi", "--word", "[x,y]", "--out", str(f))
        assert rc == 0
        blobs.append(f.read_bytes())
    assert blobs[0] == blobs[1]


def test_ext_pi_json(capsys):
    rc, out, _ = run(capsys, "ext", "pi", "--word", "[x,y]")
    assert rc == 0
    assert '"pi": 2' in out and '"C": 1' in out


def test_ext_pi_primitive_is_infinite(capsys):
    rc, out, _ = run(capsys, "ext", "pi", "--word", "xy")
    assert rc == 0 and '"pi": "infinity"' in out


def test_measure_compare_equal(capsys):
    rc, out, _ = run(
        capsys,
        "measure", "compare", "--w1", "[x,y]", "--w2", "xyxY", "--group", "S4",
        "--exact",
    )
    assert rc == 0 and "verdict: equal" in out


def test_mc_requires_seed(capsys):
    rc, _, err = run(
        capsys, "measure", "trw", "--word", "x", "--n", "3", "--mc", "--samples", "100"
    )
    assert rc == 2 and "--seed" in err


def test_exact_forbids_seed(capsys):
    rc, _, err = run(
        capsys, "measure", "trw", "--word", "x", "--n", "3", "--seed", "1"
    )
    assert rc == 2


def test_mc_runs_with_seed(capsys):
    rc, out, _ = run(
        capsys,
        "measure", "trw", "--word", "x^2", "--n", "3", "--mc",
        "--samples", "200", "--seed", "1",
    )
    assert rc == 0 and "estimate,stderr" in out


def test_hypothesis_exit_code(capsys):
    rc, _, err = run(
        capsys,
        "mobius", "inequality", "--word", "ab", "--rank", "2",
        "--images", "a^2,b", "--image-rank", "2", "--n", "3",
    )
    assert rc == 3 and "free factor" in err


def test_budget_exit_code(capsys):
    rc, _, err = run(
        capsys,
        "measure", "trw", "--word", "[x,y]", "--n", "10", "--budget", "10",
    )
    assert rc == 4 and "budget" in err.lower()


def test_power_gap_csv(capsys):
    rc, out, _ = run(
        capsys, "mobius", "power-gap", "--word", "a", "--rank", "1",
        "--d", "3", "--n", "3..5",
    )
    assert rc == 0
    assert "3,1,1,1,0,1" in out


def test_graph_export_dot(capsys):
    rc, out, _ = run(capsys, "graph", "export", "--gens", "a^2,ab", "--rank", "2")
    assert rc == 0 and out.count("->") >= 3 and "digraph" in out


def test_perm_root(capsys):
    rc, out, _ = run(
        capsys, "perm", "root", "--perm", "(1 2)(3 4)", "--degree", "4", "--d", "2"
    )
    assert rc == 0 and '"root"' in out


def test_perm_obstruction_requires_seed(capsys):
    rc, _, err = run(
        capsys, "perm", "obstruction", "--word", "x^2y^2", "--d", "2", "--n", "2..3"
    )
    assert rc == 2
