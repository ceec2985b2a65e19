import csv
import io
import json
from importlib import resources

from chevfiber.cli import main


def data_path(name):
    return str(resources.files("chevfiber.data").joinpath(name))


TOY = data_path("toy_pair.cfg")
QUARTIC = data_path("synthetic_quartic.cfg")
SPLIT_BC2 = data_path("split_bc2.cfg")


def test_roots_text_reports_order_check(capsys):
    assert main(["roots", "A2"]) == 0
    out = capsys.readouterr().out
    assert "roots: 6" in out
    assert "degrees: 2 3" in out
    assert "PASS" in out


def test_roots_json_golden(capsys):
    assert main(["--format", "json", "roots", "A2"]) == 0
    out = capsys.readouterr().out.strip()
    assert out == (
        '{"seed":0,"system":"A2","roots":6,"order":6,'
        '"degrees":[2,3],"order_check":"PASS"}'
    )


def test_roots_f4_order(capsys):
    assert main(["--format", "json", "roots", "F4"]) == 0
    assert '"order":1152' in capsys.readouterr().out


def test_roots_bad_type_exits_1(capsys):
    assert main(["roots", "Z9"]) == 1
    assert "usage error" in capsys.readouterr().err


def test_invariants_text_lists_degrees(capsys):
    assert main(["invariants", "G2"]) == 0
    out = capsys.readouterr().out
    assert "U[2] =" in out
    assert "U[6] =" in out
    assert "certificate" in out


def test_restrict_toy_first_by_degree(capsys):
    assert main(["restrict", "--config", TOY]) == 0
    out = capsys.readouterr().out
    assert "fiber degree d: 1" in out
    assert "W = 20*x1^2" in out
    assert "surjective up to degree 12 : PASS" in out


def test_restrict_quartic_selection_fails_surjectivity(capsys):
    assert main(["restrict", "--config", TOY, "--selection", "2"]) == 0
    out = capsys.readouterr().out
    assert "fiber degree d: 2" in out
    assert "surjectivity fails at degree 2" in out


def test_fiber_toy_example(capsys):
    # the documented toy run: zeta=1, target=5 gives the full two-point fiber
    assert main(["fiber", "--config", TOY, "--zeta", "1", "--target", "5"]) == 0
    out = capsys.readouterr().out
    assert "count == |W(a_q)|*d : PASS (2 == 2)" in out


def test_fiber_synthetic_quartic_example(capsys):
    assert main(["fiber", "--config", QUARTIC, "--zeta", "1", "--target", "6"]) == 0
    out = capsys.readouterr().out
    assert "count == |W(a_q)|*d : PASS (4 == 4)" in out


def test_fiber_json_payload_shape(capsys):
    code = main(
        ["--format", "json", "fiber", "--config", QUARTIC, "--zeta", "1",
         "--target", "6", "--seed", "3"]
    )
    assert code == 0
    payload = capsys.readouterr().out.splitlines()[0]
    doc = json.loads(payload)
    assert doc["seed"] == 3
    assert len(doc["solutions"]) == 4
    assert all(r < 1e-8 for r in doc["residuals"])
    assert doc["path_stats"]["failed"] == 0


def test_fiber_dependent_selection_exits_2(capsys):
    code = main(
        ["fiber", "--config", SPLIT_BC2, "--target", "1,2", "--selection", "1,1"]
    )
    assert code == 2
    assert "dependent" in capsys.readouterr().err


def test_fiber_json_bytes_deterministic(tmp_path, capsys):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    for out in (a, b):
        code = main(
            ["--format", "json", "--seed", "11", "fiber", "--config", QUARTIC,
             "--zeta", "1", "--target", "6", "--out", str(out)]
        )
        assert code == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()


def test_fiber_declared_d_mismatch_fails_verdict(tmp_path, capsys):
    cfg = tmp_path / "bad_d.cfg"
    cfg.write_text(
        "name: bad-d\ntvars: t1\nxvars: x1\n"
        "poly: x1^4 + t1^2*x1^2\nlittle_type: A\nlittle_rank: 1\nd: 3\n"
    )
    code = main(["fiber", "--config", str(cfg), "--zeta", "1", "--target", "6"])
    assert code == 2
    assert "FAIL (4 != 6)" in capsys.readouterr().out


def test_fiber_wrong_target_arity_exits_1(capsys):
    code = main(["fiber", "--config", TOY, "--zeta", "1", "--target", "1,2"])
    assert code == 1
    assert "target needs 1" in capsys.readouterr().err


def test_fiber_missing_config_exits_1(capsys):
    code = main(["fiber", "--config", "/no/such/file.cfg", "--target", "1"])
    assert code == 1


def test_fiber_csv_rows(capsys):
    code = main(
        ["--format", "csv", "fiber", "--config", QUARTIC, "--zeta", "1",
         "--target", "6"]
    )
    assert code == 0
    lines = [l for l in capsys.readouterr().out.splitlines() if "," in l]
    assert len(lines) == 1 + 4  # header plus one row per solution


def test_lambda_quartic_has_two_orbit_classes(capsys):
    code = main(["lambda", "--config", QUARTIC, "--zeta", "1", "--xi", "2"])
    assert code == 0
    out = capsys.readouterr().out
    assert "distinct orbit classes: 2" in out
    assert "lambda exists : PASS" in out


def test_lambda_wrong_xi_arity_exits_1(capsys):
    assert main(["lambda", "--config", QUARTIC, "--zeta", "1", "--xi", "1,2"]) == 1


def test_classify_all_has_35_records(capsys):
    assert main(["classify"]) == 0
    assert "records: 35" in capsys.readouterr().out


def csv_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_classify_filters(capsys):
    assert main(["--format", "csv", "classify", "--filter", "exceptional"]) == 0
    assert len(csv_rows(capsys.readouterr().out)) == 35

    assert main(["--format", "csv", "classify", "--filter", "b-exceptional"]) == 0
    assert len(csv_rows(capsys.readouterr().out)) == 10

    assert main(["--format", "csv", "classify", "--filter", "split"]) == 0
    assert len(csv_rows(capsys.readouterr().out)) == 17


def test_classify_split_rows_never_b_exceptional(capsys):
    assert main(["--format", "csv", "classify", "--filter", "split"]) == 0
    for row in csv_rows(capsys.readouterr().out):
        assert row["split"] == "yes"
        assert row["b_exceptional"] == "no"


def test_classify_json_parses(capsys):
    assert main(["--format", "json", "classify", "--filter", "b-exceptional"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["count"] == 10
    assert all(r["b_exceptional"] is True for r in doc["rows"])


def test_unknown_command_exits_1(capsys):
    assert main(["frobnicate"]) == 1
    assert "usage error" in capsys.readouterr().err


def test_unknown_config_key_rejected(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("xvars: x1\npoly: x1^2\nbogus: 1\n")
    assert main(["fiber", "--config", str(cfg), "--target", "1"]) == 1
    assert "unknown config key" in capsys.readouterr().err


def test_out_writes_payload_to_file(tmp_path, capsys):
    out = tmp_path / "roots.json"
    code = main(["--format", "json", "roots", "B2", "--out", str(out)])
    assert code == 0
    capsys.readouterr()
    assert json.loads(out.read_text())["order"] == 8


def test_threads_env_does_not_change_bytes(tmp_path, monkeypatch, capsys):
    outs = []
    for threads in ("1", "2"):
        monkeypatch.setenv("CHEVFIBER_THREADS", threads)
        out = tmp_path / f"t{threads}.json"
        code = main(
            ["--format", "json", "--seed", "5", "fiber", "--config", QUARTIC,
             "--zeta", "1", "--target", "6", "--out", str(out)]
        )
        assert code == 0
        outs.append(out.read_bytes())
    capsys.readouterr()
    assert outs[0] == outs[1]
