import csv
import io
import json

from hypersum.cli import main


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, payload, name="in.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


THR_DOC = {
    "family": "thr",
    "n": 3,
    "gates": [
        {"weights": [1, 1, 0], "threshold": 2},
        {"weights": [0, 1, 1], "threshold": 2},
    ],
}


def test_sumprod_thr(tmp_path, capsys):
    code, out, _ = run(["sumprod", write(tmp_path, THR_DOC)], capsys)
    assert code == 0
    assert json.loads(out) == {"value": 1}


def test_sumprod_scales_by_coefficients(tmp_path, capsys):
    doc = dict(THR_DOC, coefficients=["1/2", 3])
    code, out, _ = run(["sumprod", write(tmp_path, doc)], capsys)
    assert code == 0
    assert json.loads(out) == {"value": "3/2"}


def test_sumprod_stdin(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps(THR_DOC)))
    code, out, _ = run(["sumprod", "-"], capsys)
    assert code == 0
    assert json.loads(out) == {"value": 1}


def test_sumprod_relu_fraction_output(tmp_path, capsys):
    doc = {
        "family": "relu",
        "n": 2,
        "gates": [{"weights": ["1/2", "1/2"], "bias": "-1/4"}],
    }
    code, out, _ = run(["sumprod", write(tmp_path, doc)], capsys)
    assert code == 0
    assert json.loads(out) == {"value": "5/4"}


def test_count_roots(tmp_path, capsys):
    doc = {"p": 3, "n": 4, "monomials": [[[1, 2], 1], [[3], 2]]}
    code, out, _ = run(["count-roots", write(tmp_path, doc)], capsys)
    assert code == 0
    assert json.loads(out) == {"count": 8}


def test_count_system_defaults_targets_to_zero(tmp_path, capsys):
    doc = {
        "p": 2,
        "n": 4,
        "polys": [{"monomials": [[[1], 1], [[2], 1]]}],
    }
    code, out, _ = run(["count-system", write(tmp_path, doc)], capsys)
    assert code == 0
    assert json.loads(out) == {"count": 8}


def test_check_boolean_and_count_sat(tmp_path, capsys):
    doc = {
        "family": "ethr",
        "n": 3,
        "coefficients": [1, 1],
        "gates": [
            {"weights": [1, 1, 1], "target": 0},
            {"weights": [1, 1, 1], "target": 3},
        ],
    }
    path = write(tmp_path, doc)
    code, out, _ = run(["check-boolean", path], capsys)
    assert code == 0
    assert json.loads(out) == {"is_boolean": True, "deviation": 0}
    code, out, _ = run(["count-sat", path], capsys)
    assert code == 0
    assert json.loads(out) == {"count": 2}


def test_count_sat_non_boolean_is_input_error(tmp_path, capsys):
    doc = {
        "family": "thr",
        "n": 1,
        "coefficients": ["1/2"],
        "gates": [{"weights": [1], "threshold": 1}],
    }
    code, out, err = run(["count-sat", write(tmp_path, doc)], capsys)
    assert code == 1
    assert "error" in json.loads(err)


def test_check_equal(tmp_path, capsys):
    gate = {"weights": [2, -1], "target": 1}
    doc = {
        "left": {"family": "ethr", "n": 2, "coefficients": [1], "gates": [gate]},
        "right": {
            "family": "ethr",
            "n": 2,
            "coefficients": ["1/4", "3/4"],
            "gates": [gate, gate],
        },
    }
    code, out, _ = run(["check-equal", write(tmp_path, doc)], capsys)
    assert code == 0
    assert json.loads(out) == {"equal": True, "distance": 0}


def test_oracle_subcommands(tmp_path, capsys):
    code, out, _ = run(["oracle", "sumprod", write(tmp_path, THR_DOC)], capsys)
    assert code == 0
    assert json.loads(out) == {"value": 1}
    doc = {
        "family": "thr",
        "n": 1,
        "coefficients": ["1/2"],
        "gates": [{"weights": [1], "threshold": 1}],
    }
    code, out, _ = run(["oracle", "check-boolean", write(tmp_path, doc)], capsys)
    assert code == 0
    parsed = json.loads(out)
    assert parsed["is_boolean"] is False
    assert parsed["witness"] == [1]
    assert parsed["value"] == "1/2"
    code, _, err = run(["oracle", "count-sat", write(tmp_path, doc)], capsys)
    assert code == 1


def test_malformed_json_is_exit_1(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{nope")
    code, _, err = run(["sumprod", str(path)], capsys)
    assert code == 1
    assert "error" in json.loads(err)


def test_float_weight_rejected(tmp_path, capsys):
    doc = {"family": "thr", "n": 1, "gates": [{"weights": [0.5], "threshold": 1}]}
    code, _, err = run(["sumprod", write(tmp_path, doc)], capsys)
    assert code == 1
    assert "float" in json.loads(err)["error"]


def test_missing_field_is_exit_1(tmp_path, capsys):
    code, _, err = run(["sumprod", write(tmp_path, {"family": "thr"})], capsys)
    assert code == 1


def test_cap_exceeded_is_exit_2(tmp_path, capsys):
    doc = {
        "family": "thr",
        "n": 10,
        "gates": [
            {"weights": [1] * 10, "threshold": -4},
            {"weights": [1] * 10, "threshold": -5},
            {"weights": [1] * 10, "threshold": -6},
            {"weights": [1] * 10, "threshold": -7},
        ],
    }
    code, _, err = run(["sumprod", write(tmp_path, doc), "--cap-tuples", "100"], capsys)
    assert code == 2


def test_cap_env_var_and_flag_precedence(tmp_path, capsys, monkeypatch):
    doc = {
        "family": "thr",
        "n": 10,
        "gates": [
            {"weights": [1] * 10, "threshold": -4},
            {"weights": [1] * 10, "threshold": -5},
            {"weights": [1] * 10, "threshold": -6},
            {"weights": [1] * 10, "threshold": -7},
        ],
    }
    path = write(tmp_path, doc)
    monkeypatch.setenv("HYPERSUM_CAP_TUPLES", "100")
    code, _, _ = run(["sumprod", path], capsys)
    assert code == 2
    # explicit flag wins over the environment
    code, _, _ = run(["sumprod", path, "--cap-tuples", "10000000"], capsys)
    assert code == 0


def test_bench_csv_shape_and_determinism(capsys):
    code, out1, _ = run(
        ["bench", "--family", "thr", "--n", "4:6", "--k", "2", "--trials", "2",
         "--seed", "5", "--oracle"],
        capsys,
    )
    assert code == 0
    rows1 = list(csv.reader(io.StringIO(out1)))
    assert rows1[0] == [
        "family", "n", "k", "trial", "result", "partials_enumerated", "wall_ns",
    ]
    assert len(rows1) == 1 + 3 * 2
    code, out2, _ = run(
        ["bench", "--family", "thr", "--n", "4:6", "--k", "2", "--trials", "2",
         "--seed", "5"],
        capsys,
    )
    rows2 = list(csv.reader(io.StringIO(out2)))
    # everything except wall time is reproducible under one seed
    assert [r[:6] for r in rows1] == [r[:6] for r in rows2]


def test_bench_fp_family(capsys):
    code, out, _ = run(
        ["bench", "--family", "fp", "--n", "6", "--k", "2", "--trials", "1",
         "--prime", "3", "--degree", "2", "--oracle"],
        capsys,
    )
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert len(rows) == 2
