import json

import pytest

from glsx.cli import run


@pytest.fixture
def inputs(tmp_path):
    def write(name, payload):
        path = tmp_path / name
        path.write_text(json.dumps(payload))
        return str(path)

    return {
        "f": write("f.json", {"values": [1.0, -2.0, 3.0, 0.5]}),
        "psi": write("psi.json", {"kind": "power", "m": 2}),
        "psi48": write("psi48.json", {"kind": "boundary", "b": 8, "alpha": 0.5,
                                      "beta": 0.5, "domain": [4, 8]}),
        "nu12": write("nu12.json", {"kind": "boundary", "b": 2, "alpha": 0.5,
                                    "beta": 0.5}),
        "A": write("A.json", {"entries": [[8, 1, 6], [3, 5, 7], [4, 9, 2]]}),
        "W": write("W.json", {"kind": "integral", "s": 1, "weight": "const",
                              "interval": [4, 8]}),
        "R": write("R.json", {"kind": "integral", "s": 1, "weight": "const",
                              "interval": [1, 2]}),
        "dir": tmp_path,
    }


def out_path(inputs, name):
    return str(inputs["dir"] / name)


class TestBasicCommands:
    def test_gls_norm(self, inputs, capsys):
        out = out_path(inputs, "r.json")
        code = run(["gls-norm", "--function", inputs["f"], "--psi", inputs["psi"],
                    "--grid-points", "128", "--output", out])
        assert code == 0
        printed = json.loads(capsys.readouterr().out)
        assert set(printed) == {"norm", "argmax_p", "endpoint_flag"}
        report = json.loads(open(out).read())
        assert report["result"]["norm"] == printed["norm"]
        assert report["config"]["grid_points"] == 128

    def test_fundamental(self, inputs, capsys):
        code = run(["fundamental", "--psi", inputs["psi"], "--delta", "9",
                    "--output", out_path(inputs, "fund.json")])
        assert code == 0
        printed = json.loads(capsys.readouterr().out)
        assert printed["value"] > 0

    def test_fenchel_tail_csv(self, inputs):
        out = out_path(inputs, "tail.csv")
        code = run(["fenchel-tail", "--function", inputs["f"], "--psi",
                    inputs["psi"], "--t", "e,5,10,100", "--normalize",
                    "--output", out])
        assert code == 0
        lines = open(out).read().strip().splitlines()
        assert lines[0] == "t,tail,bound,ok"
        assert len(lines) == 5

    def test_fenchel_tail_rejects_unnormalized(self, inputs, capsys):
        code = run(["fenchel-tail", "--function", inputs["f"], "--psi",
                    inputs["psi"], "--t", "e",
                    "--output", out_path(inputs, "t.csv")])
        assert code == 2

    def test_opnorm_ascent_and_oracle(self, inputs, capsys):
        code = run(["opnorm", "--matrix", inputs["A"], "--q", "2", "--p", "4",
                    "--output", out_path(inputs, "o1.json")])
        assert code == 0
        ascent = json.loads(capsys.readouterr().out)
        code = run(["opnorm", "--matrix", inputs["A"], "--q", "2", "--p", "4",
                    "--oracle", "--resolution", "240",
                    "--output", out_path(inputs, "o2.json")])
        assert code == 0
        oracle = json.loads(capsys.readouterr().out)
        assert ascent["value"] == pytest.approx(oracle["value"], rel=1e-4)

    def test_opnorm_inf_exponent(self, inputs, capsys):
        code = run(["opnorm", "--matrix", inputs["A"], "--q", "1", "--p", "inf",
                    "--output", out_path(inputs, "o3.json")])
        assert code == 0
        assert json.loads(capsys.readouterr().out)["value"] == pytest.approx(9.0)

    def test_minimal_constant(self, inputs, capsys):
        code = run(["minimal-constant", "--matrix", inputs["A"], "--sigma", "3",
                    "--p-interval", "4:8", "--q-interval", "1:2",
                    "--output", out_path(inputs, "mc.json")])
        assert code == 0
        assert json.loads(capsys.readouterr().out)["cbar"] > 0


class TestVerifyCommands:
    def test_verify_theorem1_identity(self, inputs, capsys):
        ident = str(inputs["dir"] / "ident.json")
        with open(ident, "w") as fh:
            json.dump({"entries": [[1, 0], [0, 1]]}, fh)
        code = run(["verify-theorem1", "--matrix", ident, "--psi",
                    inputs["psi48"], "--nu", inputs["nu12"], "--sigma", "1",
                    "--samples", "100", "--output",
                    out_path(inputs, "vi.json")])
        assert code == 0

    def test_verify_theorem1(self, inputs, capsys):
        out = out_path(inputs, "v1.json")
        code = run(["verify-theorem1", "--matrix", inputs["A"], "--psi",
                    inputs["psi48"], "--nu", inputs["nu12"], "--sigma", "3",
                    "--samples", "200", "--seed", "7", "--output", out])
        assert code == 0
        report = json.loads(open(out).read())
        assert report["result"]["passed"] is True
        assert report["result"]["violations"] == []

    def test_verify_theorem2(self, inputs):
        out = out_path(inputs, "v2.json")
        code = run(["verify-theorem2", "--matrix", inputs["A"], "--w-norm",
                    inputs["W"], "--r-norm", inputs["R"], "--sigma", "3",
                    "--samples", "200", "--seed", "7", "--grid-points", "17",
                    "--output", out])
        assert code == 0
        report = json.loads(open(out).read())
        assert report["result"]["passed"] is True


class TestMagicCommands:
    def test_build_then_validate(self, inputs, capsys):
        square = out_path(inputs, "sq.json")
        assert run(["magic", "--order", "4", "--output", square]) == 0
        capsys.readouterr()
        assert run(["magic", "--validate", square,
                    "--output", out_path(inputs, "val.csv")]) == 0

    def test_validate_rejects_broken_square(self, inputs, capsys):
        bad = out_path(inputs, "bad.json")
        with open(bad, "w") as fh:
            json.dump({"entries": [[1, 0], [0, 1]]}, fh)
        assert run(["magic", "--validate", bad,
                    "--output", out_path(inputs, "valbad.csv")]) == 1

    def test_check_norms_table(self, inputs, capsys):
        out = out_path(inputs, "table.csv")
        code = run(["magic", "--order", "3", "--check-norms", "1:2,2:4",
                    "--convention", "both", "--resolution", "120",
                    "--output", out])
        assert code == 0
        lines = open(out).read().strip().splitlines()
        assert len(lines) == 1 + 2 * 4  # header + pairs x conventions x orderings

    def test_check_super_exact(self, inputs, capsys):
        out = out_path(inputs, "super.csv")
        code = run(["check-super-exact", "--order", "3", "--pairs", "1:inf,2:4",
                    "--resolution", "120", "--output", out])
        assert code == 0
        text = open(out).read()
        assert "True" in text  # at least one matching combination recorded

    def test_singly_even_rejected(self, inputs):
        assert run(["magic", "--order", "6",
                    "--output", out_path(inputs, "x.json")]) == 2


class TestErrorHandling:
    def test_missing_file(self, inputs, capsys):
        assert run(["gls-norm", "--function", "nope.json", "--psi",
                    inputs["psi"], "--output", out_path(inputs, "x.json")]) == 2

    def test_malformed_psi(self, inputs, tmp_path, capsys):
        bad = tmp_path / "bad_psi.json"
        bad.write_text(json.dumps({"kind": "mystery"}))
        assert run(["gls-norm", "--function", inputs["f"], "--psi", str(bad),
                    "--output", out_path(inputs, "x.json")]) == 2

    def test_bad_exponent(self, inputs, capsys):
        assert run(["opnorm", "--matrix", inputs["A"], "--q", "0.5", "--p", "2",
                    "--output", out_path(inputs, "x.json")]) == 2


class TestDeterminism:
    def test_verify_report_bytes_stable(self, inputs, capsys):
        out1 = out_path(inputs, "d1.json")
        out2 = out_path(inputs, "d2.json")
        for out in (out1, out2):
            assert run(["verify-theorem1", "--matrix", inputs["A"], "--psi",
                        inputs["psi48"], "--nu", inputs["nu12"], "--sigma", "3",
                        "--samples", "100", "--seed", "11", "--output", out]) == 0
        assert open(out1, "rb").read() == open(out2, "rb").read()

    def test_thread_cap_does_not_change_bytes(self, inputs, capsys, monkeypatch):
        out1 = out_path(inputs, "t1.csv")
        out2 = out_path(inputs, "t2.csv")
        monkeypatch.setenv("GLSX_THREADS", "1")
        assert run(["check-super-exact", "--order", "3", "--pairs", "1:2",
                    "--resolution", "60", "--output", out1]) == 0
        monkeypatch.setenv("GLSX_THREADS", "4")
        assert run(["check-super-exact", "--order", "3", "--pairs", "1:2",
                    "--resolution", "60", "--output", out2]) == 0
        assert open(out1, "rb").read() == open(out2, "rb").read()
