import json
import math

import numpy as np
import pytest

from orthotensor.cli import main


def run_cli(capsys, args):
    code = main(args)
    out = capsys.readouterr().out
    return code, json.loads(out)


class TestMoments:
    def test_gaussian_d3(self, capsys):
        code, obj = run_cli(capsys, ["moments", "--weight", "gaussian", "--dim", "3"])
        assert code == 0
        assert obj["values"] == [1.0, 1.0, 1.0, 1.0, 1.0]
        assert obj["source"] == "analytic"

    def test_legendre_d1(self, capsys):
        code, obj = run_cli(capsys, ["moments", "--weight", "legendre", "--dim", "1"])
        assert code == 0
        expected = [2.0, 2.0 / 3.0, 2.0 / 15.0, 2.0 / 105.0, 2.0 / 945.0]
        assert obj["values"] == pytest.approx(expected, rel=1e-13)

    def test_yukawa_d1_domain_error(self, capsys):
        code, obj = run_cli(capsys, ["moments", "--weight", "yukawa",
                                     "--mu", "1", "--dim", "1"])
        assert code == 2
        assert obj["error"]["type"] == "domain"

    def test_unknown_family(self, capsys):
        code, obj = run_cli(capsys, ["moments", "--weight", "hermitelike"])
        assert code == 2


class TestCoeffs:
    def test_gaussian_d2(self, capsys):
        code, obj = run_cli(capsys, ["coeffs", "--weight", "gaussian", "--dim", "2"])
        assert code == 0
        assert [obj[f"c{k}"] for k in range(5)] == [1.0] * 5
        assert [obj["c_prime2"], obj["c_prime3"], obj["c_prime4"]] == [-1.0] * 3
        assert [obj["c_bar2"], obj["c_bar3"], obj["c_bar4"]] == [0.0] * 3
        assert (obj["d4"], obj["d4_prime"], obj["d4_bar"]) == (1.0, 0.0, 0.0)

    def test_legendre_d1_c0(self, capsys):
        code, obj = run_cli(capsys, ["coeffs", "--weight", "legendre", "--dim", "1"])
        assert code == 0
        assert obj["c0"] == pytest.approx(1.0 / math.sqrt(2.0), rel=1e-13)

    def test_bose_out_of_domain(self, capsys):
        code, obj = run_cli(capsys, ["coeffs", "--weight", "bose_einstein",
                                     "--z", "1.2", "--dim", "2"])
        assert code == 2
        assert obj["error"]["type"] == "domain"


class TestVerify:
    def test_gaussian_passes(self, capsys):
        code, obj = run_cli(capsys, ["verify", "--weight", "gaussian",
                                     "--dim", "3", "--tol", "1e-10"])
        assert code == 0
        assert obj["pass"] is True
        assert obj["achieved"] <= 1e-10

    def test_chebyshev1_passes(self, capsys):
        code, obj = run_cli(capsys, ["verify", "--weight", "chebyshev1",
                                     "--dim", "2", "--tol", "1e-9"])
        assert code == 0

    def test_fermi_fails_at_unreachable_tolerance(self, capsys):
        code, obj = run_cli(capsys, ["verify", "--weight", "fermi_dirac",
                                     "--z", "0.5", "--theta", "1.0",
                                     "--dim", "2", "--tol", "1e-15"])
        assert code == 1
        assert obj["pass"] is False
        assert obj["achieved"] > 1e-15  # reported achieved tolerance

    def test_gram_alias(self, capsys):
        code, obj = run_cli(capsys, ["gram", "--weight", "legendre",
                                     "--dim", "2", "--tol", "1e-9"])
        assert code == 0


class TestEvalAndProjection:
    def test_eval_legendre(self, capsys):
        code, obj = run_cli(capsys, ["eval", "--weight", "legendre", "--dim", "2",
                                     "--order", "2", "--xi", "0.3,0.4"])
        assert code == 0
        from orthotensor import eval_component, make_family, WeightSpec, Family
        fam = make_family(WeightSpec(family=Family.LEGENDRE), 2)
        entries = {tuple(e[0]): e[1] for e in obj["entries"]}
        for idx, val in entries.items():
            assert val == pytest.approx(
                float(eval_component(fam, 2, idx, [0.3, 0.4])), rel=1e-12)
        assert set(entries) == {(1, 1), (1, 2), (2, 2)}

    def test_project1d_gaussian(self, capsys):
        code, obj = run_cli(capsys, ["project1d", "--weight", "gaussian"])
        assert code == 0
        assert obj["coefficients_ascending_degree"] == [
            [1.0], [0.0, 1.0], [-1.0, 0.0, 1.0], [0.0, -3.0, 0.0, 1.0],
            [3.0, 0.0, -6.0, 0.0, 1.0]]

    def test_eval_requires_xi(self, capsys):
        code, obj = run_cli(capsys, ["eval", "--weight", "legendre", "--dim", "2"])
        assert code == 2


class TestExpandAndMultipole:
    def test_expand_gaussian(self, capsys):
        code, obj = run_cli(capsys, ["expand", "--weight", "gaussian", "--dim", "1",
                                     "--xi", "1.0", "--u", "0.1", "--order", "4"])
        assert code == 0
        assert obj["abs_error"] <= 1e-6
        assert obj["reconstructed"] == pytest.approx(obj["direct"], rel=1e-5)

    def test_multipole_dipole(self, capsys, tmp_path):
        csv = tmp_path / "dipole.csv"
        unorm = 2.16 / 20.0
        csv.write_text(f"{unorm / 2},0,0,1.0\n{-unorm / 2},0,0,-1.0\n")
        code, obj = run_cli(capsys, [
            "multipole", "--weight", "yukawa", "--mu", "1", "--dim", "3",
            "--charges", str(csv), "--xi", "2.16,0,0", "--order", "4"])
        assert code == 0
        assert obj["n_charges"] == 2
        assert abs(obj["series"] - obj["direct_sum"]) <= 0.01 * abs(obj["direct_sum"])


class TestOutputDiscipline:
    def test_byte_identical_reruns(self, capsys):
        args = ["coeffs", "--weight", "chebyshev2", "--dim", "3"]
        main(args)
        first = capsys.readouterr().out
        main(args)
        second = capsys.readouterr().out
        assert first == second

    def test_out_file(self, tmp_path, capsys):
        target = tmp_path / "table.json"
        code = main(["moments", "--weight", "gaussian", "--dim", "2",
                     "--out", str(target)])
        assert code == 0
        assert capsys.readouterr().out == ""
        obj = json.loads(target.read_text())
        assert obj["values"] == [1.0] * 5

    def test_errors_are_json(self, capsys):
        code = main(["moments", "--weight", "bose_einstein", "--z", "2.0"])
        out = capsys.readouterr().out
        obj = json.loads(out)
        assert code == 2 and "error" in obj
