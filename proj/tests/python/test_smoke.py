import json
import os
from fractions import Fraction
from pathlib import Path

import pytest

import metcomp

DATA = Path(os.environ.get("METCOMP_DATA_DIR", Path(__file__).resolve().parents[2] / "data"))


def doc(name):
    return (DATA / name).read_text()


def test_worked_incomplete_instance():
    filt, net, cert = metcomp.is_complete(doc("incomplete_sierpinski.json"))
    assert (filt, net, cert) == (False, False, "(a,{x_b})")
    completed = metcomp.complete(doc("incomplete_sierpinski.json"))
    parsed = json.loads(completed)
    assert len(parsed["carrier"]["points"]) == 2
    assert metcomp.is_complete(completed)[:2] == (True, True)
    assert metcomp.completion_is_complete(doc("incomplete_sierpinski.json"))


def test_sqrt2_distance():
    d = Fraction(metcomp.dstar(doc("sqrt2.json"), "newton_sqrt(2)", "const(3/2)", "1/1000000"))
    assert abs(d - Fraction("0.085786437626904954")) <= Fraction(1, 10**6)


def test_random_instances_validate_and_agree():
    for seed in range(1, 40):
        d = metcomp.random_instance(seed)
        assert metcomp.validate(d) == []
        assert metcomp.theorem3(d)
        assert metcomp.lemma2(d)


def test_invalid_input_raises():
    with pytest.raises(ValueError, match="/distance/matrix/0/1"):
        metcomp.validate(doc("malformed_decimal.json"))


def test_cli_entry():
    code, out, err = metcomp.run(["complete-check", str(DATA / "sierpinski.json")])
    assert code == 0, err
    assert "SUMMARY" in out
    code, _, err = metcomp.run(["validate", str(DATA / "malformed_decimal.json")])
    assert code == 2
    assert err.startswith("ERROR")
