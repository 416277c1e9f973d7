import json
from fractions import Fraction

import pytest

from dynshaf.cli import EXIT_PARSE, EXIT_PRECONDITION, main
from dynshaf.errors import DegreeMismatch, ParseError
from dynshaf.exactalg import QQ, FunctionField, Place
from dynshaf.forms import BinaryForm
from dynshaf.parse import (
    parse_curve,
    parse_field,
    parse_form,
    parse_map,
    parse_place,
    parse_places,
    parse_points,
    parse_scalar,
)
from dynshaf.ratmap import RationalMapModel

F3 = FunctionField(3)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    return json.loads(out)


# -- parser ------------------------------------------------------------------

def test_parse_forms_and_maps():
    assert parse_form("2*x0^2 - 3*x0*x1 + x1^2") == BinaryForm((2, -3, 1))
    assert parse_form("(x0 - x1)**2") == BinaryForm((1, -2, 1))
    assert parse_form("x0*x1/2") == BinaryForm((0, Fraction(1, 2), 0))
    F = parse_map("[x0^2 - x1^2 : 2*x0*x1]")
    assert F == RationalMapModel.from_coeffs([1, 0, -1], [0, 2, 0])
    with pytest.raises(ValueError):
        parse_map("[0 : x1^3]")  # parses, but is not a morphism
    G = parse_map("[x0^2 : t*x1^2]", F3)
    assert G.F1.coeffs[2] == F3.t


@pytest.mark.parametrize("bad", ["x0^2 + x1", "[x0 : x1", "x0 ^ x1", "2 $ x0", "[0 : 0]", "x0 / x1"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        if bad.startswith("["):
            parse_map(bad)
        else:
            parse_form(bad)


def test_parse_map_degree_mismatch():
    with pytest.raises(DegreeMismatch):
        parse_map("[x0^2 : x1^3]")


def test_parse_fields_places_points_curves():
    assert parse_field("Q") == QQ and parse_field("") == QQ
    assert parse_field("5,t") == FunctionField(5)
    with pytest.raises(ParseError):
        parse_field("4,t")
    with pytest.raises(ParseError):
        parse_field("5,s")
    assert parse_place("7") == Place.prime(7)
    with pytest.raises(ParseError):
        parse_place("6")
    assert parse_place("t", F3) == Place.poly([0, 1], 3)
    assert parse_place("inf", F3) == Place.infinity(3)
    with pytest.raises(ParseError):
        parse_place("t^2 - 1", F3)  # reducible
    assert parse_places("2, 3") == (Place.prime(2), Place.prime(3))
    assert parse_places("") == ()
    pts = parse_points("0, 1, inf, [2:3], 1/2")
    assert pts == [(0, 1), (1, 1), (1, 0), (2, 3), (Fraction(1, 2), 1)]
    assert parse_curve("-1, 1") == (-1, 1)
    assert parse_scalar("t^2 + 1", F3) == F3.t ** 2 + 1
    with pytest.raises(ParseError):
        parse_scalar("t", QQ)


# -- subcommands -------------------------------------------------------------

NEWTON = "[x0^2 - x1^2 : 2*x0*x1]"


def test_ddisc(capsys):
    doc = run_json(capsys, "ddisc", "[x0^2 : x1^2]")
    assert doc["delta_diff"] == "0" and doc["differentially_separated"] is False
    doc = run_json(capsys, "ddisc", "[x0^2 + x1^2 : 3*x0^2 + 5*x1^2]")
    # diagonal quadratic: 2^40 a^2 c^2 d^2 f^2 (af - cd)^20 with af - cd = 2
    assert Fraction(doc["delta_diff"]) == 2 ** 40 * 15 ** 2 * 2 ** 20
    assert doc["ram_points"] == 2 and doc["critical_points"] == 4


def test_dgr_and_bad_places(capsys):
    assert run_json(capsys, "dgr", NEWTON, "--place", "3")["dgr"] is True
    assert run_json(capsys, "dgr", NEWTON, "--place", "2")["dgr"] is False
    diag = "[x0^2 + x1^2 : 3*x0^2 + 5*x1^2]"
    assert run_json(capsys, "dgr", diag, "--place", "7", "--method", "valuation")["dgr"] is True
    assert run_json(capsys, "dgr", diag, "--place", "5", "--method", "valuation")["dgr"] is False
    # the valuation method needs 4d - 4 distinct critical points
    assert run(capsys, "dgr", NEWTON, "--place", "5", "--method", "valuation")[0] == EXIT_PRECONDITION
    assert run_json(capsys, "bad-places", NEWTON)["bad_places"] == ["2"]
    doc = run_json(capsys, "dgr", "[x0^2 : t*x1^2]", "--field", "5,t", "--place", "t+1")
    assert doc["dgr"] is True


def test_invariants(capsys):
    doc = run_json(capsys, "invariants", "[x0^2 : x1^2]")
    assert doc["sigma"] == ["2", "0", "0"]


def test_cross_ratio(capsys):
    doc = run_json(capsys, "cross-ratio", "0,1,inf,2")
    assert doc["moduli_point"] == ["1/2"]
    assert doc["normalized"] == ["0", "1", None, "2"]


def test_divisor_equiv(capsys):
    doc = run_json(capsys, "divisor-equiv", "x0*x1*(x0 - x1)*(x0 - 2*x1)", "x0*x1*(x0 - x1)*(x0 + x1)")
    assert doc["equivalent"] is True
    doc = run_json(capsys, "divisor-equiv", "x0*x1*(x0 - x1)*(x0 - 2*x1)", "x0*x1*(x0 - x1)*(x0 - 3*x1)")
    assert doc["equivalent"] is False


def test_unit_eq_and_lambdas(capsys):
    doc = run_json(capsys, "unit-eq", "--s", "2", "--bound", "10")
    assert sorted(map(tuple, doc["solutions"])) == [("-1", "2"), ("1/2", "1/2"), ("2", "-1")]
    assert run_json(capsys, "unit-eq", "--bound", "5")["solutions"] == []
    assert len(run_json(capsys, "unit-eq", "--field", "5,t", "--bound", "2")["solutions"]) == 3
    assert sorted(run_json(capsys, "lambdas", "--s", "2")["lambdas"]) == ["-1", "1/2", "2"]


def test_lattes(capsys):
    doc = run_json(capsys, "lattes", "--curve=-1,1", "--verify")
    assert doc["disc_identity"]["two_power"] == -14
    assert doc["correspondence"]["agree"] is True
    assert doc["correspondence"]["bad_places"] == ["23"]
    assert all(doc["point_checks"].values())


def test_census_emits_json_lines(capsys):
    code, out, _ = run(capsys, "census", "--degree", "2", "--height", "1", "--s", "2")
    assert code == 0
    lines = out.splitlines()
    assert lines
    for line in lines:
        assert set(json.loads(line)) == {"model", "degree", "bad_places", "fingerprint", "flags"}
    code, out2, _ = run(capsys, "census", "--degree", "2", "--height", "1", "--s", "2", "--workers", "2")
    assert out2 == out


def test_rigidity(capsys):
    doc = run_json(capsys, "rigidity", "--y", "x0*x1*(x0 - x1)", "--degree", "3", "--height", "3")
    assert doc["count"] == 18


def test_exit_codes(capsys):
    assert run(capsys, "ddisc", "[x0^2 : x1")[0] == EXIT_PARSE
    assert run(capsys, "nonsense")[0] == EXIT_PARSE
    assert run(capsys, "dgr", NEWTON, "--place", "abc")[0] == EXIT_PARSE
    code, _, err = run(capsys, "ddisc", "[x0^2 : x0*x1]")  # common factor
    assert code == EXIT_PRECONDITION and json.loads(err)["error"] == "precondition"
    assert run(capsys, "lattes", "--curve=-3,2")[0] == EXIT_PRECONDITION  # singular
    assert run(capsys, "census", "--degree", "1", "--height", "1")[0] == EXIT_PRECONDITION
