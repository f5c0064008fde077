import pytest

from eqdeform.fields import GF, QQ
from eqdeform.problem import EPS_NAME, ProblemError, parse_problem

CUSP = """\
# cusp with the sign involution
field Q
vars x y
ideal: y^2 - x^3
gen s: y -> -y
option truncate = 4
"""


def test_parse_cusp():
    p = parse_problem(CUSP)
    assert p.field == QQ and p.field_text == "Q"
    assert p.variables == ("x", "y")
    assert len(p.ideal) == 1 and len(p.ideal[0]) == 1
    assert repr(p.ideal[0][0]) == "-x^3 + y^2"
    assert p.group_maps[0][0] == "s"
    assert p.options == {"truncate": "4"}
    assert p.eps_order == 0


def test_parse_wild_node():
    text = "field F 2\nvars x y\nideal: x*y\ngen s: x -> y, y -> x\n"
    p = parse_problem(text)
    assert p.field == GF(2)
    assert repr(p.ideal[0][0]) == "x*y"


def test_parse_eps_lift():
    text = "field Q\nvars x y\nideal: y^2 - x^3 - eps*x\ngen s: y -> -y\n"
    p = parse_problem(text)
    assert p.eps_order == 1
    assert repr(p.ideal[0][0]) == "-x^3 + y^2"
    assert repr(p.ideal[0][1]) == "-x"


def test_parse_empty_ideal():
    p = parse_problem("field F 2\nvars x\nideal:\ngen t: x -> x + 1\n")
    assert p.ideal == []


def test_round_trip_through_renderer():
    for text in (
        CUSP,
        "field F 2\nvars x y\nideal: x*y\ngen s: x -> y, y -> x\n",
        "field Q\nvars x y\nideal: y^2 - x^3 - eps*x\ngen s: y -> -y\n",
        "field F 2\nvars x\nideal:\ngen t: x -> x + 1\n",
    ):
        once = parse_problem(text)
        canon = once.canonical_text()
        twice = parse_problem(canon)
        assert twice.canonical_text() == canon


def test_errors_are_position_tagged():
    with pytest.raises(ProblemError) as err:
        parse_problem("field F 4\nvars x\nideal: x\n")
    assert "line 1" in str(err.value)
    with pytest.raises(ProblemError) as err:
        parse_problem("field Q\nvars x\nideal: x + z\n")
    assert "line 3" in str(err.value)
    with pytest.raises(ProblemError):
        parse_problem("field Q\nvars x eps\nideal: x\n")
    with pytest.raises(ProblemError):
        parse_problem("field Q\nvars x\nideal: x\noption tuncate = 3\n")
    with pytest.raises(ProblemError):
        parse_problem("vars x\nfield Q\nideal: x\n")
    with pytest.raises(ProblemError):
        parse_problem("field Q\nvars x\n")
    with pytest.raises(ProblemError):
        parse_problem("field Q\nvars x\nideal: x\ngen s: y -> x\n")


def test_order_option():
    text = "field Q\nvars x\nideal: x\noption order = 2\n"
    assert parse_problem(text).eps_order == 2
    with pytest.raises(ProblemError):
        parse_problem("field Q\nvars x\nideal: x - eps^3\noption order = 1\n")
