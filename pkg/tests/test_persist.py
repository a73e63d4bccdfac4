import pytest

from ellmot.dg import DGComplex, MotiveTerm, OpaqueAlgebra, check_dg
from ellmot.grammar import ParseError
from ellmot.persist import HEADER, dump_resolution, dumps, loads, parse_torus
from ellmot.pi1 import build_pi1_complex, p1_walkthrough


def test_header_and_layout():
    K, res, _ = p1_walkthrough()
    text = dumps(K)
    lines = text.splitlines()
    assert lines[0] == HEADER and lines[1] == "algebra opaque"
    assert any(line.startswith("f 1 0 = 1 x2=b") for line in lines)
    assert text.endswith("\n")


@pytest.mark.parametrize("n", [1, 2])
def test_elliptic_round_trip(n):
    res = build_pi1_complex(n).resolution
    text = dump_resolution(res)
    doc = loads(text)
    assert dumps(doc.complex, doc.homotopies) == text
    assert check_dg(doc.complex).ok
    assert doc.complex.maps.keys() == res.complex.maps.keys()


def test_opaque_round_trip_keeps_relations_and_aliases():
    _, res, _ = p1_walkthrough()
    text = dump_resolution(res)
    doc = loads(text)
    assert dumps(doc.complex, doc.homotopies) == text
    assert str(doc.complex.map(3, 1)[(0, 0)]) == "(t, 1-t, 1-b/t)"
    assert check_dg(doc.complex).ok


def test_torus_parsing():
    t = parse_torus("{x1 - x2 = 0, x3 = a - b}", 3)
    assert str(t) == "{x1 - x2 = 0, x3 = a - b} in E^3"
    assert str(parse_torus("E^2", 2)) == "E^2"


@pytest.mark.parametrize("text", [
    "",
    "ellmot-complex 2\n",
    HEADER + "\nobject 0 0 E 0 0 0 0\n",
    HEADER + "\nalgebra opaque\nf 0 0 = 1 g\n",
    HEADER + "\nalgebra opaque\nobject 0 0 opaque 0 0 0 0 A\nobject 1 1 opaque 0 0 0 0 B\nf 1 0 = 1 g\n",
    HEADER + "\nalgebra elliptic\nobject 0 0 E 1 0 0 0\nobject 1 1 E 1 0 0 0\nf 1 0 = 1 [1>1 {y1 = 0}]\n",
    HEADER + "\nalgebra opaque\nwhatever\n",
])
def test_malformed_documents(text):
    with pytest.raises(ParseError):
        loads(text)


def test_empty_complex():
    K = DGComplex({0: [MotiveTerm("opaque", label="A")]}, {}, OpaqueAlgebra())
    assert loads(dumps(K)).complex.objects == {0: [MotiveTerm("opaque", label="A")]}
