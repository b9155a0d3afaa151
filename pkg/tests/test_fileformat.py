import pytest

from flgauge.arith import PrimeContext
from flgauge.fileformat import (ParseError, emit_module, emit_morphism, load, load_morphism,
                                parse_module, parse_morphism)
from flgauge.fl import fl_validate, scalar_morphism, tate_twist
from flgauge.mazsyn import MazurModule
from flgauge.sen import extension_class

FIXTURES = ["unit.fl", "tate1.fl", "ext_p3.fl", "ext_p3_f2.fl", "k0_p3.fl", "k1_p3.fl"]


@pytest.mark.parametrize("name", FIXTURES)
def test_fixture_roundtrip(fixtures_dir, name):
    text = (fixtures_dir / name).read_text()
    assert emit_module(parse_module(text)) == text


def test_tate1_fixture_is_w1(fixtures_dir):
    assert load(fixtures_dir / "tate1.fl") == tate_twist(PrimeContext(3, 4), 1)


def test_extension_fixture(fixtures_dir):
    E = load(fixtures_dir / "ext_p3.fl")
    assert fl_validate(E).ok
    assert extension_class(E).coords == [1]


def test_morphism_roundtrip(fixtures_dir):
    text = (fixtures_dir / "times_p.fl").read_text()
    f = parse_morphism(text)
    assert emit_morphism(f) == text
    W = tate_twist(PrimeContext(3, 2), 0)
    assert emit_morphism(scalar_morphism(W, 3)) == text


def test_entries_reduced_on_load():
    M = parse_module("p 3\nN 2\nwmax 0\npiece 0 free 1\nphi 0 1x1\n  10\n")
    assert "  1\n" in emit_module(M)


def test_comments_and_defaults():
    M = parse_module("# unit\np 5   # prime\nN 1\nwmax 0\npiece 0 free 1\nphi 0 1x1\n  1\n")
    assert M.ctx.f == 1 and fl_validate(M).ok


def test_mazur_kind():
    M = parse_module("kind mazur\np 3\nN 2\nwmax 0\npiece 0 free 1\nphi 0 1x1\n  1\n")
    assert isinstance(M, MazurModule)
    assert emit_module(M).startswith("kind mazur")


def test_explicit_generator_order():
    text = "kind fl\np 3\nN 2\nf 1\nwmax 0\npiece 0 exps 1 2\nphi 0 2x2\n  1 0\n  0 1\n"
    assert emit_module(parse_module(text)) == text


def test_f2_entries():
    text = ("kind fl\np 3\nN 1\nf 2\nminpoly 1 0 1\nwmax 0\npiece 0 free 1\n"
            "phi 0 1x1\n  [0, 1]\n")
    M = parse_module(text)
    assert M.phi[0][0][0].c == (0, 1)


BAD = [
    ("p 3\nN 2\nwmax 1\npiece 0 free 2\npiece 1 free 2\nvminus 1 2x3\n  1 0 0\n  0 1 0\n",
     "dimension mismatch in degree 1", 6),
    ("p 4\nN 2\nwmax 0\npiece 0 free 1\nphi 0 1x1\n  1\n", "prime", 1),
    ("p 3\nN 2\nwmax 0\npiece 0 free 1\nphi 0 1x1\n  x\n", "integer", 6),
    ("p 3\nN 2\nwmax 0\npiece 0 free 1\nphi 0 1x1\n", "matrix rows", 5),
    ("p 3\nwmax 0\n", "missing header field 'N'", None),
    ("p 3\nN 2\nwmax 0\npiece 0 torsion 3\nphi 0 1x1\n  1\n", "outside [1, N=2]", 4),
    ("p 3\nN 2\nwmax 1\npiece 0 free 1\npiece 1 free 1\nphi 0 1x1\n  1\nphi 1 1x1\n  1\n", "missing vminus 1", None),
    ("p 3\nN 2\nf 2\nminpoly 1 0 2 1\nwmax 0\n", "minpoly", 4),
]


@pytest.mark.parametrize("text,msg,line", BAD)
def test_parse_errors(text, msg, line):
    with pytest.raises(ParseError, match=msg.replace("[", r"\[").replace("]", r"\]")) as e:
        parse_module(text)
    assert e.value.line == line


def test_load_morphism(fixtures_dir):
    f = load_morphism(fixtures_dir / "times_p.fl")
    assert f.check() == []
