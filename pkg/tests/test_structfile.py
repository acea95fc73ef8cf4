import pytest
from hypothesis import given
from hypothesis import strategies as st

from jacobigeo import catalog
from jacobigeo.structfile import (StructureError, from_json, load_path, parse_text, split_label,
                                  to_json, to_text)

BASIC = """\
name = demo
kind = jacobi
coords = x y z
excluded = x - 1
pi.xy = z          # bracket of x and y
pi.zx = y
xi.z = 1
lambda = zero
expect.jacobi = fail
"""


def test_parse_basic():
    d = parse_text(BASIC)
    assert d.name == "demo" and d.kind == "jacobi" and d.coords == ("x", "y", "z")
    assert d.components[("pi", (0, 1))] == "z"
    assert d.components[("pi", (2, 0))] == "y"
    assert d.lam == "zero"
    assert d.expect == {"jacobi": "fail"}
    assert d.excluded == ("x - 1",)


@pytest.mark.parametrize("name", catalog.names())
def test_golden_files_roundtrip(name):
    d = catalog.definition(name)
    again = parse_text(to_text(d))
    assert again.components == d.components and again.expect == d.expect
    assert again.kind == d.kind and again.coords == d.coords
    via_json = from_json(to_json(d))
    assert via_json.components == d.components and via_json.lam == d.lam
    assert via_json.counterexample == d.counterexample


def test_split_label_variants():
    names = ["x1", "y1", "x2", "z"]
    assert split_label("x1.y1", names) == ("x1", "y1")
    assert split_label("x1y1", names) == ("x1", "y1")
    with pytest.raises(StructureError, match="ambiguous"):
        split_label("ab", ["a", "b", "ab"])
    with pytest.raises(StructureError):
        split_label("q", names)


@pytest.mark.parametrize("text, line, msg", [
    ("kind = jacobi\ncoords = x y\npi.xq = 1\n", 3, "cannot split"),
    ("kind = jacobi\ncoords = x y\npi.x = 1\n", 3, "needs 2"),
    ("kind = jacobi\ncoords = x y\npi.xy = x +\n", 3, "pi.xy"),
    ("kind = jacobi\ncoords = x y\neta.x = 1\n", 3, "does not belong"),
    ("kind = nonsense\ncoords = x y\n", 1, "unknown kind"),
    ("kind = jacobi\ncoords = x y\npi.xy = 1\npi.xy = 2\n", 4, "duplicate"),
    ("kind = jacobi\ncoords = x y\nlambda = banana\n", 3, "lambda"),
    ("kind = jacobi\ncoords = x y\nexpect.jacobi = maybe\n", 3, "verdict"),
    ("kind = jacobi\ncoords = x y\njunk line\n", 3, "key = value"),
])
def test_errors_carry_line_numbers(text, line, msg):
    with pytest.raises(StructureError, match=msg) as info:
        parse_text(text, "f.struct")
    assert info.value.line == line
    assert f"f.struct:{line}:" in str(info.value)


def test_missing_required_key():
    with pytest.raises(StructureError, match="coords"):
        parse_text("kind = poisson\n")


def test_explicit_lambda_components():
    d = parse_text("kind = jacobi\ncoords = x y\npi.xy = 1\nlambda.x = y\n")
    assert d.lam == "explicit"
    with pytest.raises(StructureError):
        parse_text("kind = jacobi\ncoords = x y\nlambda = zero\nlambda.x = y\n")


def test_json_dimension_mismatch():
    with pytest.raises(StructureError, match="dim"):
        from_json('{"kind": "poisson", "chart": {"dim": 3, "coords": ["x", "y"]}}')


def test_load_path_detects_json(tmp_path):
    d = catalog.definition("contact-r3")
    p = tmp_path / "c.json"
    p.write_text(to_json(d))
    assert load_path(p).components == d.components


@given(st.lists(st.sampled_from(["x", "y", "z"]), min_size=2, max_size=2))
def test_concatenated_single_letter_labels(parts):
    assert split_label("".join(parts), ["x", "y", "z"]) == tuple(parts)
