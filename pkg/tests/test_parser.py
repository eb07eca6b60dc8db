from lark.exceptions import UnexpectedInput
import pytest

from wgplate.syntax.parser import parse, to_mapping


def test_single_entry():
    results = parse("k = 3")
    assert results == [("k", [3], 1)]


def test_list_and_comments():
    text = """# chevron study
k = 2
levels = 4, 8,16   # three levels

mesh = nonconvex
"""
    results = parse(text)
    assert [key for key, _, _ in results] == ["k", "levels", "mesh"]
    assert results[1] == ("levels", [4, 8, 16], 3)
    assert results[2] == ("mesh", ["nonconvex"], 5)


def test_empty_text():
    assert parse("") == []
    assert parse("# nothing here\n\n") == []


@pytest.mark.parametrize(
    "atom, value",
    [
        ("3", 3),
        ("-1", -1),
        ("2.5", 2.5),
        ("1e-10", 1e-10),
        ("True", "True"),
        ("results/k3.csv", "results/k3.csv"),
        ("nonconvex", "nonconvex"),
        ("'quoted'", "'quoted'"),
    ],
)
def test_atom_literals(atom, value):
    results = parse(f"x = {atom}")
    assert results[0][1] == [value]
    assert type(results[0][1][0]) is type(value)


@pytest.mark.parametrize(
    "text",
    [
        "k 3",
        "= 3",
        "k = ",
        "k = 3 4",
        "k = 3,",
        "k = = 3",
        "3 = k",
    ],
)
def test_syntax_errors(text):
    with pytest.raises(UnexpectedInput):
        parse(text)


def test_mapping_unwraps_single_values():
    mapping, duplicates = to_mapping(parse("k = 2\nlevels = 4, 8\nlevels = 2"))
    assert mapping == {"k": (2, 1), "levels": ([4, 8], 2)}
    assert duplicates == [("levels", 2, 3)]
