import os

import pytest
from hypothesis import given, strategies as st

from quintic_strata.document import MatrixDocument, parse, parse_twists, to_text
from quintic_strata.forms import ParseError
from quintic_strata.gallery import sample_stratum
from quintic_strata.linalg import GF

EXAMPLE = """space M(5,3)
source O(-2)^2 O(-1)
target O^3
matrix
[ x*y , x^2 , 0 ]
[ x*z , 0 , x ]
[ 0 , -x*z , y ]
"""


def test_parse_example():
    doc = parse(EXAMPLE)
    assert doc.space == 3
    assert tuple(doc.source) == (-2, -2, -1)
    assert to_text(doc) == EXAMPLE


def test_twists():
    assert tuple(parse_twists("O(-1)^2 O O(3)")) == (-1, -1, 0, 3)
    with pytest.raises(ParseError):
        parse_twists("O(-1)^0")
    with pytest.raises(ParseError):
        parse_twists("P(1)")


def test_comments_and_blank_lines():
    text = "# header\n\nsource O(-1)   # one\ntarget O\nmatrix\n[ x ]  # entry\n"
    assert parse(text).entries[0][0].to_text() == "x"


@pytest.mark.parametrize("text,line,col", [
    ("source O(-1)\ntarget O\nmatrix\n[ x^2 ]\n", 4, 3),
    ("source O(-1)\ntarget O\nmatrix\n[ x , y ]\n", 4, 1),
    ("source O(-1)\ntarget O\nmatrix\n", 3, 1),
    ("source O(-1)\nmatrix\n[ x ]\n", 2, 1),
    ("source O(-1)\ntarget O\nfoo\n", 3, 1),
    ("source O(-1)\ntarget O\nmatrix\n  x ]\n", 4, 3),
    ("space M(4,1)\nsource O(-1)\ntarget O\nmatrix\n[ x ]\n", 1, 7),
])
def test_error_positions(text, line, col):
    with pytest.raises(ParseError) as e:
        parse(text)
    assert (e.value.line, e.value.col) == (line, col)


def test_finite_field_document():
    doc = parse("source O(-1)\ntarget O\nmatrix\n[ 12*x ]\n", GF(5))
    assert to_text(doc).endswith("[ 2*x ]\n")


def test_from_morphism_roundtrip():
    phi = sample_stratum(1, "X2", seed=0)
    doc = MatrixDocument.from_morphism(phi, 1)
    assert parse(to_text(doc)) == doc
    assert parse(to_text(doc)).morphism() == phi


def test_corpus_roundtrip(corpus_dir):
    files = sorted(os.listdir(corpus_dir))
    assert len(files) >= 20
    for name in files:
        with open(os.path.join(corpus_dir, name)) as fh:
            doc = parse(fh.read())
        text = to_text(doc)
        assert parse(text) == doc
        assert to_text(parse(text)) == text


@given(st.sampled_from([(3, "X0"), (3, "X3"), (1, "X1"), (0, "X2"), (4, "X2")]),
       st.integers(0, 50))
def test_sample_documents_roundtrip(key, seed):
    chi, label = key
    doc = MatrixDocument.from_morphism(sample_stratum(chi, label, seed=seed), chi)
    text = to_text(doc)
    assert parse(text) == doc
    assert to_text(parse(text)) == text
