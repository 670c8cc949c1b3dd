"""Text format for presentations.

    space M(5,3)              # optional
    source O(-2)^2 O(-1)
    target O^3
    matrix
    [ x*y , x^2 , 0 ]
    [ x*z , 0 , x ]
    [ 0 , -x*z , y ]

``#`` starts a comment.  Entries follow the forms grammar.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .forms import Form, ParseError, parse_form
from .graded import GradedMorphism, TwistSum
from .linalg import QQ, Field

_ITEM = re.compile(r"O(?:\((-?\d+)\))?(?:\^(\d+))?$")


def parse_twists(text: str, line: int = 1, col: int = 1) -> TwistSum:
    """Whitespace-separated ``O(a)``, ``O(a)^n``, ``O``, ``O^n``."""
    out: List[int] = []
    for m in re.finditer(r"\S+", text):
        item = _ITEM.match(m.group(0))
        if not item:
            raise ParseError(f"bad line-bundle item {m.group(0)!r}", line, col + m.start())
        a = int(item.group(1)) if item.group(1) is not None else 0
        n = int(item.group(2)) if item.group(2) is not None else 1
        if n == 0:
            raise ParseError("multiplicity must be positive", line, col + m.start())
        out.extend([a] * n)
    if not out:
        raise ParseError("empty sum of line bundles", line, col)
    return TwistSum(out)


@dataclass
class MatrixDocument:
    source: TwistSum
    target: TwistSum
    entries: List[List[Form]]
    space: Optional[int] = None          # chi of M(5, chi)
    field: Field = QQ

    def morphism(self) -> GradedMorphism:
        return GradedMorphism(self.source, self.target, self.entries, self.field)

    @classmethod
    def from_morphism(cls, phi: GradedMorphism, space: Optional[int] = None) -> "MatrixDocument":
        return cls(TwistSum(phi.source), TwistSum(phi.target),
                   [list(r) for r in phi.entries], space, phi.field)

    def __eq__(self, other):
        return (isinstance(other, MatrixDocument) and self.space == other.space
                and tuple(self.source) == tuple(other.source)
                and tuple(self.target) == tuple(other.target)
                and self.field == other.field
                and [list(r) for r in self.entries] == [list(r) for r in other.entries])


def _strip_comment(line: str) -> str:
    k = line.find("#")
    return line if k < 0 else line[:k]


def _split_row(body: str, lineno: int, col0: int) -> List[Tuple[str, int]]:
    """Cells of ``[ a , b ]`` with their starting columns."""
    s = body.rstrip()
    lead = len(s) - len(s.lstrip())
    if not s.strip().startswith("["):
        raise ParseError("matrix row must start with '['", lineno, col0 + lead)
    if not s.endswith("]"):
        raise ParseError("matrix row must end with ']'", lineno, col0 + len(s))
    inner_start = s.index("[") + 1
    inner = s[inner_start:-1]
    cells = []
    pos = 0
    for piece in inner.split(","):
        cells.append((piece, col0 + inner_start + pos))
        pos += len(piece) + 1
    return cells


def parse(text: str, field: Field = QQ) -> MatrixDocument:
    """Parse a document; errors carry line and column."""
    space = None
    source = target = None
    rows: List[List[Form]] = []
    in_matrix = False
    last_line = 1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        last_line = lineno
        line = _strip_comment(raw)
        if not line.strip():
            continue
        if in_matrix:
            if source is None or target is None:
                raise ParseError("source and target must precede the matrix", lineno, 1)
            i = len(rows)
            if i >= len(target):
                raise ParseError(f"more than {len(target)} matrix rows", lineno, 1)
            cells = _split_row(line, lineno, 1)
            if len(cells) != len(source):
                raise ParseError(f"row {i + 1} has {len(cells)} entries, expected {len(source)}",
                                 lineno, 1)
            row = []
            for j, (cell, col) in enumerate(cells):
                if not cell.strip():
                    raise ParseError("empty matrix entry", lineno, col)
                d = target[i] - source[j]
                f = parse_form(cell, field, None, lineno, col)
                if f.terms and f.degree != d:
                    lead = col + len(cell) - len(cell.lstrip())
                    raise ParseError(f"entry ({i + 1},{j + 1}) has degree {f.degree}, expected {d}",
                                     lineno, lead)
                row.append(f if f.terms else Form.zero(field, d))
            rows.append(row)
            continue
        stripped = line.strip()
        lead = len(line) - len(line.lstrip()) + 1
        word, _, rest = stripped.partition(" ")
        rest_col = lead + len(word) + 1
        if word == "space":
            if space is not None or source is not None:
                raise ParseError("'space' must come first and only once", lineno, lead)
            m = re.fullmatch(r"\s*M\(\s*5\s*,\s*(-?\d+)\s*\)\s*", rest, re.IGNORECASE)
            if not m:
                raise ParseError("expected M(5,<int>)", lineno, rest_col)
            space = int(m.group(1))
        elif word == "source":
            if source is not None:
                raise ParseError("duplicate 'source' line", lineno, lead)
            source = parse_twists(rest, lineno, rest_col)
        elif word == "target":
            if target is not None:
                raise ParseError("duplicate 'target' line", lineno, lead)
            target = parse_twists(rest, lineno, rest_col)
        elif word == "matrix":
            if rest.strip():
                raise ParseError("nothing may follow 'matrix' on its line", lineno, rest_col)
            if source is None or target is None:
                raise ParseError("source and target must precede the matrix", lineno, lead)
            in_matrix = True
        else:
            raise ParseError(f"unknown keyword {word!r}", lineno, lead)
    if not in_matrix:
        raise ParseError("missing 'matrix' section", last_line, 1)
    if len(rows) != len(target):
        raise ParseError(f"expected {len(target)} matrix rows, found {len(rows)}", last_line, 1)
    return MatrixDocument(source, target, rows, space, field)


def to_text(doc: MatrixDocument) -> str:
    """Canonical text: one row per line, terms in graded-lex order."""
    out = []
    if doc.space is not None:
        out.append(f"space M(5,{doc.space})")
    out.append(f"source {_twists_text(doc.source)}")
    out.append(f"target {_twists_text(doc.target)}")
    out.append("matrix")
    for r in doc.entries:
        out.append("[ " + " , ".join(e.to_text() for e in r) + " ]")
    return "\n".join(out) + "\n"


def _twists_text(t) -> str:
    return str(TwistSum(t))
