"""Morphisms of FinRel as dense boolean matrices.

A relation ``R: A -> B`` is stored as a ``|B| x |A|`` matrix with
``m[b, a]`` true iff ``a R b``.  Tensor products use ``numpy.kron``, which
pairs ``(i, j)`` as ``i * |B| + j``: the same row-major order as the
partial-injection oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..pinj import PartialFunction, ShapeMismatch


@dataclass(frozen=True, eq=False)
class Relation:
    dom: int
    cod: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=bool)
        if m.shape != (self.cod, self.dom):
            raise ShapeMismatch(f"matrix shape {m.shape} does not match {self.dom}->{self.cod}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_pairs(cls, dom: int, cod: int, pairs) -> "Relation":
        m = np.zeros((cod, dom), dtype=bool)
        for a, b in pairs:
            m[b, a] = True
        return cls(dom, cod, m)

    @classmethod
    def from_function(cls, f: PartialFunction) -> "Relation":
        return cls.from_pairs(f.dom.size, f.cod.size, f.graph)

    @classmethod
    def empty(cls, dom: int, cod: int) -> "Relation":
        return cls(dom, cod, np.zeros((cod, dom), dtype=bool))

    def pairs(self) -> list[tuple[int, int]]:
        return [(int(a), int(b)) for b, a in zip(*np.nonzero(self.matrix))]

    def image(self, a: int) -> frozenset[int]:
        return frozenset(int(b) for b in np.nonzero(self.matrix[:, a])[0])

    def __eq__(self, other):
        if not isinstance(other, Relation):
            return NotImplemented
        return (self.dom, self.cod) == (other.dom, other.cod) and bool(np.array_equal(self.matrix, other.matrix))

    def __hash__(self):
        return hash((self.dom, self.cod, self.matrix.tobytes()))

    def __le__(self, other: "Relation") -> bool:
        return bool(np.all(~self.matrix | other.matrix))

    @property
    def dagger(self) -> "Relation":
        return Relation(self.cod, self.dom, self.matrix.T)

    def __repr__(self):
        return f"Relation({self.dom}->{self.cod}, {sorted(self.pairs())})"


def identity(n: int) -> Relation:
    return Relation(n, n, np.eye(n, dtype=bool))


def compose(s: Relation, r: Relation) -> Relation:
    """``s . r``: first ``r``, then ``s``."""
    if r.cod != s.dom:
        raise ShapeMismatch(f"cannot compose {r.dom}->{r.cod} with {s.dom}->{s.cod}")
    prod = s.matrix.astype(np.int64) @ r.matrix.astype(np.int64)
    return Relation(r.dom, s.cod, prod > 0)


def seq(*rs: Relation) -> Relation:
    """Compose in diagram order: ``seq(r, s, t) = t . s . r``."""
    out = rs[0]
    for r in rs[1:]:
        out = compose(r, out)
    return out


def tensor(r: Relation, s: Relation) -> Relation:
    return Relation(r.dom * s.dom, r.cod * s.cod, np.kron(r.matrix, s.matrix))


def oplus(r: Relation, s: Relation) -> Relation:
    m = np.zeros((r.cod + s.cod, r.dom + s.dom), dtype=bool)
    m[:r.cod, :r.dom] = r.matrix
    m[r.cod:, r.dom:] = s.matrix
    return Relation(r.dom + s.dom, r.cod + s.cod, m)


def first_difference(r: Relation, s: Relation) -> tuple[int, int] | None:
    """Some ``(a, b)`` on which ``r`` and ``s`` disagree, or None."""
    if (r.dom, r.cod) != (s.dom, s.cod):
        raise ShapeMismatch(f"{r.dom}->{r.cod} vs {s.dom}->{s.cod}")
    diff = np.argwhere(r.matrix != s.matrix)
    if not len(diff):
        return None
    b, a = diff[0]
    return int(a), int(b)


def random_relation(rng: np.random.Generator, dom: int, cod: int, density: float = 0.3) -> Relation:
    return Relation(dom, cod, rng.random((cod, dom)) < density)
