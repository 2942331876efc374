"""Monoids in FinRel, the monad ``- * B`` they induce, and its algebras."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ..pinj import ShapeMismatch
from .groupoid import FiniteGroupoid, GroupoidAction
from .relation import Relation, compose, first_difference, identity, seq, tensor


@dataclass(frozen=True)
class Verdict:
    """Outcome of a law check; ``witness`` explains the first failure."""

    ok: bool
    law: str
    witness: dict | None = None

    def __bool__(self):
        return self.ok

    def as_record(self) -> dict:
        return {"law": self.law, "ok": self.ok, "witness": self.witness}


def _verdict(law: str, lhs: Relation, rhs: Relation, decode=None) -> Verdict:
    d = first_difference(lhs, rhs)
    if d is None:
        return Verdict(True, law)
    a, b = d
    w = {"input": decode(a) if decode else a, "output": decode(b) if decode else b,
         "lhs": bool(lhs.matrix[b, a]), "rhs": bool(rhs.matrix[b, a])}
    return Verdict(False, law, w)


@dataclass(frozen=True)
class RelMonoid:
    name: str
    carrier: int
    mult: Relation  # B*B -> B
    unit: Relation  # 1 -> B

    def __post_init__(self):
        n = self.carrier
        if (self.mult.dom, self.mult.cod) != (n * n, n) or (self.unit.dom, self.unit.cod) != (1, n):
            raise ShapeMismatch(f"monoid {self.name}: bad multiplication or unit shape")

    def pair(self, k: int) -> tuple[int, int]:
        return divmod(k, self.carrier)

    def check_laws(self) -> list[Verdict]:
        n, i = self.carrier, identity(self.carrier)
        # (B*B)*B and B*(B*B) share one flat index, so the associator is the identity
        assoc = _verdict("associativity", compose(self.mult, tensor(self.mult, i)),
                         compose(self.mult, tensor(i, self.mult)),
                         lambda k: (k // (n * n), (k // n) % n, k % n))
        left = _verdict("left unit", compose(self.mult, tensor(self.unit, i)), i)
        right = _verdict("right unit", compose(self.mult, tensor(i, self.unit)), i)
        return [assoc, left, right]

    def is_monoid(self) -> bool:
        return all(self.check_laws())


def monoid_from_table(name: str, n: int, table, unit) -> RelMonoid:
    """``table[x][y]`` is the set of products of ``x`` and ``y``; ``unit`` a set of units."""
    pairs = [(x * n + y, z) for x in range(n) for y in range(n) for z in table[x][y]]
    return RelMonoid(name, n, Relation.from_pairs(n * n, n, pairs),
                     Relation.from_pairs(1, n, [(0, u) for u in unit]))


def groupoid_to_frobenius(g: FiniteGroupoid) -> RelMonoid:
    """Multiplication relates ``(f, h)`` to ``f . h`` when defined; the unit picks all identities."""
    g.validate()
    n = g.morphisms
    mult = Relation.from_pairs(n * n, n, [(f * n + h, fh) for (f, h), fh in g.comp.items()])
    unit = Relation.from_pairs(1, n, [(0, i) for i in g.ident])
    return RelMonoid(g.name, n, mult, unit)


def check_frobenius(m: RelMonoid) -> Verdict:
    """``(mu*1)(1*mu') = mu' mu = (1*mu)(mu'*1)`` as relations on ``B*B``."""
    i, mu = identity(m.carrier), m.mult
    middle = compose(mu.dagger, mu)
    left = compose(tensor(mu, i), tensor(i, mu.dagger))
    right = compose(tensor(i, mu), tensor(mu.dagger, i))
    v = _verdict("frobenius (left)", left, middle, m.pair)
    return v if not v.ok else _verdict("frobenius (right)", right, middle, m.pair)


# ---------------------------------------------------------------------------
# the monad T = - * B
# ---------------------------------------------------------------------------


def eta(m: RelMonoid, x: int) -> Relation:
    return tensor(identity(x), m.unit)


def mu(m: RelMonoid, x: int) -> Relation:
    return tensor(identity(x), m.mult)


def T(m: RelMonoid, r: Relation) -> Relation:
    return tensor(r, identity(m.carrier))


def kleisli_compose(m: RelMonoid, g: Relation, f: Relation) -> Relation:
    """``g . f`` for ``f: X -> Y*B`` and ``g: Y -> Z*B``."""
    b = m.carrier
    if f.cod % b or g.cod % b or f.cod // b != g.dom:
        raise ShapeMismatch("Kleisli maps do not compose")
    return seq(f, T(m, g), mu(m, g.cod // b))


def kleisli_dagger(f: Relation, m: RelMonoid) -> Relation:
    """``T(f') . mu' . eta`` for ``f: X -> Y*B``; the result is ``Y -> X*B``."""
    b = m.carrier
    if f.cod % b:
        raise ShapeMismatch(f"codomain {f.cod} is not a multiple of |B| = {b}")
    y = f.cod // b
    return seq(eta(m, y), mu(m, y).dagger, T(m, f.dagger))


# ---------------------------------------------------------------------------
# Eilenberg-Moore algebras
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RelAlgebra:
    name: str
    monoid: RelMonoid
    carrier: int
    action: Relation  # A*B -> A

    def __post_init__(self):
        if (self.action.dom, self.action.cod) != (self.carrier * self.monoid.carrier, self.carrier):
            raise ShapeMismatch(f"algebra {self.name}: action has the wrong shape")

    def check_laws(self) -> list[Verdict]:
        m, a, b = self.monoid, self.action, self.monoid.carrier
        unit = _verdict("algebra unit", compose(a, eta(m, self.carrier)), identity(self.carrier))
        assoc = _verdict("algebra associativity", compose(a, T(m, a)), compose(a, mu(m, self.carrier)),
                         lambda k: (k // (b * b), (k // b) % b, k % b))
        return [unit, assoc]

    def is_em(self) -> bool:
        return all(self.check_laws())


def check_fem(alg: RelAlgebra) -> Verdict:
    """Is ``T(a) . mu'`` self-adjoint on ``A*B``?"""
    m = alg.monoid
    r = compose(T(m, alg.action), mu(m, alg.carrier).dagger)
    return _verdict("fem", r, r.dagger, lambda k: divmod(k, m.carrier))


def free_algebra(m: RelMonoid, x: int) -> RelAlgebra:
    return RelAlgebra(f"free({m.name}, {x})", m, x * m.carrier, mu(m, x))


def action_algebra(act: GroupoidAction) -> RelAlgebra:
    """Right action ``x . g = F(g^-1) x`` of the groupoid monoid on the disjoint union."""
    g = act.groupoid
    m = groupoid_to_frobenius(g)
    pairs = []
    for x in range(act.size):
        for f in range(g.morphisms):
            if g.tgt[f] == act.fibre[x]:
                pairs.append((x * g.morphisms + f, act.act[g.inverse[f]][x]))
    return RelAlgebra(f"action({g.name}, {act.size})", m, act.size,
                      Relation.from_pairs(act.size * g.morphisms, act.size, pairs))


# ---------------------------------------------------------------------------
# exhaustive search
# ---------------------------------------------------------------------------


def _relations(dom: int, cod: int):
    cells = dom * cod
    for bits in range(1 << cells):
        m = np.array([(bits >> k) & 1 for k in range(cells)], dtype=bool).reshape(cod, dom)
        yield bits, Relation(dom, cod, m)


def all_rel_monoids(max_carrier: int = 2):
    """Every relational monoid on ``1..max_carrier`` elements, in a fixed order."""
    for n in range(1, max_carrier + 1):
        for mbits, mult in _relations(n * n, n):
            for ubits, unit in _relations(1, n):
                m = RelMonoid(f"rel{n}:{mbits}:{ubits}", n, mult, unit)
                if m.is_monoid():
                    yield m


def search_em_not_fem(max_monoid: int = 2, max_carrier: int = 2) -> RelAlgebra | None:
    """First EM algebra, in enumeration order, that fails the FEM law."""
    for m in all_rel_monoids(max_monoid):
        for a in range(1, max_carrier + 1):
            for bits, act in _relations(a * m.carrier, a):
                alg = RelAlgebra(f"{m.name}/alg{a}:{bits}", m, a, act)
                if alg.is_em() and not check_fem(alg):
                    return alg
    return None


# the multiplication x*y = x AND y on {0, 1}, with unit 1
AND_MONOID = monoid_from_table("and", 2, [[{0}, {0}], [{0}, {1}]], {1})
