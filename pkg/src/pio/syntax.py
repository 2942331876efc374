"""Abstract syntax for value types, values and combinators.

Every node is an immutable dataclass.  Types compare up to renaming of
``Mu`` binders; values and combinators compare structurally.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, fields


# ---------------------------------------------------------------------------
# Value types
# ---------------------------------------------------------------------------


class ValueType:
    """Base class for types.  Equality and hashing are alpha-invariant."""

    __slots__ = ()

    def _key(self, env: tuple[str, ...]):
        raise NotImplementedError

    @property
    def debruijn(self):
        # memoised per instance; nodes are frozen so this never goes stale
        try:
            return self.__dict__["_db"]
        except KeyError:
            key = self._key(())
            object.__setattr__(self, "_db", key)
            return key

    def __eq__(self, other):
        if not isinstance(other, ValueType):
            return NotImplemented
        return self.debruijn == other.debruijn

    def __hash__(self):
        return hash(self.debruijn)

    def __str__(self):
        from .parser import print_type

        return print_type(self)


@dataclass(frozen=True, eq=False)
class Zero(ValueType):
    def _key(self, env):
        return ("0",)


@dataclass(frozen=True, eq=False)
class One(ValueType):
    def _key(self, env):
        return ("1",)


@dataclass(frozen=True, eq=False)
class Sum(ValueType):
    left: ValueType
    right: ValueType

    def _key(self, env):
        return ("+", self.left._key(env), self.right._key(env))


@dataclass(frozen=True, eq=False)
class Prod(ValueType):
    left: ValueType
    right: ValueType

    def _key(self, env):
        return ("*", self.left._key(env), self.right._key(env))


@dataclass(frozen=True, eq=False)
class Var(ValueType):
    name: str

    def _key(self, env):
        for depth, bound in enumerate(reversed(env)):
            if bound == self.name:
                return ("bound", depth)
        return ("free", self.name)


@dataclass(frozen=True, eq=False)
class Mu(ValueType):
    binder: str
    body: ValueType

    def _key(self, env):
        return ("mu", self.body._key(env + (self.binder,)))


@dataclass(frozen=True, eq=False)
class Meta(ValueType):
    """Unification variable.  Only the type checker creates these."""

    ident: int

    def _key(self, env):
        return ("meta", self.ident)

    def __str__(self):
        return f"?{self.ident}"


ZERO = Zero()
ONE = One()


def free_vars(a: ValueType) -> frozenset[str]:
    if isinstance(a, Var):
        return frozenset([a.name])
    if isinstance(a, (Sum, Prod)):
        return free_vars(a.left) | free_vars(a.right)
    if isinstance(a, Mu):
        return free_vars(a.body) - {a.binder}
    return frozenset()


def metas(a: ValueType) -> frozenset[int]:
    if isinstance(a, Meta):
        return frozenset([a.ident])
    if isinstance(a, (Sum, Prod)):
        return metas(a.left) | metas(a.right)
    if isinstance(a, Mu):
        return metas(a.body)
    return frozenset()


def is_closed(a: ValueType) -> bool:
    return not free_vars(a)


def has_mu(a: ValueType) -> bool:
    if isinstance(a, Mu):
        return True
    if isinstance(a, (Sum, Prod)):
        return has_mu(a.left) or has_mu(a.right)
    return False


def _fresh(avoid: frozenset[str], base: str) -> str:
    for i in itertools.count(1):
        cand = f"{base}{i}"
        if cand not in avoid:
            return cand
    raise AssertionError("unreachable")


def substitute(a: ValueType, x: str, b: ValueType) -> ValueType:
    """Capture-avoiding ``a[b/x]``."""
    if isinstance(a, Var):
        return b if a.name == x else a
    if isinstance(a, Sum):
        return Sum(substitute(a.left, x, b), substitute(a.right, x, b))
    if isinstance(a, Prod):
        return Prod(substitute(a.left, x, b), substitute(a.right, x, b))
    if isinstance(a, Mu):
        if a.binder == x or x not in free_vars(a.body):
            return a
        fv_b = free_vars(b)
        if a.binder in fv_b:
            fresh = _fresh(fv_b | free_vars(a.body) | {x}, a.binder)
            body = substitute(a.body, a.binder, Var(fresh))
            return Mu(fresh, substitute(body, x, b))
        return Mu(a.binder, substitute(a.body, x, b))
    return a


def unfold_mu(t: Mu) -> ValueType:
    """The one-step unrolling ``a[mu x.a / x]``."""
    return substitute(t.body, t.binder, t)


# ---------------------------------------------------------------------------
# Values
# ---------------------------------------------------------------------------


class Value:
    __slots__ = ()

    def __str__(self):
        from .parser import print_value

        return print_value(self)


@dataclass(frozen=True)
class Unit(Value):
    pass


@dataclass(frozen=True)
class InL(Value):
    value: Value


@dataclass(frozen=True)
class InR(Value):
    value: Value


@dataclass(frozen=True)
class Pair(Value):
    first: Value
    second: Value


@dataclass(frozen=True)
class Fold(Value):
    value: Value


UNIT = Unit()


def fold_depth(v: Value) -> int:
    """Maximum number of nested ``Fold`` wrappers along any path."""
    if isinstance(v, Fold):
        return 1 + fold_depth(v.value)
    if isinstance(v, (InL, InR)):
        return fold_depth(v.value)
    if isinstance(v, Pair):
        return max(fold_depth(v.first), fold_depth(v.second))
    return 0


# ---------------------------------------------------------------------------
# Combinators
# ---------------------------------------------------------------------------


class Combinator:
    __slots__ = ()

    def __str__(self):
        from .parser import print_combinator

        return print_combinator(self)


def _basic(name: str, keyword: str):
    cls = dataclass(frozen=True)(type(name, (Combinator,), {"__slots__": ()}))
    cls.keyword = keyword
    return cls


Id = _basic("Id", "id")
AssocLPlus = _basic("AssocLPlus", "assocl+")
AssocRPlus = _basic("AssocRPlus", "assocr+")
UnitLPlus = _basic("UnitLPlus", "unitl+")
UnitRPlus = _basic("UnitRPlus", "unitr+")
SwapPlus = _basic("SwapPlus", "swap+")
AssocLTimes = _basic("AssocLTimes", "assocl*")
AssocRTimes = _basic("AssocRTimes", "assocr*")
UnitLTimes = _basic("UnitLTimes", "unitl*")
UnitRTimes = _basic("UnitRTimes", "unitr*")
SwapTimes = _basic("SwapTimes", "swap*")
Distrib = _basic("Distrib", "distrib")
Factor = _basic("Factor", "factor")
Absorb = _basic("Absorb", "absorb")
Unabsorb = _basic("Unabsorb", "unabsorb")

BASIC_CLASSES = (
    Id, AssocLPlus, AssocRPlus, UnitLPlus, UnitRPlus, SwapPlus,
    AssocLTimes, AssocRTimes, UnitLTimes, UnitRTimes, SwapTimes,
    Distrib, Factor, Absorb, Unabsorb,
)
KEYWORDS = {cls.keyword: cls() for cls in BASIC_CLASSES}


@dataclass(frozen=True)
class FoldC(Combinator):
    annotation: ValueType

    def __post_init__(self):
        if not isinstance(self.annotation, Mu):
            raise TypeError(f"fold annotation must be a mu type, got {self.annotation}")


@dataclass(frozen=True)
class UnfoldC(Combinator):
    annotation: ValueType

    def __post_init__(self):
        if not isinstance(self.annotation, Mu):
            raise TypeError(f"unfold annotation must be a mu type, got {self.annotation}")


@dataclass(frozen=True)
class Comp(Combinator):
    """Sequential composition in diagram order: ``first`` runs, then ``second``."""

    first: Combinator
    second: Combinator


@dataclass(frozen=True)
class SumC(Combinator):
    left: Combinator
    right: Combinator


@dataclass(frozen=True)
class ProdC(Combinator):
    left: Combinator
    right: Combinator


@dataclass(frozen=True)
class Trace(Combinator):
    body: Combinator


@dataclass(frozen=True)
class Inv(Combinator):
    body: Combinator


@dataclass(frozen=True)
class Ref(Combinator):
    """Reference to an earlier top-level declaration (surface syntax only)."""

    name: str


_PARTNER = {
    Id: Id, SwapPlus: SwapPlus, SwapTimes: SwapTimes,
    AssocLPlus: AssocRPlus, AssocRPlus: AssocLPlus,
    UnitLPlus: UnitRPlus, UnitRPlus: UnitLPlus,
    AssocLTimes: AssocRTimes, AssocRTimes: AssocLTimes,
    UnitLTimes: UnitRTimes, UnitRTimes: UnitLTimes,
    Distrib: Factor, Factor: Distrib,
    Absorb: Unabsorb, Unabsorb: Absorb,
}


def is_basic(c: Combinator) -> bool:
    return type(c) in _PARTNER or isinstance(c, (FoldC, UnfoldC))


def structural_dagger(c: Combinator) -> Combinator:
    """Canonical inverse of ``c``; the result contains no ``Inv`` nodes."""
    if type(c) in _PARTNER:
        return _PARTNER[type(c)]()
    if isinstance(c, FoldC):
        return UnfoldC(c.annotation)
    if isinstance(c, UnfoldC):
        return FoldC(c.annotation)
    if isinstance(c, Comp):
        return Comp(structural_dagger(c.second), structural_dagger(c.first))
    if isinstance(c, SumC):
        return SumC(structural_dagger(c.left), structural_dagger(c.right))
    if isinstance(c, ProdC):
        return ProdC(structural_dagger(c.left), structural_dagger(c.right))
    if isinstance(c, Trace):
        return Trace(structural_dagger(c.body))
    if isinstance(c, Inv):
        return eliminate_inv(c.body)
    if isinstance(c, Ref):
        raise ValueError(f"unresolved reference {c.name!r}; inline declarations first")
    raise TypeError(f"not a combinator: {c!r}")


def eliminate_inv(c: Combinator) -> Combinator:
    """Rewrite away every ``Inv`` node, leaving an equivalent Inv-free term."""
    if isinstance(c, Inv):
        return structural_dagger(c.body)
    if isinstance(c, Comp):
        return Comp(eliminate_inv(c.first), eliminate_inv(c.second))
    if isinstance(c, SumC):
        return SumC(eliminate_inv(c.left), eliminate_inv(c.right))
    if isinstance(c, ProdC):
        return ProdC(eliminate_inv(c.left), eliminate_inv(c.right))
    if isinstance(c, Trace):
        return Trace(eliminate_inv(c.body))
    return c


def children(c: Combinator) -> tuple[Combinator, ...]:
    return tuple(getattr(c, f.name) for f in fields(c) if isinstance(getattr(c, f.name), Combinator))


def subterms(c: Combinator):
    yield c
    for ch in children(c):
        yield from subterms(ch)


@dataclass(frozen=True)
class CombinatorType:
    domain: ValueType
    codomain: ValueType

    def __str__(self):
        return f"{self.domain} <-> {self.codomain}"

    def flip(self) -> "CombinatorType":
        return CombinatorType(self.codomain, self.domain)
