"""Reference evaluator: run combinators forwards and backwards on values."""

from __future__ import annotations

from dataclasses import dataclass

from . import syntax as S
from .syntax import (
    UNIT, Combinator, Fold, InL, InR, Mu, Pair, Prod, Sum, Value, ValueType,
)

DEFAULT_TRACE_FUEL = 10_000
DEFAULT_TOTAL_FUEL = 10_000_000


class InternalTypeError(Exception):
    """A value reached a combinator whose domain it does not inhabit."""


class NotPolynomial(ValueError):
    pass


class EvalResult:
    __slots__ = ()

    @property
    def defined(self) -> bool:
        return isinstance(self, Defined)


@dataclass(frozen=True)
class Defined(EvalResult):
    value: object


@dataclass(frozen=True)
class _Undefined(EvalResult):
    def __repr__(self):
        return "Undefined"


Undefined = _Undefined()


@dataclass(frozen=True)
class OutOfFuel(EvalResult):
    steps_used: int


@dataclass(frozen=True)
class Fuel:
    max_trace_steps: int = DEFAULT_TRACE_FUEL
    max_total_steps: int = DEFAULT_TOTAL_FUEL

    def __post_init__(self):
        if self.max_trace_steps < 1 or self.max_total_steps < 1:
            raise ValueError("fuel limits must be positive")


class _Exhausted(Exception):
    def __init__(self, steps):
        self.steps = steps


def _mismatch(c, v) -> InternalTypeError:
    return InternalTypeError(f"{c} cannot act on {v}")


def eval_basic(c: Combinator, v: Value) -> EvalResult:
    """Value action of a basic combinator (a total isomorphism)."""
    return Defined(_basic(c, v))


def _basic(c: Combinator, v: Value) -> Value:
    k = type(c)
    if k is S.Id:
        return v
    if k is S.SwapPlus:
        if isinstance(v, InL):
            return InR(v.value)
        if isinstance(v, InR):
            return InL(v.value)
    elif k is S.AssocLPlus:  # a+(b+c) -> (a+b)+c
        if isinstance(v, InL):
            return InL(InL(v.value))
        if isinstance(v, InR):
            w = v.value
            if isinstance(w, InL):
                return InL(InR(w.value))
            if isinstance(w, InR):
                return InR(w.value)
    elif k is S.AssocRPlus:
        if isinstance(v, InL):
            w = v.value
            if isinstance(w, InL):
                return InL(w.value)
            if isinstance(w, InR):
                return InR(InL(w.value))
        if isinstance(v, InR):
            return InR(InR(v.value))
    elif k is S.UnitLPlus:  # 0+a -> a
        if isinstance(v, InR):
            return v.value
    elif k is S.UnitRPlus:
        return InR(v)
    elif k is S.AssocLTimes:  # a*(b*c) -> (a*b)*c
        if isinstance(v, Pair) and isinstance(v.second, Pair):
            return Pair(Pair(v.first, v.second.first), v.second.second)
    elif k is S.AssocRTimes:
        if isinstance(v, Pair) and isinstance(v.first, Pair):
            return Pair(v.first.first, Pair(v.first.second, v.second))
    elif k is S.UnitLTimes:  # 1*a -> a
        if isinstance(v, Pair) and isinstance(v.first, S.Unit):
            return v.second
    elif k is S.UnitRTimes:
        return Pair(UNIT, v)
    elif k is S.SwapTimes:
        if isinstance(v, Pair):
            return Pair(v.second, v.first)
    elif k is S.Distrib:  # (a+b)*c -> a*c + b*c
        if isinstance(v, Pair):
            if isinstance(v.first, InL):
                return InL(Pair(v.first.value, v.second))
            if isinstance(v.first, InR):
                return InR(Pair(v.first.value, v.second))
    elif k is S.Factor:
        if isinstance(v, InL) and isinstance(v.value, Pair):
            return Pair(InL(v.value.first), v.value.second)
        if isinstance(v, InR) and isinstance(v.value, Pair):
            return Pair(InR(v.value.first), v.value.second)
    elif k in (S.Absorb, S.Unabsorb):
        pass  # 0*a and 0 are uninhabited: every call is a type error
    elif k is S.FoldC:
        return Fold(v)
    elif k is S.UnfoldC:
        if isinstance(v, Fold):
            return v.value
    else:
        raise TypeError(f"not a basic combinator: {c!r}")
    raise _mismatch(c, v)


class _Machine:
    def __init__(self, fuel: Fuel):
        self.fuel = fuel
        self.steps = 0

    def tick(self):
        self.steps += 1
        if self.steps > self.fuel.max_total_steps:
            raise _Exhausted(self.steps)

    def run(self, c: Combinator, v: Value) -> Value:
        self.tick()
        if isinstance(c, S.Comp):
            return self.run(c.second, self.run(c.first, v))
        if isinstance(c, S.SumC):
            if isinstance(v, InL):
                return InL(self.run(c.left, v.value))
            if isinstance(v, InR):
                return InR(self.run(c.right, v.value))
            raise _mismatch(c, v)
        if isinstance(c, S.ProdC):
            if isinstance(v, Pair):
                return Pair(self.run(c.left, v.first), self.run(c.right, v.second))
            raise _mismatch(c, v)
        if isinstance(c, S.Trace):
            return self.trace(c, v)
        if isinstance(c, (S.Inv, S.Ref)):
            raise ValueError(f"{type(c).__name__} must be eliminated before evaluation")
        return _basic(c, v)

    def trace(self, c: S.Trace, v: Value) -> Value:
        state = InL(v)
        for _ in range(self.fuel.max_trace_steps):
            out = self.run(c.body, state)
            if isinstance(out, InL):
                return out.value
            if not isinstance(out, InR):
                raise _mismatch(c.body, out)
            state = out
        raise _Exhausted(self.steps)


def evaluate(c: Combinator, v: Value, fuel: Fuel | None = None) -> tuple[EvalResult, int]:
    """Evaluate an Inv-free combinator; also report the number of steps taken."""
    m = _Machine(fuel or Fuel())
    try:
        return Defined(m.run(c, v)), m.steps
    except _Exhausted as exc:
        return OutOfFuel(exc.steps), m.steps


def eval_combinator(c: Combinator, v: Value, fuel: Fuel | None = None) -> EvalResult:
    return evaluate(c, v, fuel)[0]


def run(c: Combinator, v: Value, fuel: Fuel | None = None) -> EvalResult:
    return eval_combinator(S.eliminate_inv(c), v, fuel)


def run_backward(c: Combinator, v: Value, fuel: Fuel | None = None) -> EvalResult:
    return eval_combinator(S.structural_dagger(c), v, fuel)


# ---------------------------------------------------------------------------
# Enumeration of inhabitants
# ---------------------------------------------------------------------------


def enumerate_values(a: ValueType) -> list[Value]:
    """All values of a closed mu-free type, in index order.

    Sums list the left block first; products are row-major.  This order is
    shared with :mod:`pio.pinj`.
    """
    if isinstance(a, S.Zero):
        return []
    if isinstance(a, S.One):
        return [UNIT]
    if isinstance(a, Sum):
        return [InL(x) for x in enumerate_values(a.left)] + [InR(y) for y in enumerate_values(a.right)]
    if isinstance(a, Prod):
        rights = enumerate_values(a.right)
        return [Pair(x, y) for x in enumerate_values(a.left) for y in rights]
    raise ValueError(f"cannot enumerate {a}: type must be closed and mu-free")


def cardinality(a: ValueType) -> int:
    if isinstance(a, S.Zero):
        return 0
    if isinstance(a, S.One):
        return 1
    if isinstance(a, Sum):
        return cardinality(a.left) + cardinality(a.right)
    if isinstance(a, Prod):
        return cardinality(a.left) * cardinality(a.right)
    raise ValueError(f"infinite or open type {a}")


def _check_polynomial(t: Mu) -> None:
    if S.free_vars(t):
        raise NotPolynomial(f"{t} has free variables {sorted(S.free_vars(t))}")

    def walk(a: ValueType):
        if isinstance(a, Mu):
            if t.binder in S.free_vars(a):
                raise NotPolynomial(f"nested mu over {t.binder!r} in {t}")
            if S.has_mu(a.body):
                walk(a.body)
        elif isinstance(a, (Sum, Prod)):
            walk(a.left)
            walk(a.right)

    walk(t.body)


def _values_upto(a: ValueType, depth: int, cache: dict) -> list[Value]:
    """Values of ``a`` whose fold nesting is at most ``depth``."""
    key = (a, depth)
    if key in cache:
        return cache[key]
    if isinstance(a, Mu):
        out = [] if depth == 0 else [Fold(v) for v in _values_upto(S.unfold_mu(a), depth - 1, cache)]
    elif isinstance(a, S.Zero):
        out = []
    elif isinstance(a, S.One):
        out = [UNIT]
    elif isinstance(a, Sum):
        out = ([InL(x) for x in _values_upto(a.left, depth, cache)]
               + [InR(y) for y in _values_upto(a.right, depth, cache)])
    elif isinstance(a, Prod):
        rights = _values_upto(a.right, depth, cache)
        out = [Pair(x, y) for x in _values_upto(a.left, depth, cache) for y in rights]
    else:
        raise NotPolynomial(f"open type {a}")
    cache[key] = out
    return out


def unroll_mu_approximant(t: Mu, depth: int) -> list[Value]:
    """Stage ``depth`` of the chain 0 -> F0 -> FF0 -> ... for ``t = mu x. F x``.

    These are exactly the values of ``t`` with at most ``depth`` nested folds.
    """
    if not isinstance(t, Mu):
        raise NotPolynomial(f"{t} is not a mu type")
    if depth < 0:
        raise ValueError("depth must be non-negative")
    _check_polynomial(t)
    return _values_upto(t, depth, {})


def values_upto(a: ValueType, depth: int) -> list[Value]:
    """Inputs of an arbitrary closed type, mu components cut at ``depth`` folds."""
    return _values_upto(a, depth, {})
