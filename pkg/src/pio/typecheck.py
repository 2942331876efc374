"""Type checking for values and combinators.

Combinator inference is first-order unification over value types extended
with metavariables (:class:`~pio.syntax.Meta`).  Free type variables in
ascriptions are rigid constants; ``mu`` types unify structurally up to
renaming of binders and are never unrolled by the unifier.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import syntax as S
from .syntax import (
    ONE, ZERO, Combinator, CombinatorType, Meta, Mu, Prod, Sum, Value, ValueType, Var,
)


class TypeCheckError(Exception):
    pass


class IllFormedType(TypeCheckError):
    pass


class UnificationFailure(TypeCheckError):
    def __init__(self, left: ValueType, right: ValueType, site: Combinator | None = None):
        self.left, self.right, self.site = left, right, site
        where = f" at {site}" if site is not None else ""
        super().__init__(f"cannot unify {left} with {right}{where}")


class OccursCheck(TypeCheckError):
    def __init__(self, meta: Meta, ty: ValueType):
        self.meta, self.ty = meta, ty
        super().__init__(f"occurs check: {meta} occurs in {ty}")


class AmbiguousType(TypeCheckError):
    def __init__(self, metas, site: Combinator | None = None):
        self.metas = sorted(metas)
        self.site = site
        names = ", ".join(f"?{m}" for m in self.metas)
        where = f" in {site}" if site is not None else ""
        super().__init__(f"ambiguous type: unresolved {names}{where}")


class ProgramTypeError(TypeCheckError):
    """Aggregate of per-declaration failures, in declaration order."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(f"{d.name}: {e}" for d, e in self.errors))


# ---------------------------------------------------------------------------
# Values
# ---------------------------------------------------------------------------


def check_value(v: Value, a: ValueType) -> bool:
    if S.free_vars(a) or S.metas(a):
        raise IllFormedType(f"type {a} is not closed")
    return _check_value(v, a)


def _check_value(v: Value, a: ValueType) -> bool:
    # iterative on the spine so long fold chains do not hit the recursion limit
    while True:
        if isinstance(a, Mu):
            if not isinstance(v, S.Fold):
                return False
            v, a = v.value, S.unfold_mu(a)
            continue
        if isinstance(v, S.Unit):
            return isinstance(a, S.One)
        if isinstance(v, S.InL):
            if not isinstance(a, Sum):
                return False
            v, a = v.value, a.left
            continue
        if isinstance(v, S.InR):
            if not isinstance(a, Sum):
                return False
            v, a = v.value, a.right
            continue
        if isinstance(v, S.Pair):
            if not isinstance(a, Prod):
                return False
            return _check_value(v.first, a.left) and _check_value(v.second, a.right)
        return False


# ---------------------------------------------------------------------------
# Unification
# ---------------------------------------------------------------------------


class Unifier:
    def __init__(self):
        self.subst: dict[int, ValueType] = {}
        self._counter = itertools.count()

    def fresh(self) -> Meta:
        return Meta(next(self._counter))

    def resolve(self, t: ValueType) -> ValueType:
        if isinstance(t, Meta):
            bound = self.subst.get(t.ident)
            if bound is None:
                return t
            r = self.resolve(bound)
            self.subst[t.ident] = r
            return r
        if isinstance(t, Sum):
            return Sum(self.resolve(t.left), self.resolve(t.right))
        if isinstance(t, Prod):
            return Prod(self.resolve(t.left), self.resolve(t.right))
        if isinstance(t, Mu):
            return Mu(t.binder, self.resolve(t.body))
        return t

    def _walk(self, t: ValueType) -> ValueType:
        while isinstance(t, Meta) and t.ident in self.subst:
            t = self.subst[t.ident]
        return t

    def unify(self, a: ValueType, b: ValueType, site: Combinator | None = None) -> None:
        stack = [(a, b)]
        while stack:
            x, y = stack.pop()
            x, y = self._walk(x), self._walk(y)
            if isinstance(x, Meta) and isinstance(y, Meta) and x.ident == y.ident:
                continue
            if isinstance(x, Meta):
                self._bind(x, y)
                continue
            if isinstance(y, Meta):
                self._bind(y, x)
                continue
            if isinstance(x, (Sum, Prod)) and type(x) is type(y):
                stack.append((x.right, y.right))
                stack.append((x.left, y.left))
                continue
            if isinstance(x, Mu) and isinstance(y, Mu):
                if not S.metas(x) and not S.metas(y):
                    if x != y:
                        raise UnificationFailure(self.resolve(a), self.resolve(b), site)
                    continue
                # rename both binders apart to a name free in neither
                avoid = S.free_vars(x.body) | S.free_vars(y.body)
                name = S._fresh(avoid, "%b")
                stack.append((S.substitute(x.body, x.binder, Var(name)),
                              S.substitute(y.body, y.binder, Var(name))))
                continue
            if isinstance(x, Var) and isinstance(y, Var) and x.name == y.name:
                continue
            if isinstance(x, (S.Zero, S.One)) and type(x) is type(y):
                continue
            raise UnificationFailure(self.resolve(a), self.resolve(b), site)

    def _bind(self, m: Meta, t: ValueType) -> None:
        t = self.resolve(t)
        if m.ident in S.metas(t):
            raise OccursCheck(m, t)
        self.subst[m.ident] = t


# ---------------------------------------------------------------------------
# Combinators
# ---------------------------------------------------------------------------


def basic_schema(c: Combinator, u: Unifier) -> tuple[ValueType, ValueType]:
    """Fresh instance of the type schema of a basic combinator."""
    if isinstance(c, S.FoldC):
        return S.unfold_mu(c.annotation), c.annotation
    if isinstance(c, S.UnfoldC):
        return c.annotation, S.unfold_mu(c.annotation)
    a, b, g = u.fresh(), u.fresh(), u.fresh()
    kind = type(c)
    if kind is S.Id:
        return a, a
    if kind in (S.AssocLPlus, S.AssocRPlus):
        pair = Sum(a, Sum(b, g)), Sum(Sum(a, b), g)
    elif kind in (S.UnitLPlus, S.UnitRPlus):
        pair = Sum(ZERO, a), a
    elif kind is S.SwapPlus:
        return Sum(a, b), Sum(b, a)
    elif kind in (S.AssocLTimes, S.AssocRTimes):
        pair = Prod(a, Prod(b, g)), Prod(Prod(a, b), g)
    elif kind in (S.UnitLTimes, S.UnitRTimes):
        pair = Prod(ONE, a), a
    elif kind is S.SwapTimes:
        return Prod(a, b), Prod(b, a)
    elif kind in (S.Distrib, S.Factor):
        pair = Prod(Sum(a, b), g), Sum(Prod(a, g), Prod(b, g))
    elif kind in (S.Absorb, S.Unabsorb):
        pair = Prod(ZERO, a), ZERO
    else:
        raise TypeError(f"not a basic combinator: {c!r}")
    if kind in (S.AssocRPlus, S.UnitRPlus, S.AssocRTimes, S.UnitRTimes, S.Factor, S.Unabsorb):
        return pair[1], pair[0]
    return pair


@dataclass
class TypedTerm:
    """A combinator with the resolved type of every node.

    ``loop`` is the feedback type of a ``Trace`` node.  A ``Ref`` node has
    the referenced declaration's typed body as its only child.
    """

    term: Combinator
    type: CombinatorType
    children: tuple["TypedTerm", ...] = ()
    loop: ValueType | None = None


@dataclass
class _Node:
    term: Combinator
    dom: ValueType
    cod: ValueType
    children: list = field(default_factory=list)
    loop: ValueType | None = None


class _Inference:
    def __init__(self, env: dict[str, TypedTerm] | None):
        self.u = Unifier()
        self.env = env or {}

    def infer(self, c: Combinator) -> _Node:
        u = self.u
        if S.is_basic(c):
            dom, cod = basic_schema(c, u)
            return _Node(c, dom, cod)
        if isinstance(c, S.Comp):
            f, g = self.infer(c.first), self.infer(c.second)
            u.unify(f.cod, g.dom, c)
            return _Node(c, f.dom, g.cod, [f, g])
        if isinstance(c, (S.SumC, S.ProdC)):
            f, g = self.infer(c.left), self.infer(c.right)
            op = Sum if isinstance(c, S.SumC) else Prod
            return _Node(c, op(f.dom, g.dom), op(f.cod, g.cod), [f, g])
        if isinstance(c, S.Trace):
            f = self.infer(c.body)
            a, b, loop = u.fresh(), u.fresh(), u.fresh()
            u.unify(f.dom, Sum(a, loop), c)
            u.unify(f.cod, Sum(b, loop), c)
            return _Node(c, a, b, [f], loop)
        if isinstance(c, S.Inv):
            f = self.infer(c.body)
            return _Node(c, f.cod, f.dom, [f])
        if isinstance(c, S.Ref):
            if c.name not in self.env:
                raise TypeCheckError(f"unknown declaration {c.name!r}")
            target = self.env[c.name]
            node = _Node(c, target.type.domain, target.type.codomain)
            node.children = [target]
            return node
        raise TypeError(f"not a combinator: {c!r}")

    def finish(self, node) -> TypedTerm:
        if isinstance(node, TypedTerm):
            return node
        dom, cod = self.u.resolve(node.dom), self.u.resolve(node.cod)
        loop = self.u.resolve(node.loop) if node.loop is not None else None
        left = S.metas(dom) | S.metas(cod) | (S.metas(loop) if loop is not None else frozenset())
        if left:
            raise AmbiguousType(left, node.term)
        kids = tuple(self.finish(ch) for ch in node.children)
        return TypedTerm(node.term, CombinatorType(dom, cod), kids, loop)


def annotate(c: Combinator, ascription: CombinatorType | None = None,
             env: dict[str, TypedTerm] | None = None) -> TypedTerm:
    """Infer and resolve the type of every node of ``c``."""
    inf = _Inference(env)
    root = inf.infer(c)
    if ascription is not None:
        inf.u.unify(root.dom, ascription.domain, c)
        inf.u.unify(root.cod, ascription.codomain, c)
    return inf.finish(root)


def infer_combinator(c: Combinator, ascription: CombinatorType | None = None,
                     env: dict[str, TypedTerm] | None = None) -> CombinatorType:
    return annotate(c, ascription, env).type


def check_program(program) -> dict[str, CombinatorType]:
    """Check every declaration of a :class:`~pio.parser.SourceProgram`.

    Raises :class:`ProgramTypeError` listing every failing declaration.
    Declarations referring to a failed one are not reported separately.
    """
    return {name: t.type for name, t in annotate_program(program).items()}


def annotate_program(program) -> dict[str, TypedTerm]:
    env: dict[str, TypedTerm] = {}
    errors = []
    failed: set[str] = set()
    for decl in program.declarations:
        if any(r in failed for r in _refs(decl.body)):
            failed.add(decl.name)
            continue
        try:
            env[decl.name] = annotate(decl.body, decl.ascription, env)
        except TypeCheckError as exc:
            errors.append((decl, exc))
            failed.add(decl.name)
    if errors:
        raise ProgramTypeError(errors)
    return env


def _refs(c: Combinator):
    for sub in S.subterms(c):
        if isinstance(sub, S.Ref):
            yield sub.name
