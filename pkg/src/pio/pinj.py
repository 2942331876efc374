"""Finite partial functions and partial injections.

Elements of a :class:`FinSet` are the indices ``0 .. size-1``.  Direct sums
place the left block first and tensor products pair ``(i, j)`` as
``i * |B| + j``.  The same order is used by
:func:`pio.interp.enumerate_values`, which is what makes this module usable
as a denotational oracle for the evaluator.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import syntax as S
from .syntax import Combinator, Mu, Prod, Sum, Value, ValueType


class ShapeMismatch(ValueError):
    pass


class HasMu(ValueError):
    pass


@dataclass(frozen=True)
class FinSet:
    size: int
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.size < 0:
            raise ValueError("size must be non-negative")
        if self.labels is not None:
            if len(self.labels) != self.size or len(set(self.labels)) != self.size:
                raise ValueError("labels must be distinct, one per element")

    def __len__(self):
        return self.size

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else str(i)


def _fs(x) -> FinSet:
    return x if isinstance(x, FinSet) else FinSet(int(x))


@dataclass(frozen=True)
class PartialFunction:
    """A partial map ``dom -> cod``; ``table[i]`` is the image of ``i`` or None."""

    dom: FinSet
    cod: FinSet
    table: tuple[int | None, ...]

    def __post_init__(self):
        object.__setattr__(self, "dom", _fs(self.dom))
        object.__setattr__(self, "cod", _fs(self.cod))
        object.__setattr__(self, "table", tuple(self.table))
        if len(self.table) != self.dom.size:
            raise ShapeMismatch(f"table has {len(self.table)} entries for a domain of size {self.dom.size}")
        for y in self.table:
            if y is not None and not 0 <= y < self.cod.size:
                raise ShapeMismatch(f"image {y} outside codomain of size {self.cod.size}")

    @classmethod
    def from_dict(cls, dom, cod, mapping: dict[int, int]):
        dom = _fs(dom)
        return cls(dom, cod, tuple(mapping.get(i) for i in range(dom.size)))

    def __call__(self, i: int) -> int | None:
        return self.table[i]

    @property
    def graph(self) -> frozenset[tuple[int, int]]:
        return frozenset((i, y) for i, y in enumerate(self.table) if y is not None)

    @property
    def domain_of_definition(self) -> frozenset[int]:
        return frozenset(i for i, y in enumerate(self.table) if y is not None)

    def _make(self, dom, cod, table):
        return type(self)(dom, cod, table)

    def __str__(self):
        body = ", ".join(f"{self.dom.label(i)}->{self.cod.label(y)}" for i, y in sorted(self.graph))
        return f"{type(self).__name__}({self.dom.size}->{self.cod.size}: {{{body}}})"


@dataclass(frozen=True)
class PartialInjection(PartialFunction):
    def __post_init__(self):
        super().__post_init__()
        images = [y for y in self.table if y is not None]
        if len(images) != len(set(images)):
            raise ValueError(f"not injective: {self.table}")


def _kind(*fs):
    return PartialInjection if all(isinstance(f, PartialInjection) for f in fs) else PartialFunction


def identity(a) -> PartialInjection:
    a = _fs(a)
    return PartialInjection(a, a, tuple(range(a.size)))


def empty(a, b) -> PartialInjection:
    a = _fs(a)
    return PartialInjection(a, b, (None,) * a.size)


def compose(g: PartialFunction, f: PartialFunction) -> PartialFunction:
    """``g . f`` (apply ``f`` first)."""
    if f.cod.size != g.dom.size:
        raise ShapeMismatch(f"cannot compose {f.dom.size}->{f.cod.size} with {g.dom.size}->{g.cod.size}")
    table = tuple(None if y is None else g.table[y] for y in f.table)
    return _kind(f, g)(f.dom, g.cod, table)


def dagger(f: PartialInjection) -> PartialInjection:
    if not isinstance(f, PartialInjection):
        raise TypeError("dagger is only defined for partial injections")
    inv = [None] * f.cod.size
    for i, y in enumerate(f.table):
        if y is not None:
            inv[y] = i
    return PartialInjection(f.cod, f.dom, tuple(inv))


def oplus(f: PartialFunction, g: PartialFunction) -> PartialFunction:
    off = f.cod.size
    table = f.table + tuple(None if y is None else y + off for y in g.table)
    return _kind(f, g)(f.dom.size + g.dom.size, f.cod.size + g.cod.size, table)


def otimes(f: PartialFunction, g: PartialFunction) -> PartialFunction:
    nb = g.cod.size
    table = tuple(
        None if (x is None or y is None) else x * nb + y
        for x in f.table for y in g.table
    )
    return _kind(f, g)(f.dom.size * g.dom.size, f.cod.size * nb, table)


def equivalent(f: PartialFunction, g: PartialFunction) -> bool:
    if f.dom.size != g.dom.size or f.cod.size != g.cod.size:
        raise ShapeMismatch(f"{f.dom.size}->{f.cod.size} vs {g.dom.size}->{g.cod.size}")
    return f.table == g.table


def swap_sum(a, b) -> PartialInjection:
    """Symmetry ``A + B -> B + A``."""
    na, nb = _fs(a).size, _fs(b).size
    table = tuple(nb + i for i in range(na)) + tuple(range(nb))
    return PartialInjection(na + nb, na + nb, table)


def swap_prod(a, b) -> PartialInjection:
    na, nb = _fs(a).size, _fs(b).size
    return PartialInjection(na * nb, na * nb, tuple(j * na + i for i in range(na) for j in range(nb)))


def trace(f: PartialFunction, split_a: int, split_b: int) -> PartialFunction:
    """Sum-like trace of ``f: A + U -> B + U`` with ``|A| = split_a``, ``|B| = split_b``.

    Follows the orbit of each ``a`` through the feedback block.  A token
    still inside ``U`` after ``|U| + 1`` steps has revisited a state and
    never exits, so ``a`` is outside the domain of the result.
    """
    nu = f.dom.size - split_a
    if nu < 0 or f.cod.size - split_b != nu:
        raise ShapeMismatch(
            f"cannot trace {f.dom.size}->{f.cod.size} with |A|={split_a}, |B|={split_b}")
    table = []
    for a in range(split_a):
        y = f.table[a]
        for _ in range(nu + 1):
            if y is None or y < split_b:
                break
            y = f.table[split_a + (y - split_b)]
        else:
            y = None
        table.append(y if y is not None and y < split_b else None)
    return _kind(f)(split_a, split_b, tuple(table))


def is_partial_isometry(f: PartialInjection) -> bool:
    return equivalent(compose(f, compose(dagger(f), f)), f)


def restriction(f: PartialFunction) -> PartialInjection:
    """The partial identity on the domain of definition of ``f``."""
    return PartialInjection(f.dom, f.dom, tuple(i if y is not None else None for i, y in enumerate(f.table)))


# ---------------------------------------------------------------------------
# random generation
# ---------------------------------------------------------------------------


def random_pinj(rng: random.Random, dom: int, cod: int, density: float | None = None) -> PartialInjection:
    if density is None:
        density = rng.choice([1.0, 1.0, 0.8, 0.5, 0.2])
    targets = rng.sample(range(cod), min(dom, cod))
    targets += [None] * (dom - len(targets))
    rng.shuffle(targets)
    table = tuple(t if t is not None and rng.random() < density else None for t in targets)
    return PartialInjection(dom, cod, table)


def random_pfn(rng: random.Random, dom: int, cod: int, density: float | None = None) -> PartialFunction:
    if density is None:
        density = rng.choice([1.0, 0.8, 0.5])
    if cod == 0:
        return PartialFunction(dom, cod, (None,) * dom)
    return PartialFunction(dom, cod, tuple(rng.randrange(cod) if rng.random() < density else None
                                            for _ in range(dom)))


# ---------------------------------------------------------------------------
# trace axioms
# ---------------------------------------------------------------------------


@dataclass
class AxiomResult:
    name: str
    trials: int = 0
    passed: int = 0
    counterexample: dict | None = None

    @property
    def ok(self) -> bool:
        return self.counterexample is None and self.trials > 0

    def as_record(self) -> dict:
        return {"axiom": self.name, "trials": self.trials, "passed": self.passed,
                "ok": self.ok, "counterexample": self.counterexample}


@dataclass
class AxiomReport:
    results: dict[str, AxiomResult] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results.values())

    def records(self) -> list[dict]:
        return [self.results[k].as_record() for k in sorted(self.results)]

    def lines(self) -> list[str]:
        out = []
        for k in sorted(self.results):
            r = self.results[k]
            status = "PASS" if r.ok else "FAIL"
            line = f"{status} {k}: {r.passed}/{r.trials}"
            if r.counterexample:
                line += f" counterexample {r.counterexample}"
            out.append(line)
        return out


def _describe(**maps) -> dict:
    return {k: {"dom": m.dom.size, "cod": m.cod.size, "graph": sorted(m.graph)} for k, m in maps.items()}


def _axiom_instances(rng: random.Random, gen, max_size: int):
    """Yield ``(axiom, lhs, rhs, witnesses)`` for one random instance of each axiom."""
    n = lambda hi=max_size: rng.randint(0, hi)  # noqa: E731
    # keep every composite set (at most three blocks) within max_size
    third = max(1, max_size // 3)

    # naturality in A and B
    a, b, u, a2, b2 = n(third), n(third), n(third), n(third), n(third)
    g, f, h = gen(rng, a + u, b + u), gen(rng, a2, a), gen(rng, b, b2)
    iu = identity(u)
    lhs = compose(h, compose(trace(g, a, b), f))
    rhs = trace(compose(oplus(h, iu), compose(g, oplus(f, iu))), a2, b2)
    yield "naturality", lhs, rhs, _describe(g=g, f=f, h=h)

    # dinaturality in U
    a, b, u, u2 = n(third), n(third), n(third), n(third)
    f, g = gen(rng, a + u, b + u2), gen(rng, u2, u)
    lhs = trace(compose(oplus(identity(b), g), f), a, b)
    rhs = trace(compose(f, oplus(identity(a), g)), a, b)
    yield "dinaturality", lhs, rhs, _describe(f=f, g=g)

    # strength (superposing): g + Tr(f) = Tr(g + f)
    a, b, u, c, d = n(third), n(third), n(third), n(third), n(third)
    f, g = gen(rng, a + u, b + u), gen(rng, c, d)
    lhs = oplus(g, trace(f, a, b))
    rhs = trace(oplus(g, f), c + a, d + b)
    yield "strength", lhs, rhs, _describe(f=f, g=g)

    # vanishing I: tracing out the unit object 0 changes nothing
    a, b = n(), n()
    f = gen(rng, a, b)
    yield "vanishing_i", f, trace(f, a, b), _describe(f=f)

    # vanishing II: tracing out U + V at once equals tracing V then U
    a, b, u, v = n(third), n(third), n(third), n(third)
    f = gen(rng, a + u + v, b + u + v)
    lhs = trace(f, a, b)
    rhs = trace(trace(f, a + u, b + u), a, b)
    yield "vanishing_ii", lhs, rhs, _describe(f=f)

    # yanking
    a = n(max_size // 2)
    yield "yanking", trace(swap_sum(a, a), a, a), identity(a), {"A": a}


def check_trace_axioms(trials: int = 500, seed: int = 0, max_size: int = 6,
                       sampler=random_pinj) -> AxiomReport:
    """Evaluate both sides of each trace axiom on random instances."""
    rng = random.Random(seed)
    report = AxiomReport({name: AxiomResult(name) for name in
                          ("naturality", "dinaturality", "strength",
                           "vanishing_i", "vanishing_ii", "yanking")})
    for _ in range(trials):
        for name, lhs, rhs, wit in _axiom_instances(rng, sampler, max_size):
            r = report.results[name]
            r.trials += 1
            if lhs.dom.size == rhs.dom.size and lhs.cod.size == rhs.cod.size and equivalent(lhs, rhs):
                r.passed += 1
            elif r.counterexample is None:
                r.counterexample = {"maps": wit, "lhs": sorted(lhs.graph), "rhs": sorted(rhs.graph)}
    return report


def check_inverse_category_laws(trials: int = 1000, seed: int = 0, max_size: int = 8) -> AxiomReport:
    """``f f† f = f`` and commuting positive maps ``f†f g†g = g†g f†f``."""
    rng = random.Random(seed)
    iso = AxiomResult("partial_isometry")
    pos = AxiomResult("positives_commute")
    for _ in range(trials):
        a, b, c = rng.randint(0, max_size), rng.randint(0, max_size), rng.randint(0, max_size)
        f, g = random_pinj(rng, a, b), random_pinj(rng, a, c)
        iso.trials += 1
        if is_partial_isometry(f):
            iso.passed += 1
        elif iso.counterexample is None:
            iso.counterexample = _describe(f=f)
        pf, pg = compose(dagger(f), f), compose(dagger(g), g)
        pos.trials += 1
        if equivalent(compose(pf, pg), compose(pg, pf)):
            pos.passed += 1
        elif pos.counterexample is None:
            pos.counterexample = _describe(f=f, g=g)
    return AxiomReport({"partial_isometry": iso, "positives_commute": pos})


# ---------------------------------------------------------------------------
# denotation of combinators
# ---------------------------------------------------------------------------


def type_size(a: ValueType, ground: dict[str, int] | None = None) -> int:
    ground = ground or {}
    if isinstance(a, S.Zero):
        return 0
    if isinstance(a, S.One):
        return 1
    if isinstance(a, Sum):
        return type_size(a.left, ground) + type_size(a.right, ground)
    if isinstance(a, Prod):
        return type_size(a.left, ground) * type_size(a.right, ground)
    if isinstance(a, S.Var):
        if a.name not in ground:
            raise ShapeMismatch(f"no finite set assigned to type variable {a.name!r}")
        return _fs(ground[a.name]).size
    if isinstance(a, Mu):
        raise HasMu(f"type {a} is recursive; the finite oracle cannot denote it")
    raise ShapeMismatch(f"cannot size type {a}")


def _basic_table(c: Combinator, dom: ValueType, cod: ValueType, sz) -> PartialInjection:
    k = type(c)
    n = sz(dom)
    if k in (S.Absorb, S.Unabsorb):
        return PartialInjection(n, sz(cod), (None,) * n)
    if k is S.SwapPlus:
        return swap_sum(sz(dom.left), sz(dom.right))
    if k is S.SwapTimes:
        return swap_prod(sz(dom.left), sz(dom.right))
    if k is S.Distrib:
        # ((a+b)*c): pair (s, k) with s < |a| lands in the left block at s*|c|+k,
        # otherwise at |a||c| + (s-|a|)|c| + k
        na, nc = sz(dom.left.left), sz(dom.right)
        table = []
        for s in range(sz(dom.left)):
            for kk in range(nc):
                table.append(s * nc + kk if s < na else na * nc + (s - na) * nc + kk)
        return PartialInjection(n, n, tuple(table))
    if k is S.Factor:
        return dagger(_basic_table(S.Distrib(), cod, dom, sz))
    if k in (S.Id, S.AssocLPlus, S.AssocRPlus, S.UnitLPlus, S.UnitRPlus,
             S.AssocLTimes, S.AssocRTimes, S.UnitLTimes, S.UnitRTimes):
        # associators and unitors do not move any index under the dense order
        return identity(n)
    raise HasMu(f"{c} has no finite denotation")


def denote(term, ground: dict[str, int] | None = None, ascription=None) -> PartialInjection:
    """Interpret a well-typed mu-free combinator as a partial injection.

    ``term`` is a :class:`~pio.typecheck.TypedTerm` or a bare combinator
    (typed here against ``ascription``).
    """
    from .typecheck import TypedTerm, annotate

    if not isinstance(term, TypedTerm):
        term = annotate(term, ascription)
    ground = ground or {}
    sz = lambda t: type_size(t, ground)  # noqa: E731
    return _denote(term, sz)


def mentions_mu(t) -> bool:
    """Does any node of the typed term (declarations included) have a recursive type?"""
    if any(S.has_mu(ty) for ty in (t.type.domain, t.type.codomain)):
        return True
    if t.loop is not None and S.has_mu(t.loop):
        return True
    return any(mentions_mu(ch) for ch in t.children)


def _denote(t, sz) -> PartialInjection:
    c = t.term
    for ty in (t.type.domain, t.type.codomain):
        if S.has_mu(ty):
            raise HasMu(f"{c} has recursive type {t.type}")
    if S.is_basic(c):
        return _basic_table(c, t.type.domain, t.type.codomain, sz)
    kids = [_denote(ch, sz) for ch in t.children]
    if isinstance(c, S.Comp):
        return compose(kids[1], kids[0])
    if isinstance(c, S.SumC):
        return oplus(kids[0], kids[1])
    if isinstance(c, S.ProdC):
        return otimes(kids[0], kids[1])
    if isinstance(c, S.Trace):
        return trace(kids[0], sz(t.type.domain), sz(t.type.codomain))
    if isinstance(c, S.Inv):
        return dagger(kids[0])
    if isinstance(c, S.Ref):
        return kids[0]
    raise TypeError(f"cannot denote {c!r}")


# ---------------------------------------------------------------------------
# value <-> index encoding
# ---------------------------------------------------------------------------


def index_of(v: Value, a: ValueType) -> int:
    if isinstance(a, S.One) and isinstance(v, S.Unit):
        return 0
    if isinstance(a, Sum):
        if isinstance(v, S.InL):
            return index_of(v.value, a.left)
        if isinstance(v, S.InR):
            return type_size(a.left) + index_of(v.value, a.right)
    if isinstance(a, Prod) and isinstance(v, S.Pair):
        return index_of(v.first, a.left) * type_size(a.right) + index_of(v.second, a.right)
    raise ShapeMismatch(f"value {v} does not inhabit {a}")


def value_at(i: int, a: ValueType) -> Value:
    if isinstance(a, S.One) and i == 0:
        return S.UNIT
    if isinstance(a, Sum):
        nl = type_size(a.left)
        return S.InL(value_at(i, a.left)) if i < nl else S.InR(value_at(i - nl, a.right))
    if isinstance(a, Prod):
        nr = type_size(a.right)
        if nr:
            return S.Pair(value_at(i // nr, a.left), value_at(i % nr, a.right))
    raise ShapeMismatch(f"index {i} outside {a}")
