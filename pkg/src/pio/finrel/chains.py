"""Split chains in Pfn: ambilimit checks and Adamek approximants."""

from __future__ import annotations

from dataclasses import dataclass, field

from .. import interp
from .. import syntax as S
from ..pinj import PartialFunction, compose, identity, oplus, otimes, ShapeMismatch
from ..syntax import Mu, Value, ValueType


@dataclass(frozen=True)
class ChainData:
    """``e[n]: D(n) -> D(n+1)`` with splitting ``q[n]``, and an apex ``L``
    with projections ``p[n]: L -> D(n)`` and injections ``i[n]: D(n) -> L``."""

    name: str
    sizes: tuple[int, ...]
    e: tuple[PartialFunction, ...]
    q: tuple[PartialFunction, ...]
    apex: int
    p: tuple[PartialFunction, ...]
    i: tuple[PartialFunction, ...]

    def __post_init__(self):
        n = len(self.sizes)
        if len(self.e) != n - 1 or len(self.q) != n - 1 or len(self.p) != n or len(self.i) != n:
            raise ShapeMismatch(f"chain {self.name}: wrong number of maps")

    def e_between(self, n: int, m: int) -> PartialFunction:
        out = identity(self.sizes[n])
        for k in range(n, m):
            out = compose(self.e[k], out)
        return out

    def q_between(self, n: int, m: int) -> PartialFunction:
        out = identity(self.sizes[n])
        for k in range(n - 1, m - 1, -1):
            out = compose(self.q[k], out)
        return out


@dataclass
class CheckResult:
    name: str
    checked: int = 0
    counterexample: dict | None = None

    @property
    def ok(self) -> bool:
        return self.counterexample is None

    def as_record(self) -> dict:
        return {"check": self.name, "checked": self.checked, "ok": self.ok,
                "counterexample": self.counterexample}


@dataclass
class ChainReport:
    chain: str
    results: list[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def get(self, name: str) -> CheckResult:
        return next(r for r in self.results if r.name == name)

    def records(self) -> dict:
        return {"chain": self.chain, "ok": self.ok, "checks": [r.as_record() for r in self.results]}

    def lines(self) -> list[str]:
        out = [f"chain {self.chain}"]
        for r in self.results:
            line = f"  {'PASS' if r.ok else 'FAIL'} {r.name} ({r.checked} equations)"
            if r.counterexample:
                line += f": {r.counterexample}"
            out.append(line)
        return out


def _eq(res: CheckResult, lhs: PartialFunction, rhs: PartialFunction, **where):
    res.checked += 1
    if res.counterexample is None and lhs.table != rhs.table:
        res.counterexample = dict(where, lhs=list(lhs.table), rhs=list(rhs.table))


def _sub_identity(f: PartialFunction) -> bool:
    return all(y is None or y == x for x, y in enumerate(f.table))


def check_ambilimit_laws(c: ChainData) -> ChainReport:
    """Checks (0)-(v); each records its first counterexample.

    (0) premise q_n e_n = id; (i) cone and cocone; (ii) p_n and i_n are
    regular inverses; (iii) the idempotents i_n p_n commute; (iv) the
    composite p_m i_n is e_{n,m} or q_{n,m}; (v) e_n q_n is a partial
    identity, i.e. the splitting is an embedding-projection pair.
    """
    N = len(c.sizes)
    premise, cone, regular, commute, corollary, ep = (CheckResult(k) for k in (
        "premise", "cone", "regular", "commute", "corollary", "embedding-projection"))
    for n in range(N - 1):
        _eq(premise, compose(c.q[n], c.e[n]), identity(c.sizes[n]), n=n)
        _eq(cone, compose(c.q[n], c.p[n + 1]), c.p[n], n=n, side="p_n = q_n p_(n+1)")
        _eq(cone, compose(c.i[n + 1], c.e[n]), c.i[n], n=n, side="i_n = i_(n+1) e_n")
        ep.checked += 1
        if ep.counterexample is None and not _sub_identity(compose(c.e[n], c.q[n])):
            ep.counterexample = {"n": n, "e_n q_n": list(compose(c.e[n], c.q[n]).table)}
    idem = [compose(c.i[n], c.p[n]) for n in range(N)]
    for n in range(N):
        _eq(regular, compose(c.i[n], compose(c.p[n], c.i[n])), c.i[n], n=n, side="i p i = i")
        _eq(regular, compose(c.p[n], compose(c.i[n], c.p[n])), c.p[n], n=n, side="p i p = p")
        for m in range(N):
            _eq(commute, compose(idem[n], idem[m]), compose(idem[m], idem[n]), n=n, m=m)
            want = c.e_between(n, m) if n <= m else c.q_between(n, m)
            _eq(corollary, compose(c.p[m], c.i[n]), want, n=n, m=m)
    return ChainReport(c.name, [premise, cone, regular, commute, corollary, ep])


def _pfn(dom: int, cod: int, fn) -> PartialFunction:
    return PartialFunction(dom, cod, tuple(fn(k) for k in range(dom)))


def pfn_chain(n_max: int, splitting: str = "correct") -> ChainData:
    """The chain ``{1..n}`` included in ``{1..n+1}`` up to ``n_max``, apex ``{1..n_max}``.

    ``correct`` splits by leaving ``n+1`` undefined; ``min`` sends it to ``n``
    (elements are 0-based here, so ``{1..n}`` is ``0..n-1``).
    """
    if splitting not in ("correct", "min"):
        raise ValueError(splitting)
    sizes = tuple(range(n_max + 1))
    e = tuple(_pfn(n, n + 1, lambda k: k) for n in range(n_max))
    if splitting == "correct":
        q = tuple(_pfn(n + 1, n, lambda k, n=n: k if k < n else None) for n in range(n_max))
        p = tuple(_pfn(n_max, n, lambda k, n=n: k if k < n else None) for n in sizes)
    else:
        q = tuple(_pfn(n + 1, n, lambda k, n=n: min(k, n - 1) if n else None) for n in range(n_max))
        p = tuple(_pfn(n_max, n, lambda k, n=n: min(k, n - 1) if n else None) for n in sizes)
    i = tuple(_pfn(n, n_max, lambda k: k) for n in sizes)
    return ChainData(f"pfn-{splitting}-{n_max}", sizes, e, q, n_max, p, i)


def chain_with_last_apex(name: str, sizes, e, q) -> ChainData:
    """Use the last stage as the apex of a finite chain."""
    top = len(sizes) - 1
    tmp = ChainData(name, tuple(sizes), tuple(e), tuple(q), sizes[-1],
                    (identity(sizes[-1]),) * len(sizes), (identity(sizes[-1]),) * len(sizes))
    p = tuple(tmp.q_between(top, n) for n in range(len(sizes)))
    i = tuple(tmp.e_between(n, top) for n in range(len(sizes)))
    return ChainData(name, tuple(sizes), tuple(e), tuple(q), sizes[-1], p, i)


def identity_chain(size: int, length: int) -> ChainData:
    ids = [identity(size)] * (length - 1)
    return chain_with_last_apex(f"identity-{size}", [size] * length, ids, ids)


# ---------------------------------------------------------------------------
# Adamek chains 0 -> F0 -> FF0 -> ...
# ---------------------------------------------------------------------------


class NotPolynomial(ValueError):
    pass


@dataclass(frozen=True)
class Polynomial:
    """An endofunctor built from constants, sums, products and the variable."""

    body: ValueType
    var: str

    @classmethod
    def of(cls, t: Mu) -> "Polynomial":
        return cls(t.body, t.binder)

    def mu(self) -> Mu:
        return Mu(self.var, self.body)

    def validate(self) -> "Polynomial":
        def walk(a):
            if isinstance(a, Mu):
                raise NotPolynomial(f"nested mu in {self.body}")
            if isinstance(a, S.Var) and a.name != self.var:
                raise NotPolynomial(f"free variable {a.name} in {self.body}")
            if isinstance(a, (S.Sum, S.Prod)):
                walk(a.left)
                walk(a.right)
        walk(self.body)
        return self

    def size(self, n: int, a: ValueType | None = None) -> int:
        a = self.body if a is None else a
        if isinstance(a, S.Zero):
            return 0
        if isinstance(a, S.One):
            return 1
        if isinstance(a, S.Var):
            return n
        if isinstance(a, S.Sum):
            return self.size(n, a.left) + self.size(n, a.right)
        return self.size(n, a.left) * self.size(n, a.right)

    def fmap(self, f: PartialFunction, a: ValueType | None = None) -> PartialFunction:
        a = self.body if a is None else a
        if isinstance(a, S.Var):
            return f
        if isinstance(a, S.Sum):
            return oplus(self.fmap(f, a.left), self.fmap(f, a.right))
        if isinstance(a, S.Prod):
            return otimes(self.fmap(f, a.left), self.fmap(f, a.right))
        k = self.size(0, a)
        return PartialFunction(k, k, tuple(range(k)))


@dataclass(frozen=True)
class Approximant:
    functor: Polynomial
    sizes: tuple[int, ...]
    e: tuple[PartialFunction, ...]
    q: tuple[PartialFunction, ...]

    def chain(self) -> ChainData:
        return chain_with_last_apex(f"adamek({self.functor.mu()})", self.sizes, self.e, self.q)

    def decode(self, stage: int, index: int) -> Value:
        """The fold-value of the mu type that element ``index`` of ``stage`` stands for."""
        if stage == 0:
            raise ValueError("stage 0 is empty")
        return S.Fold(self._body(self.functor.body, index, stage - 1))

    def _body(self, a: ValueType, i: int, below: int) -> Value:
        F = self.functor
        n = self.sizes[below]
        if isinstance(a, S.Var):
            return self.decode(below, i)
        if isinstance(a, S.One):
            return S.UNIT
        if isinstance(a, S.Sum):
            left = F.size(n, a.left)
            return S.InL(self._body(a.left, i, below)) if i < left else S.InR(self._body(a.right, i - left, below))
        if isinstance(a, S.Prod):
            q, r = divmod(i, F.size(n, a.right))
            return S.Pair(self._body(a.left, q, below), self._body(a.right, r, below))
        raise ValueError(f"no element {i} in {a}")


def adamek_approximant(functor: Polynomial | Mu, stages: int) -> Approximant:
    """Stages ``0, F0, ..., F^(stages-1) 0`` with ``e_(k+1) = F(e_k)`` and ``q_(k+1) = F(q_k)``."""
    F = functor if isinstance(functor, Polynomial) else Polynomial.of(functor)
    F.validate()
    if stages < 1:
        raise ValueError("need at least one stage")
    sizes = [0]
    e, q = [], []
    for k in range(stages - 1):
        sizes.append(F.size(sizes[-1]))
        if k == 0:
            e.append(PartialFunction(0, sizes[1], ()))
            q.append(PartialFunction(sizes[1], 0, (None,) * sizes[1]))
        else:
            e.append(F.fmap(e[-1]))
            q.append(F.fmap(q[-1]))
    return Approximant(F, tuple(sizes), tuple(e), tuple(q))


@dataclass
class FixedPointReport:
    functor: str
    stages: int
    sizes: tuple[int, ...]
    interp_sizes: tuple[int, ...]
    problems: list[str]

    @property
    def ok(self) -> bool:
        return not self.problems

    def as_record(self) -> dict:
        return {"functor": self.functor, "stages": self.stages, "sizes": list(self.sizes),
                "interp_sizes": list(self.interp_sizes), "ok": self.ok, "problems": self.problems}


def check_initial_algebra_approx(functor: Polynomial | Mu, stages: int) -> FixedPointReport:
    """Stage ``k`` must biject with the values of the mu type having at most
    ``k`` nested folds, with the chain maps acting as inclusions of values."""
    if stages < 2:
        raise ValueError("stages must be at least 2")
    ap = adamek_approximant(functor, stages)
    t = ap.functor.mu()
    problems = []
    interp_sizes = []
    for k in range(stages):
        expected = interp.unroll_mu_approximant(t, k)
        interp_sizes.append(len(expected))
        got = [ap.decode(k, i) for i in range(ap.sizes[k])] if k else []
        if len(set(got)) != len(got):
            problems.append(f"stage {k}: decoding is not injective")
        if set(got) != set(expected):
            problems.append(f"stage {k}: {len(got)} elements vs {len(expected)} values of depth <= {k}")
    for k in range(stages - 1):
        if compose(ap.q[k], ap.e[k]).table != tuple(range(ap.sizes[k])):
            problems.append(f"q_{k} e_{k} is not the identity")
        for i in range(ap.sizes[k]):
            j = ap.e[k].table[i]
            if j is None or ap.decode(k + 1, j) != ap.decode(k, i):
                problems.append(f"e_{k} does not include element {i} as the same value")
                break
    rep = check_ambilimit_laws(ap.chain())
    problems += [f"chain check {r.name} failed" for r in rep.results if not r.ok]
    return FixedPointReport(str(t), stages, ap.sizes, tuple(interp_sizes), problems)
