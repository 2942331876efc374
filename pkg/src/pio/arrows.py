"""Inverse arrows over reversible host functions.

A :class:`RevFun` is a pair of mutually partial-inverse evaluators.  Every
effectful computation of an instance is itself a :class:`RevFun` on the
instance's carrier (``X*S`` for state, ``X+E`` for errors, lists for
vectors, ...); its ``type_in``/``type_out`` record the arrow-level types
``X`` and ``Y``.  Equality of effectful computations is always extensional.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

from . import interp
from . import syntax as S
from .interp import Defined, EvalResult, Undefined
from .syntax import ONE, Fold, InL, InR, Mu, Pair, Prod, Sum, Value, ValueType, Var


class InvarianceViolation(ValueError):
    pass


class GroupLawViolation(ValueError):
    pass


class ChoiceLawViolation(ValueError):
    pass


class CodecNotInjective(ValueError):
    pass


class NotSupported(TypeError):
    pass


Step = Callable[[object], EvalResult]


def _then(r: EvalResult, f: Step) -> EvalResult:
    return f(r.value) if isinstance(r, Defined) else r


@dataclass(frozen=True)
class RevFun:
    type_in: object
    type_out: object
    forward: Step
    backward: Step
    label: str = ""

    def __call__(self, v) -> EvalResult:
        return self.forward(v)

    run = __call__

    @property
    def dagger(self) -> "RevFun":
        return RevFun(self.type_out, self.type_in, self.backward, self.forward,
                      f"inv({self.label})")

    def __repr__(self):
        return f"RevFun<{self.label or '?'}: {self.type_in} -> {self.type_out}>"


# ---------------------------------------------------------------------------
# pure reversible functions
# ---------------------------------------------------------------------------


def rev_identity(a) -> RevFun:
    return RevFun(a, a, Defined, Defined, "id")


def rev_compose(f: RevFun, g: RevFun) -> RevFun:
    """``f`` then ``g``."""
    return RevFun(f.type_in, g.type_out,
                  lambda v: _then(f.forward(v), g.forward),
                  lambda w: _then(g.backward(w), f.backward),
                  f"{f.label};{g.label}")


def _pairwise(f: Step, g: Step) -> Step:
    def step(v):
        if not isinstance(v, Pair):
            return Undefined
        return _then(f(v.first), lambda x: _then(g(v.second), lambda z: Defined(Pair(x, z))))
    return step


def rev_tensor(f: RevFun, g: RevFun) -> RevFun:
    return RevFun(Prod(f.type_in, g.type_in), Prod(f.type_out, g.type_out),
                  _pairwise(f.forward, g.forward), _pairwise(f.backward, g.backward),
                  f"({f.label}*{g.label})")


def rev_from_mapping(a, b, mapping: dict, label: str = "") -> RevFun:
    inverse = {w: v for v, w in mapping.items()}
    if len(inverse) != len(mapping):
        raise ValueError("mapping is not injective")
    fwd = lambda v: Defined(mapping[v]) if v in mapping else Undefined  # noqa: E731
    bwd = lambda w: Defined(inverse[w]) if w in inverse else Undefined  # noqa: E731
    return RevFun(a, b, fwd, bwd, label or "table")


def rev_from_combinator(c: S.Combinator, a: ValueType, b: ValueType,
                        fuel: interp.Fuel | None = None) -> RevFun:
    return RevFun(a, b, lambda v: interp.run(c, v, fuel), lambda w: interp.run_backward(c, w, fuel), str(c))


def rev_structural(kind: str, *types) -> RevFun:
    """Pure coherence isomorphisms used by the arrow laws."""
    if kind == "rho":  # X*1 -> X
        (x,) = types
        return RevFun(Prod(x, ONE), x,
                      lambda v: Defined(v.first) if isinstance(v, Pair) and v.second == S.UNIT else Undefined,
                      lambda v: Defined(Pair(v, S.UNIT)), "rho")
    if kind == "alpha":  # X*(Z*V) -> (X*Z)*V
        x, z, w = types
        return RevFun(Prod(x, Prod(z, w)), Prod(Prod(x, z), w),
                      lambda v: interp.eval_basic(S.AssocLTimes(), v) if isinstance(v, Pair) and isinstance(v.second, Pair) else Undefined,
                      lambda v: interp.eval_basic(S.AssocRTimes(), v) if isinstance(v, Pair) and isinstance(v.first, Pair) else Undefined,
                      "alpha")
    if kind == "sigma":  # X*Z -> Z*X
        x, z = types
        swap = lambda v: Defined(Pair(v.second, v.first)) if isinstance(v, Pair) else Undefined  # noqa: E731
        return RevFun(Prod(x, z), Prod(z, x), swap, swap, "sigma")
    raise ValueError(kind)


def random_revfun(rng: random.Random, a: ValueType, b: ValueType, density: float | None = None) -> RevFun:
    from .pinj import random_pinj

    xs, ys = interp.enumerate_values(a), interp.enumerate_values(b)
    f = random_pinj(rng, len(xs), len(ys), density)
    mapping = {xs[i]: ys[j] for i, j in enumerate(f.table) if j is not None}
    return rev_from_mapping(a, b, mapping, f"f{rng.randrange(10**6)}")


def check_partial_inverse(f: RevFun, inputs, outputs=()) -> list[tuple]:
    """Points where ``forward`` and ``backward`` fail to undo each other."""
    bad = []
    for v in inputs:
        r = f.forward(v)
        if isinstance(r, Defined) and f.backward(r.value) != Defined(v):
            bad.append(("forward", v, r.value))
    for w in outputs:
        r = f.backward(w)
        if isinstance(r, Defined) and f.forward(r.value) != Defined(w):
            bad.append(("backward", w, r.value))
    return bad


# ---------------------------------------------------------------------------
# lists as mu l. 1 + X*l
# ---------------------------------------------------------------------------


def list_type(x: ValueType) -> Mu:
    name = S._fresh(S.free_vars(x), "l")
    return Mu(name, Sum(ONE, Prod(x, Var(name))))


NIL = Fold(InL(S.UNIT))


def from_list(items) -> Value:
    out = NIL
    for v in reversed(list(items)):
        out = Fold(InR(Pair(v, out)))
    return out


def to_list(v: Value) -> list | None:
    out = []
    while isinstance(v, Fold):
        w = v.value
        if isinstance(w, InL):
            return out
        if not (isinstance(w, InR) and isinstance(w.value, Pair)):
            return None
        out.append(w.value.first)
        v = w.value.second
    return None


def _map_step(step: Step) -> Step:
    def go(v):
        items = to_list(v)
        if items is None:
            return Undefined
        out = []
        for x in items:
            r = step(x)
            if not isinstance(r, Defined):
                return r
            out.append(r.value)
        return Defined(from_list(out))
    return go


def zip_lists(xs: Value) -> EvalResult:
    """``zip : ([a],[b]) <-> [(a,b)]``; Undefined on a length mismatch."""
    if not isinstance(xs, Pair):
        return Undefined
    left, right = to_list(xs.first), to_list(xs.second)
    if left is None or right is None or len(left) != len(right):
        return Undefined
    return Defined(from_list(Pair(a, b) for a, b in zip(left, right)))


def unzip_lists(ps: Value) -> EvalResult:
    items = to_list(ps)
    if items is None or not all(isinstance(p, Pair) for p in items):
        return Undefined
    return Defined(Pair(from_list(p.first for p in items), from_list(p.second for p in items)))


# ---------------------------------------------------------------------------
# instances
# ---------------------------------------------------------------------------


Effectful = RevFun


@dataclass
class ArrowInstance:
    """Operations of an (inverse, possibly weak) arrow.

    ``inputs(X)`` lists the carrier-level inputs of an effectful computation
    with source type ``X``; ``sample(rng, X, Y)`` draws an effectful
    computation ``X -> Y`` for the law harness.
    """

    name: str
    arr: Callable[[RevFun], Effectful]
    seq: Callable[[Effectful, Effectful], Effectful]
    inv: Callable[[Effectful], Effectful]
    inputs: Callable[[ValueType], list]
    sample: Callable[[random.Random, ValueType, ValueType], Effectful]
    first: Callable[[Effectful, ValueType], Effectful] | None = None
    state_type: ValueType | None = None
    helpers: dict = field(default_factory=dict)

    @property
    def weak(self) -> bool:
        return self.first is None

    def second(self, a: Effectful, z: ValueType) -> Effectful:
        """``arr swap >>> first a >>> arr swap``."""
        if self.first is None:
            raise NotSupported(f"{self.name} is a weak arrow")
        x, y = a.type_in, a.type_out
        return self.seq(self.seq(self.arr(rev_structural("sigma", z, x)), self.first(a, z)),
                        self.arr(rev_structural("sigma", y, z)))


def _seq(a: Effectful, b: Effectful) -> Effectful:
    return RevFun(a.type_in, b.type_out,
                  lambda v: _then(a.forward(v), b.forward),
                  lambda w: _then(b.backward(w), a.backward),
                  f"({a.label} >>> {b.label})")


def _inv(a: Effectful) -> Effectful:
    return a.dagger


def mk_pure() -> ArrowInstance:
    def arr(f):
        return RevFun(f.type_in, f.type_out, f.forward, f.backward, f"arr {f.label}")

    def first(a, z):
        return RevFun(Prod(a.type_in, z), Prod(a.type_out, z),
                      _pairwise(a.forward, Defined), _pairwise(a.backward, Defined),
                      f"first({a.label})")

    def sample(rng, x, y):
        return arr(random_revfun(rng, x, y))

    return ArrowInstance("pure", arr, _seq, _inv, interp.enumerate_values, sample, first)


def mk_broken() -> ArrowInstance:
    """Pure arrows with ``inv`` replaced by the identity: a harness sanity case."""
    inst = mk_pure()
    inst.name = "broken"
    inst.inv = lambda a: a
    return inst


# -- state-like arrows -------------------------------------------------------


def _state_first(a: Effectful, z: ValueType) -> Effectful:
    # ((x,z),s) -> let (x',s') = a (x,s) in ((x',z),s')
    def lift(step):
        def go(v):
            if not (isinstance(v, Pair) and isinstance(v.first, Pair)):
                return Undefined
            (x, zz), s = (v.first.first, v.first.second), v.second
            return _then(step(Pair(x, s)), lambda r: Defined(Pair(Pair(r.first, zz), r.second)))
        return go
    return RevFun(Prod(a.type_in, z), Prod(a.type_out, z), lift(a.forward), lift(a.backward),
                  f"first({a.label})")


def _state_arr(f: RevFun) -> Effectful:
    def lift(step):
        def go(v):
            if not isinstance(v, Pair):
                return Undefined
            return _then(step(v.first), lambda x: Defined(Pair(x, v.second)))
        return go
    return RevFun(f.type_in, f.type_out, lift(f.forward), lift(f.backward), f"arr {f.label}")


def _state_instance(name: str, s: ValueType, sample_raw) -> ArrowInstance:
    states = interp.enumerate_values(s)

    def inputs(x):
        return [Pair(v, st) for v in interp.enumerate_values(x) for st in states]

    def get(x: ValueType) -> Effectful:
        """``get (x,s) = ((x,s),s)``; its inverse is ``assert``."""
        def fwd(v):
            return Defined(Pair(v, v.second)) if isinstance(v, Pair) else Undefined

        def bwd(w):
            if isinstance(w, Pair) and isinstance(w.first, Pair) and w.first.second == w.second:
                return Defined(w.first)
            return Undefined
        return RevFun(x, Prod(x, s), fwd, bwd, "get")

    def assert_(x: ValueType) -> Effectful:
        return get(x).dagger

    inst = ArrowInstance(name, _state_arr, _seq, _inv, inputs, None, _state_first, s,
                         {"get": get, "assert": assert_})

    def sample(rng, x, y):
        pick = rng.randrange(3)
        f = random_revfun(rng, x, y)
        if pick == 0:
            return inst.arr(f)
        raw = sample_raw(rng, x, y)
        return raw if pick == 1 else inst.seq(inst.arr(f), sample_raw(rng, y, y))

    inst.sample = sample
    return inst


def _raw_carrier(s: ValueType):
    def raw(rng, x, y):
        g = random_revfun(rng, Prod(x, s), Prod(y, s))
        return RevFun(x, y, g.forward, g.backward, g.label)
    return raw


def mk_rstate(s: ValueType) -> ArrowInstance:
    inst = _state_instance("rstate", s, _raw_carrier(s))

    def update(f: RevFun, x: ValueType = ONE) -> Effectful:
        """``update f (x,s) = (x, f s)``."""
        def lift(step):
            def go(v):
                if not isinstance(v, Pair):
                    return Undefined
                return _then(step(v.second), lambda t: Defined(Pair(v.first, t)))
            return go
        return RevFun(x, x, lift(f.forward), lift(f.backward), f"update {f.label}")

    inst.helpers["update"] = update
    base = inst.sample

    def sample(rng, x, y):
        if x == y and rng.random() < 0.25:
            return update(random_revfun(rng, s, s), x)
        return base(rng, x, y)

    inst.sample = sample
    return inst


@dataclass
class InvarianceReport:
    checked: int
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations


def mk_reader(c: ValueType) -> ArrowInstance:
    contexts = interp.enumerate_values(c)

    def raw(rng, x, y):
        # a separate partial injection X -> Y for every context value
        per = {ctx: random_revfun(rng, x, y) for ctx in contexts}

        def lift(direction):
            def go(v):
                if not isinstance(v, Pair) or v.second not in per:
                    return Undefined
                step = per[v.second].forward if direction else per[v.second].backward
                return _then(step(v.first), lambda w: Defined(Pair(w, v.second)))
            return go
        return RevFun(x, y, lift(True), lift(False), "ctx-table")

    inst = _state_instance("reader", c, raw)

    def check_invariance(a: Effectful, samples=None) -> InvarianceReport:
        samples = inst.inputs(a.type_in) if samples is None else list(samples)
        bad = []
        for v in samples:
            r = a.forward(v)
            if isinstance(r, Defined) and r.value.second != v.second:
                bad.append((v, r.value))
        return InvarianceReport(len(samples), bad)

    def require_invariant(a: Effectful) -> Effectful:
        rep = check_invariance(a)
        if not rep.ok:
            v, w = rep.violations[0]
            raise InvarianceViolation(f"{a.label} changes the context: {v} -> {w}")
        return a

    inst.helpers["check_invariance"] = check_invariance
    inst.helpers["require_invariant"] = require_invariant
    return inst


@dataclass(frozen=True)
class GroupSpec:
    carrier: ValueType
    gunit: Value
    gmul: Callable[[Value], RevFun]
    ginv: RevFun

    def elements(self) -> list[Value]:
        return interp.enumerate_values(self.carrier)

    def mul(self, a: Value, b: Value) -> Value:
        r = self.gmul(a).forward(b)
        if not isinstance(r, Defined):
            raise GroupLawViolation(f"gmul {a} undefined at {b}")
        return r.value

    def validate(self) -> None:
        els = self.elements()
        if self.gunit not in els:
            raise GroupLawViolation(f"unit {self.gunit} is not in the carrier")
        for a in els:
            if check_partial_inverse(self.gmul(a), els, els):
                raise GroupLawViolation(f"gmul {a} is not a reversible function")
            inv = self.ginv.forward(a)
            if not isinstance(inv, Defined) or self.mul(inv.value, a) != self.gunit \
                    or self.mul(a, inv.value) != self.gunit:
                raise GroupLawViolation(f"ginv fails at {a}")
            if self.mul(self.gunit, a) != a or self.mul(a, self.gunit) != a:
                raise GroupLawViolation(f"unit law fails at {a}")
            for b in els:
                for c in els:
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                        raise GroupLawViolation(f"associativity fails at {a}, {b}, {c}")


def cyclic_group(n: int) -> GroupSpec:
    """``Z/n`` on the type ``1 + (1 + ...)`` with ``n`` inhabitants."""
    if n < 1:
        raise ValueError("group order must be positive")
    t = ONE
    for _ in range(n - 1):
        t = Sum(ONE, t)
    els = interp.enumerate_values(t)
    idx = {v: i for i, v in enumerate(els)}

    def gmul(a):
        k = idx[a]
        return rev_from_mapping(t, t, {els[i]: els[(i + k) % n] for i in range(n)}, f"+{k}")

    ginv = rev_from_mapping(t, t, {els[i]: els[(-i) % n] for i in range(n)}, "neg")
    return GroupSpec(t, els[0], gmul, ginv)


def table_group(carrier: ValueType, table: list[list[int]], unit: int = 0) -> GroupSpec:
    """A group given by its multiplication table over ``enumerate_values(carrier)``."""
    els = interp.enumerate_values(carrier)
    n = len(els)

    def gmul(a):
        row = table[els.index(a)]
        if sorted(row) != list(range(n)):
            raise GroupLawViolation(f"row of {a} is not a permutation")
        return rev_from_mapping(carrier, carrier, {els[j]: els[row[j]] for j in range(n)})

    inverse = {}
    for i in range(n):
        for j in range(n):
            if table[i][j] == unit:
                inverse[els[i]] = els[j]
    if len(set(inverse.values())) != len(inverse):
        raise GroupLawViolation("inverse map is not injective")
    return GroupSpec(carrier, els[unit], gmul, rev_from_mapping(carrier, carrier, inverse, "ginv"))


def mk_rewriter(g: GroupSpec) -> ArrowInstance:
    g.validate()
    inst = _state_instance("rewriter", g.carrier, _raw_carrier(g.carrier))

    def rewrite(a: Value, x: ValueType = ONE) -> Effectful:
        """``rewrite a (x,b) = (x, gmul a b)``."""
        m = g.gmul(a)

        def lift(step):
            def go(v):
                if not isinstance(v, Pair):
                    return Undefined
                return _then(step(v.second), lambda t: Defined(Pair(v.first, t)))
            return go
        return RevFun(x, x, lift(m.forward), lift(m.backward), f"rewrite {a}")

    inst.helpers["rewrite"] = rewrite
    inst.helpers["group"] = g
    base = inst.sample

    def sample(rng, x, y):
        if x == y and rng.random() < 0.25:
            return rewrite(rng.choice(g.elements()), x)
        return base(rng, x, y)

    inst.sample = sample
    return inst


# -- errors --------------------------------------------------------------------


def check_choice_laws(f: RevFun, p: RevFun, xs, es) -> list[str]:
    """The three equations ``p f = i1 f``, ``i2' p = p' i2 i2' p``, ``p' p = id``."""
    problems = []
    for x in xs:
        fx = f.forward(x)
        if isinstance(fx, Defined) and p.forward(fx.value) != Defined(InL(fx.value)):
            problems.append(f"p f = i1 f fails at {x}")
    for e in es:
        pe = p.forward(e)
        if not isinstance(pe, Defined) or p.backward(pe.value) != Defined(e):
            problems.append(f"p' p = id fails at {e}")
            continue
        # both sides are undefined when p sends e to the left
        if isinstance(pe.value, InR):
            lhs, rhs = Defined(pe.value.value), p.backward(pe.value)
        else:
            lhs = rhs = Undefined
        if lhs != rhs:
            problems.append(f"i2' p = p' i2 i2' p fails at {e}")
    return problems


def mk_error(e: ValueType) -> ArrowInstance:
    errors = interp.enumerate_values(e)

    def lift(step):
        def go(v):
            if isinstance(v, InL):
                return _then(step(v.value), lambda w: Defined(InL(w)))
            return Defined(v) if isinstance(v, InR) else Undefined
        return go

    def arr(f):
        return RevFun(f.type_in, f.type_out, lift(f.forward), lift(f.backward), f"arr {f.label}")

    def inputs(x):
        return [InL(v) for v in interp.enumerate_values(x)] + [InR(err) for err in errors]

    def raise_(f: RevFun, p: RevFun, y: ValueType = ONE) -> Effectful:
        """``raise f p x = InR (p' (arr f x))``."""
        problems = check_choice_laws(f, p, interp.enumerate_values(f.type_in), errors)
        if problems:
            raise ChoiceLawViolation("; ".join(problems))

        def fwd(v):
            if isinstance(v, InL):
                tagged = _then(f.forward(v.value), lambda w: Defined(InL(w)))
            elif isinstance(v, InR):
                tagged = Defined(v)
            else:
                return Undefined
            return _then(tagged, lambda t: _then(p.backward(t), lambda err: Defined(InR(err))))

        def bwd(w):
            if not isinstance(w, InR):
                return Undefined
            def route(t):
                if isinstance(t, InL):
                    return _then(f.backward(t.value), lambda x: Defined(InL(x)))
                return Defined(t)
            return _then(p.forward(w.value), route)

        return RevFun(f.type_in, y, fwd, bwd, f"raise {f.label}")

    def handle(f: RevFun, p: RevFun, y: ValueType = ONE) -> Effectful:
        return raise_(f, p, y).dagger

    def choice(rng: random.Random, f: RevFun) -> RevFun:
        """A random choice function compatible with ``f``."""
        image = {r.value for x in interp.enumerate_values(f.type_in)
                 if isinstance(r := f.forward(x), Defined)}
        mapping = {err: InL(err) if err in image or rng.random() < 0.5 else InR(err) for err in errors}
        return rev_from_mapping(e, Sum(e, e), mapping, "p")

    inst = ArrowInstance("error", arr, _seq, _inv, inputs, None, None, e,
                         {"raise": raise_, "handle": handle, "choice": choice})

    def sample(rng, x, y):
        pick = rng.randrange(3)
        if pick == 0:
            return arr(random_revfun(rng, x, y))
        if pick == 1:
            g = random_revfun(rng, Sum(x, e), Sum(y, e))
            return RevFun(x, y, g.forward, g.backward, g.label)
        f = random_revfun(rng, x, e)
        return raise_(f, choice(rng, f), y)

    inst.sample = sample
    return inst


# -- serializer ------------------------------------------------------------------


def default_codec(x: ValueType) -> RevFun:
    """Canonical printing; the deserializer accepts only canonical text."""
    from .parser import ParseError, parse_value, print_value
    from .typecheck import check_value

    def bwd(text):
        if not isinstance(text, str):
            return Undefined
        try:
            v = parse_value(text)
        except ParseError:
            return Undefined
        if print_value(v) != text or not check_value(v, x):
            return Undefined
        return Defined(v)

    return RevFun(x, f"Serialized {x}", lambda v: Defined(print_value(v)), bwd, "serialize")


def mk_serializer(codec: Callable[[ValueType], RevFun] = default_codec) -> ArrowInstance:
    cache: dict = {}

    def ser(t: ValueType) -> RevFun:
        if t not in cache:
            c = codec(t)
            vals = interp.enumerate_values(t) if not S.has_mu(t) else interp.values_upto(t, 3)
            outs = []
            for v in vals:
                r = c.forward(v)
                if isinstance(r, Defined):
                    outs.append(r.value)
            bad = check_partial_inverse(c, vals, outs)
            if bad or len(set(outs)) != len(outs):
                raise CodecNotInjective(f"codec for {t} is not injective or not invertible: {bad[:1]}")
            cache[t] = c
        return cache[t]

    def arr(f):
        s = ser(f.type_out)
        return RevFun(f.type_in, f.type_out,
                      lambda v: _then(f.forward(v), s.forward),
                      lambda txt: _then(s.backward(txt), f.backward), f"arr {f.label}")

    def seq(a, b):
        # (a >>> b) x = b (serialize' (a x))
        mid = ser(a.type_out)
        return RevFun(a.type_in, b.type_out,
                      lambda v: _then(_then(a.forward(v), mid.backward), b.forward),
                      lambda txt: _then(_then(b.backward(txt), mid.forward), a.backward),
                      f"({a.label} >>> {b.label})")

    def first(a, z):
        # first a (x,z) = serialize (serialize' (a x), z)
        sy, syz = ser(a.type_out), ser(Prod(a.type_out, z))

        def fwd(v):
            if not isinstance(v, Pair):
                return Undefined
            return _then(_then(a.forward(v.first), sy.backward),
                         lambda y: syz.forward(Pair(y, v.second)))

        def bwd(txt):
            def back(p):
                return _then(_then(sy.forward(p.first), a.backward), lambda x: Defined(Pair(x, p.second)))
            return _then(syz.backward(txt), back)

        return RevFun(Prod(a.type_in, z), Prod(a.type_out, z), fwd, bwd, f"first({a.label})")

    def inv(a):
        # inv a y = serialize (a' (serialize y))
        sx, sy = ser(a.type_in), ser(a.type_out)
        return RevFun(a.type_out, a.type_in,
                      lambda y: _then(_then(sy.forward(y), a.backward), sx.forward),
                      lambda txt: _then(_then(sx.backward(txt), a.forward), sy.backward),
                      f"inv({a.label})")

    inst = ArrowInstance("serializer", arr, seq, inv, interp.enumerate_values, None, first,
                         helpers={"serialize": ser})
    inst.sample = lambda rng, x, y: arr(random_revfun(rng, x, y))
    return inst


# -- vectors -----------------------------------------------------------------------


VECTOR_DEPTH = 3


def mk_vector(depth: int = VECTOR_DEPTH) -> ArrowInstance:
    """Length-preserving list transformations, checked on lists with at most
    ``depth`` nested folds (so of length below ``depth``)."""

    def lists(x):
        return interp.unroll_mu_approximant(list_type(x), depth)

    def arr(f):
        return RevFun(f.type_in, f.type_out, _map_step(f.forward), _map_step(f.backward),
                      f"map {f.label}")

    def first(a, z):
        # first a ps = let (xs, zs) = zip' ps in zip (a xs, zs)
        def lift(step):
            def go(ps):
                def rezip(p):
                    return _then(step(p.first), lambda ys: zip_lists(Pair(ys, p.second)))
                return _then(unzip_lists(ps), rezip)
            return go
        return RevFun(Prod(a.type_in, z), Prod(a.type_out, z), lift(a.forward), lift(a.backward),
                      f"first({a.label})")

    def stratified(rng, x, y):
        # a random partial injection that maps each length to itself
        mapping = {}
        src, dst = lists(x), lists(y)
        for n in range(depth):
            xs = [v for v in src if len(to_list(v)) == n]
            ys = [v for v in dst if len(to_list(v)) == n]
            rng.shuffle(ys)
            for v, w in zip(xs, ys):
                if rng.random() < 0.9:
                    mapping[v] = w
        return rev_from_mapping(x, y, mapping, "perm-by-length")

    def sample(rng, x, y):
        return arr(random_revfun(rng, x, y)) if rng.random() < 0.5 else stratified(rng, x, y)

    return ArrowInstance("vector", arr, _seq, _inv, lists, sample, first,
                         helpers={"zip": zip_lists, "unzip": unzip_lists, "stratified": stratified})


def mk_left(inst: ArrowInstance) -> Callable[[Effectful, ValueType], Effectful]:
    """ArrowChoice ``left``: route ``InL`` through the computation, pass ``InR``."""
    if inst.name in ("pure", "broken"):
        def lift(step):
            def go(v):
                if isinstance(v, InL):
                    return _then(step(v.value), lambda w: Defined(InL(w)))
                return Defined(v) if isinstance(v, InR) else Undefined
            return go
    elif inst.name == "error":
        def lift(step):
            def go(v):
                if isinstance(v, InL) and isinstance(v.value, InL):
                    def tag(w):
                        return Defined(InL(InL(w.value))) if isinstance(w, InL) else Defined(w)
                    return _then(step(InL(v.value.value)), tag)
                return Defined(v) if isinstance(v, (InL, InR)) else Undefined
            return go
    elif inst.name in ("rstate", "reader", "rewriter"):
        def lift(step):
            def go(v):
                if not isinstance(v, Pair):
                    return Undefined
                tag, s = v.first, v.second
                if isinstance(tag, InL):
                    return _then(step(Pair(tag.value, s)), lambda r: Defined(Pair(InL(r.first), r.second)))
                return Defined(v) if isinstance(tag, InR) else Undefined
            return go
    else:
        raise NotSupported(f"{inst.name} has no sum action for left")

    def left(a: Effectful, z: ValueType) -> Effectful:
        return RevFun(Sum(a.type_in, z), Sum(a.type_out, z), lift(a.forward), lift(a.backward),
                      f"left({a.label})")

    return left


INSTANCES = {
    "pure": mk_pure,
    "rstate": lambda: mk_rstate(Sum(ONE, ONE)),
    "reader": lambda: mk_reader(Sum(ONE, ONE)),
    "rewriter": lambda: mk_rewriter(cyclic_group(2)),
    "error": lambda: mk_error(Sum(ONE, ONE)),
    "serializer": mk_serializer,
    "vector": mk_vector,
    "broken": mk_broken,
}


# ---------------------------------------------------------------------------
# law harness
# ---------------------------------------------------------------------------

LAWS = (
    "arrow1", "arrow2", "arrow3", "arrow4", "arrow5", "arrow6", "arrow7", "arrow8",
    "daggerarrow1", "daggerarrow2", "daggerarrow3", "daggerarrow4",
    "inversearrow1", "inversearrow2",
)
FIRST_LAWS = frozenset({"arrow4", "arrow5", "arrow6", "arrow7", "arrow8", "daggerarrow4"})


@dataclass
class LawResult:
    law: str
    status: str = "pass"  # pass | fail | n/a
    checked: int = 0
    counterexample: dict | None = None

    def as_record(self) -> dict:
        return {"law": self.law, "status": self.status, "checked": self.checked,
                "counterexample": self.counterexample}


@dataclass
class LawReport:
    instance: str
    types: tuple[str, ...]
    results: dict[str, LawResult]

    @property
    def ok(self) -> bool:
        return all(r.status != "fail" for r in self.results.values())

    def failed(self) -> list[str]:
        return [k for k in LAWS if self.results[k].status == "fail"]

    def records(self) -> dict:
        return {"instance": self.instance, "types": list(self.types),
                "laws": [self.results[k].as_record() for k in LAWS]}

    def lines(self) -> list[str]:
        out = [f"instance {self.instance} at X={self.types[0]}, Y={self.types[1]}, Z={self.types[2]}"]
        for k in LAWS:
            r = self.results[k]
            line = f"  {r.status.upper():4} {k} ({r.checked} points)"
            if r.counterexample:
                ce = r.counterexample
                line += f": at {ce['input']} lhs={ce['lhs']} rhs={ce['rhs']}"
            out.append(line)
        return out


def _show(x) -> str:
    if isinstance(x, Defined):
        return str(x.value)
    if x is Undefined:
        return "undefined"
    return str(x)


def _safe(f: Effectful, v):
    try:
        return f.forward(v)
    except Exception as exc:  # a broken instance may feed values of the wrong type
        return f"error: {type(exc).__name__}"


def _instantiate(law: str, inst: ArrowInstance, rng: random.Random, x, y, z):
    """Return ``(lhs, rhs, source type)`` for one random instance of ``law``."""
    A = inst.arr
    seq, inv, first = inst.seq, inst.inv, inst.first
    smp = inst.sample
    if law == "arrow1":
        a, b, c = smp(rng, x, y), smp(rng, y, z), smp(rng, z, x)
        return seq(seq(a, b), c), seq(a, seq(b, c)), x
    if law == "arrow2":
        f, g = random_revfun(rng, x, y), random_revfun(rng, y, z)
        return A(rev_compose(f, g)), seq(A(f), A(g)), x
    if law == "arrow3":
        a = smp(rng, x, y)
        # both unit laws at once: arr id >>> a = a >>> arr id
        return seq(A(rev_identity(x)), a), seq(a, A(rev_identity(y))), x
    if law == "arrow4":
        a = smp(rng, x, y)
        return (seq(first(a, ONE), A(rev_structural("rho", y))),
                seq(A(rev_structural("rho", x)), a), Prod(x, ONE))
    if law == "arrow5":
        a, f = smp(rng, x, y), random_revfun(rng, z, z)
        return (seq(first(a, z), A(rev_tensor(rev_identity(y), f))),
                seq(A(rev_tensor(rev_identity(x), f)), first(a, z)), Prod(x, z))
    if law == "arrow6":
        a, v = smp(rng, x, y), x
        return (seq(first(a, Prod(z, v)), A(rev_structural("alpha", y, z, v))),
                seq(A(rev_structural("alpha", x, z, v)), first(first(a, z), v)),
                Prod(x, Prod(z, v)))
    if law == "arrow7":
        f = random_revfun(rng, x, y)
        return first(A(f), z), A(rev_tensor(f, rev_identity(z))), Prod(x, z)
    if law == "arrow8":
        a, b = smp(rng, x, y), smp(rng, y, z)
        return first(seq(a, b), z), seq(first(a, z), first(b, z)), Prod(x, z)
    if law == "daggerarrow1":
        a = smp(rng, x, y)
        return inv(inv(a)), a, x
    if law == "daggerarrow2":
        b, a = smp(rng, z, x), smp(rng, x, y)
        return seq(inv(a), inv(b)), inv(seq(b, a)), y
    if law == "daggerarrow3":
        f = random_revfun(rng, x, y)
        return A(f.dagger), inv(A(f)), y
    if law == "daggerarrow4":
        a = smp(rng, x, y)
        return inv(first(a, z)), first(inv(a), z), Prod(y, z)
    if law == "inversearrow1":
        a = smp(rng, x, y)
        return seq(seq(a, inv(a)), a), a, x
    if law == "inversearrow2":
        a, b = smp(rng, x, y), smp(rng, x, z)
        aa, bb = seq(a, inv(a)), seq(b, inv(b))
        return seq(aa, bb), seq(bb, aa), x
    raise ValueError(law)


def check_laws(inst: ArrowInstance, types: tuple[ValueType, ValueType, ValueType],
               budget: int = 4096, trials: int = 4, seed: int = 0) -> LawReport:
    """Evaluate both sides of every law pointwise on the carrier inputs.

    Inputs are enumerated exhaustively, or subsampled to ``budget`` points
    when there are more.
    """
    x, y, z = types
    rng = random.Random(seed)
    results = {}
    for law in LAWS:
        res = LawResult(law)
        results[law] = res
        if law in FIRST_LAWS and inst.weak:
            res.status = "n/a"
            continue
        for _ in range(trials):
            lhs, rhs, src = _instantiate(law, inst, rng, x, y, z)
            points = inst.inputs(src)
            if len(points) > budget:
                points = rng.sample(points, budget)
            for v in points:
                res.checked += 1
                lv, rv = _safe(lhs, v), _safe(rhs, v)
                if lv != rv:
                    res.status = "fail"
                    res.counterexample = {"input": str(v), "lhs": _show(lv), "rhs": _show(rv),
                                          "lhs_term": lhs.label, "rhs_term": rhs.label}
                    break
            if res.status == "fail":
                break
    return LawReport(inst.name, tuple(str(t) for t in types), results)


def finite_type(n: int) -> ValueType:
    """A type with exactly ``n`` inhabitants: 0, 1, 1+1, 1+(1+1), ..."""
    if n <= 0:
        return S.ZERO
    t = ONE
    for _ in range(n - 1):
        t = Sum(ONE, t)
    return t
