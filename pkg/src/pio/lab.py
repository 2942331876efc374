"""Lab suites shared by the command line and the acceptance tests.

Every case records what is expected (``pass`` or ``fail``) and what
happened; a suite succeeds when every case meets its expectation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .finrel import chains as CH
from .finrel import corpus
from .finrel import groupoid as G
from .finrel import monoid as M
from .finrel.relation import random_relation
from .parser import parse_type

SUITES = ("frobenius", "fem", "kleisli", "ambilimit", "fixedpoint")


@dataclass
class Case:
    name: str
    expect: str
    outcome: str
    detail: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.expect == self.outcome

    def as_record(self) -> dict:
        return {"case": self.name, "expect": self.expect, "outcome": self.outcome,
                "ok": self.ok, "detail": self.detail}


@dataclass
class SuiteReport:
    suite: str
    cases: list[Case]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.cases)

    def records(self) -> dict:
        return {"suite": self.suite, "ok": self.ok, "cases": [c.as_record() for c in self.cases]}

    def lines(self) -> list[str]:
        out = []
        for c in self.cases:
            mark = "ok  " if c.ok else "BAD "
            line = f"{mark}{c.name}: {c.outcome} (expected {c.expect})"
            w = c.detail.get("witness")
            if w:
                line += f" witness {w}"
            out.append(line)
        n_ok = sum(c.ok for c in self.cases)
        out.append(f"{self.suite}: {n_ok}/{len(self.cases)} cases as expected")
        return out


def _outcome(flag: bool) -> str:
    return "pass" if flag else "fail"


def _first_failure(verdicts):
    return next((v for v in verdicts if not v.ok), None)


def frobenius_suite() -> SuiteReport:
    cases = []
    for g in corpus.groupoid_corpus():
        m = M.groupoid_to_frobenius(g)
        bad = _first_failure(m.check_laws() + [M.check_frobenius(m)])
        cases.append(Case(f"groupoid {g.name}", "pass", _outcome(bad is None),
                          {"carrier": m.carrier, "witness": bad and bad.witness}))
    pinned = corpus.load_file("monoids.grid")["and"]
    laws_ok = pinned.is_monoid()
    v = M.check_frobenius(pinned)
    cases.append(Case("monoid and (non-groupoid)", "fail", _outcome(laws_ok and v.ok),
                      {"is_monoid": laws_ok, "law": v.law, "witness": v.witness}))
    return SuiteReport("frobenius", cases)


def kleisli_suite(samples: int = 200, seed: int = 0) -> SuiteReport:
    rng = np.random.default_rng(seed)
    monoids = [M.groupoid_to_frobenius(g) for g in corpus.groupoid_corpus() if g.morphisms]
    inv_fail = con_fail = None
    for k in range(samples):
        m = monoids[k % len(monoids)]
        x, y, z = (int(v) for v in rng.integers(1, 4, 3))
        f = random_relation(rng, x, y * m.carrier)
        h = random_relation(rng, y, z * m.carrier)
        if inv_fail is None and M.kleisli_dagger(M.kleisli_dagger(f, m), m) != f:
            inv_fail = {"monoid": m.name, "f": f.pairs()}
        lhs = M.kleisli_dagger(M.kleisli_compose(m, h, f), m)
        rhs = M.kleisli_compose(m, M.kleisli_dagger(f, m), M.kleisli_dagger(h, m))
        if con_fail is None and lhs != rhs:
            con_fail = {"monoid": m.name, "f": f.pairs(), "g": h.pairs()}
    # the Kleisli identity eta is fixed by the dagger
    eta_ok = all(M.kleisli_dagger(M.eta(m, 2), m) == M.eta(m, 2) for m in monoids)
    return SuiteReport("kleisli", [
        Case(f"involution on {samples} random relations", "pass", _outcome(inv_fail is None),
             {"witness": inv_fail}),
        Case(f"contravariance on {samples} random pairs", "pass", _outcome(con_fail is None),
             {"witness": con_fail}),
        Case("dagger of the Kleisli identity", "pass", _outcome(eta_ok)),
    ])


def fem_suite() -> SuiteReport:
    cases = []
    for g in corpus.groupoid_corpus():
        m = M.groupoid_to_frobenius(g)
        for x in (1, 2):
            alg = M.free_algebra(m, x)
            v = M.check_fem(alg)
            cases.append(Case(f"free algebra {g.name} x {x}", "pass", _outcome(alg.is_em() and v.ok),
                              {"witness": v.witness}))
        if g.objects:
            acts = [G.representable_action(g, o) for o in range(g.objects)]
            act = G.sum_actions(*acts, G.trivial_action(g))
            alg = M.action_algebra(act)
            v = M.check_fem(alg)
            cases.append(Case(f"action algebra {g.name} ({act.size} points)", "pass",
                              _outcome(alg.is_em() and v.ok), {"witness": v.witness}))
    pinned = corpus.load_file("monoids.grid")["em-not-fem"]
    v = M.check_fem(pinned)
    cases.append(Case("pinned em-not-fem", "fail", _outcome(not pinned.is_em() or v.ok),
                      {"is_em": pinned.is_em(), "witness": v.witness}))
    return SuiteReport("fem", cases)


def ambilimit_suite() -> SuiteReport:
    cases = []
    chains = corpus.load_file("chains.grid")
    expect = {"pfn-correct-6": "pass", "pfn-min-6": "fail"}
    for name, c in chains.items():
        rep = CH.check_ambilimit_laws(c)
        failed = [r for r in rep.results if not r.ok]
        cases.append(Case(f"chain {name}", expect.get(name, "pass"), _outcome(not failed),
                          {"failed": [r.name for r in failed],
                           "witness": failed[0].counterexample if failed else None}))
    rep = CH.check_ambilimit_laws(CH.identity_chain(3, 4))
    cases.append(Case("identity chain", "pass", _outcome(rep.ok)))
    for src in ("mu x. 1 + x", "mu x. 1 + x * x", "mu x. (1 + 1) * x"):
        rep = CH.check_ambilimit_laws(CH.adamek_approximant(parse_type(src), 4).chain())
        cases.append(Case(f"adamek chain {src}", "pass", _outcome(rep.ok)))
    return SuiteReport("ambilimit", cases)


def fixedpoint_suite() -> SuiteReport:
    from . import interp

    t = parse_type("mu x. 1 + x")
    sizes = CH.adamek_approximant(t, 5).sizes
    counts = tuple(len(interp.unroll_mu_approximant(t, d)) for d in range(5))
    cases = [Case("sizes of 1 + X", "pass", _outcome(sizes == (0, 1, 2, 3, 4) and counts == sizes),
                  {"adamek": list(sizes), "interp": list(counts)})]
    for src in ("mu x. 1 + x", "mu x. 1 + x * x", "mu x. (1 + 1) * x", "mu x. 1", "mu x. x"):
        rep = CH.check_initial_algebra_approx(parse_type(src), 4)
        cases.append(Case(f"initial algebra {src}", "pass", _outcome(rep.ok),
                          {"sizes": list(rep.sizes), "problems": rep.problems}))
    return SuiteReport("fixedpoint", cases)


def run_suite(name: str) -> SuiteReport:
    table = {"frobenius": frobenius_suite, "fem": fem_suite, "kleisli": kleisli_suite,
             "ambilimit": ambilimit_suite, "fixedpoint": fixedpoint_suite}
    if name not in table:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return table[name]()
