import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pio.finrel import chains as CH
from pio.finrel import corpus
from pio.finrel import groupoid as G
from pio.finrel import monoid as M
from pio.finrel.relation import Relation, compose, identity, oplus, random_relation, seq, tensor
from pio.parser import parse_type


@st.composite
def relations(draw, dom=None, cod=None):
    dom = draw(st.integers(0, 4)) if dom is None else dom
    cod = draw(st.integers(0, 4)) if cod is None else cod
    rng = np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
    return random_relation(rng, dom, cod, density=draw(st.sampled_from([0.2, 0.5, 0.8])))


# --- a set-of-pairs oracle, independent of the matrix code -----------------


def pairs(r):
    return set(r.pairs())


def pcompose(s, r):
    return {(a, c) for a, b in r for b2, c in s if b == b2}


def ptensor(r, s, n_dom2, n_cod2):
    return {(a * n_dom2 + c, b * n_cod2 + d) for a, b in r for c, d in s}


def pid(n):
    return {(i, i) for i in range(n)}


def pdagger(r):
    return {(b, a) for a, b in r}


def frobenius_oracle(m):
    n, mu = m.carrier, pairs(m.mult)
    middle = pcompose(pdagger(mu), mu)
    left = pcompose(ptensor(mu, pid(n), n, n), ptensor(pid(n), pdagger(mu), n, n * n))
    right = pcompose(ptensor(pid(n), mu, n * n, n), ptensor(pdagger(mu), pid(n), n, n))
    return left == middle == right


def fem_oracle(alg):
    b = alg.monoid.carrier
    a = pairs(alg.action)
    mu_a = ptensor(pid(alg.carrier), pairs(alg.monoid.mult), b * b, b)
    r = pcompose(ptensor(a, pid(b), b, b), pdagger(mu_a))
    return r == pdagger(r)


# --- relations ------------------------------------------------------------


@given(relations(3, 4), relations(4, 2), relations(2, 3))
def test_composition_is_associative_and_matches_pairs(r, s, t):
    assert compose(t, compose(s, r)) == compose(compose(t, s), r)
    assert pairs(compose(s, r)) == pcompose(pairs(s), pairs(r))
    assert seq(r, s, t) == compose(t, compose(s, r))


@given(relations(3, 4), relations(4, 2))
def test_dagger_is_contravariant_and_involutive(r, s):
    assert compose(s, r).dagger == compose(r.dagger, s.dagger)
    assert r.dagger.dagger == r
    assert pairs(r.dagger) == pdagger(pairs(r))


@given(relations(2, 3), relations(3, 2))
def test_tensor_matches_pairs(r, s):
    assert pairs(tensor(r, s)) == ptensor(pairs(r), pairs(s), 3, 2)
    assert tensor(r, s).dagger == tensor(r.dagger, s.dagger)


@given(relations())
def test_identity_and_oplus(r):
    assert compose(identity(r.cod), r) == r == compose(r, identity(r.dom))
    both = oplus(r, identity(2))
    assert (both.dom, both.cod) == (r.dom + 2, r.cod + 2)


def test_relations_are_immutable_and_ordered():
    r = Relation.from_pairs(2, 2, [(0, 1)])
    with pytest.raises(ValueError):
        r.matrix[0, 0] = True
    assert r <= Relation.from_pairs(2, 2, [(0, 1), (1, 1)])
    assert r.image(0) == {1}


# --- groupoids and Frobenius monoids --------------------------------------


def test_small_groupoid_census():
    gs = G.all_small_groupoids(3, 6)
    assert len(gs) == 31
    assert len({g.name for g in gs}) == 31
    assert all(g.objects <= 3 and g.morphisms <= 6 for g in gs)
    assert {"empty", "Z1", "S3", "Z6", "Z1^2", "Z2+Z1^2", "Z1+Z1+Z1"} <= {g.name for g in gs}


def test_invalid_groupoid_is_rejected():
    z2 = G.from_components("Z2", [(1, G.GROUPS["Z2"])])
    bad = G.FiniteGroupoid("bad", 1, z2.src, z2.tgt, dict(z2.comp, **{}), z2.ident, (1, 0))
    with pytest.raises(G.InvalidGroupoid):
        bad.validate()


@pytest.mark.parametrize("g", G.all_small_groupoids(3, 6), ids=lambda g: g.name)
def test_groupoids_give_frobenius_monoids(g):
    m = M.groupoid_to_frobenius(g)
    assert m.is_monoid()
    assert M.check_frobenius(m).ok
    assert frobenius_oracle(m)


def test_and_monoid_is_not_frobenius():
    m = M.AND_MONOID
    assert m.is_monoid()
    v = M.check_frobenius(m)
    assert not v.ok and not frobenius_oracle(m)
    # (mu*1)(1*mu') sends (0,1) only to (0,1); mu'mu also reaches (0,0)
    assert v.witness == {"input": (0, 1), "output": (0, 0), "lhs": False, "rhs": True}


def test_every_frobenius_monoid_on_two_points_passes_the_oracle():
    for m in M.all_rel_monoids(2):
        assert M.check_frobenius(m).ok == frobenius_oracle(m), m.name


# --- Kleisli dagger --------------------------------------------------------


@pytest.mark.parametrize("name", ["Z2", "Z3", "Z1^2", "Z1+Z2"])
def test_kleisli_dagger_is_involutive_and_contravariant(name):
    g = next(x for x in G.all_small_groupoids() if x.name == name)
    m = M.groupoid_to_frobenius(g)
    b = m.carrier
    rng = np.random.default_rng(7)
    for _ in range(20):
        f = random_relation(rng, 2, 3 * b)
        h = random_relation(rng, 3, 2 * b)
        assert M.kleisli_dagger(M.kleisli_dagger(f, m), m) == f
        lhs = M.kleisli_dagger(M.kleisli_compose(m, h, f), m)
        rhs = M.kleisli_compose(m, M.kleisli_dagger(f, m), M.kleisli_dagger(h, m))
        assert lhs == rhs


# --- algebras --------------------------------------------------------------


@pytest.mark.parametrize("g", G.all_small_groupoids(3, 6)[1:], ids=lambda g: g.name)
def test_free_and_action_algebras_are_fem(g):
    m = M.groupoid_to_frobenius(g)
    for x in (1, 2):
        alg = M.free_algebra(m, x)
        assert alg.is_em() and M.check_fem(alg).ok and fem_oracle(alg)
    reps = [G.representable_action(g, a) for a in range(g.objects)]
    act = G.sum_actions(G.trivial_action(g), *reps)
    alg = M.action_algebra(act)
    assert alg.is_em() and M.check_fem(alg).ok and fem_oracle(alg)


def test_pinned_em_not_fem_algebra():
    alg = corpus.load_file("monoids.grid")["em-not-fem"]
    assert alg.monoid.is_monoid() and alg.is_em()
    v = M.check_fem(alg)
    assert not v.ok and not fem_oracle(alg)
    assert v.witness["input"] == (1, 1) and v.witness["output"] == (0, 0)


def test_search_finds_the_pinned_algebra():
    found = M.search_em_not_fem()
    pinned = corpus.load_file("monoids.grid")["em-not-fem"]
    assert found.name == "rel2:97:1/alg2:73"
    assert found.action == pinned.action and found.monoid.mult == pinned.monoid.mult


# --- chains and fixed points ----------------------------------------------


def test_correct_pfn_chain_is_an_ambilimit():
    rep = CH.check_ambilimit_laws(CH.pfn_chain(6, "correct"))
    assert rep.ok, rep.lines()


def test_min_splitting_fails_only_embedding_projection():
    rep = CH.check_ambilimit_laws(CH.pfn_chain(6, "min"))
    assert [r.name for r in rep.results if not r.ok] == ["embedding-projection"]
    assert rep.get("embedding-projection").counterexample["n"] == 1


@pytest.mark.parametrize("src,sizes", [
    ("mu x. 1 + x", (0, 1, 2, 3, 4)),
    ("mu x. 1 + x * x", (0, 1, 2, 5, 26)),
    ("mu x. (1 + 1) * x", (0, 0, 0, 0, 0)),
])
def test_adamek_sizes(src, sizes):
    assert CH.adamek_approximant(parse_type(src), 5).sizes == sizes


@pytest.mark.parametrize("src", ["mu x. 1 + x", "mu x. 1 + x * x", "mu x. (1 + 1) * x",
                                 "mu l. 1 + (1 + 1) * l"])
def test_initial_algebra_approximation(src):
    rep = CH.check_initial_algebra_approx(parse_type(src), 4)
    assert rep.ok, rep.problems
    assert rep.sizes == rep.interp_sizes


def test_polynomial_rejects_nested_mu():
    with pytest.raises(CH.NotPolynomial):
        CH.Polynomial(parse_type("1 + mu y. 1 + y"), "x").validate()
    with pytest.raises(CH.NotPolynomial):
        CH.Polynomial(parse_type("1 + y"), "x").validate()


# --- corpus ---------------------------------------------------------------


def test_lab_corpus_matches_its_generators():
    for name, text in corpus.generated_files().items():
        assert (corpus.corpus_dir() / "lab" / name).read_text() == text, name


def test_corpus_round_trip():
    gs = corpus.groupoid_corpus()
    assert [g.name for g in gs] == [g.name for g in G.all_small_groupoids()]
    for g, h in zip(gs, G.all_small_groupoids()):
        assert g == h
    text = corpus.dump_monoid(M.AND_MONOID)
    assert corpus.load(text)["and"].mult == M.AND_MONOID.mult


def test_corpus_rejects_malformed_blocks():
    with pytest.raises(corpus.CorpusError):
        corpus.load("monoid m\ncarrier 2\nmult\n0 0\n")
