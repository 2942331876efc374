from hypothesis import given
from hypothesis import strategies as st

from pio import syntax as S
from pio.syntax import ONE, ZERO, Mu, Prod, Sum, Var
from strategies import closed_combinators, open_types

NAT = Mu("n", Sum(ONE, Var("n")))


def test_alpha_equivalent_mu_types_are_equal():
    assert Mu("x", Sum(ONE, Var("x"))) == NAT
    assert hash(Mu("x", Sum(ONE, Var("x")))) == hash(NAT)
    assert Mu("x", Sum(ONE, Var("y"))) != Mu("y", Sum(ONE, Var("y")))


def test_free_vars_and_closedness():
    t = Mu("x", Prod(Var("x"), Var("a")))
    assert S.free_vars(t) == {"a"}
    assert not S.is_closed(t)
    assert S.is_closed(NAT)
    assert S.has_mu(Sum(ONE, NAT)) and not S.has_mu(Sum(ONE, ONE))


def test_unfold_mu_substitutes_the_type_itself():
    assert S.unfold_mu(NAT) == Sum(ONE, NAT)


def test_substitution_avoids_capture():
    # [x := y] (mu y. x + y) must not capture the free y
    t = S.substitute(Mu("y", Sum(Var("x"), Var("y"))), "x", Var("y"))
    assert S.free_vars(t) == {"y"}
    assert t == Mu("z", Sum(Var("y"), Var("z")))


@given(open_types(), st.sampled_from("abx"), open_types())
def test_substitute_free_vars(t, x, u):
    out = S.substitute(t, x, u)
    if x in S.free_vars(t):
        assert S.free_vars(out) == (S.free_vars(t) - {x}) | S.free_vars(u)
    else:
        assert out == t


@given(open_types(), st.sampled_from("abx"))
def test_substitute_variable_by_itself_is_identity(t, x):
    assert S.substitute(t, x, Var(x)) == t


def test_partner_table_pairs_inverse_combinators():
    assert S.structural_dagger(S.Distrib()) == S.Factor()
    assert S.structural_dagger(S.UnitLPlus()) == S.UnitRPlus()
    assert S.structural_dagger(S.Absorb()) == S.Unabsorb()
    assert S.structural_dagger(S.SwapTimes()) == S.SwapTimes()
    assert S.structural_dagger(S.FoldC(NAT)) == S.UnfoldC(NAT)


def test_dagger_reverses_composition():
    c = S.Comp(S.Distrib(), S.SwapPlus())
    assert S.structural_dagger(c) == S.Comp(S.SwapPlus(), S.Factor())


def _has_inv(c):
    return any(isinstance(x, S.Inv) for x in S.subterms(c))


@given(closed_combinators())
def test_dagger_is_an_involution_on_inv_free_terms(c):
    c = _inline_refs(c)
    e = S.eliminate_inv(c)
    assert not _has_inv(e)
    assert S.structural_dagger(S.structural_dagger(e)) == e


@given(closed_combinators())
def test_dagger_of_inv_is_the_body(c):
    c = _inline_refs(c)
    assert S.structural_dagger(S.Inv(c)) == S.eliminate_inv(c)
    assert S.eliminate_inv(S.Inv(c)) == S.structural_dagger(c)


def _inline_refs(c):
    if isinstance(c, S.Ref):
        return S.Id()
    kids = {f: _inline_refs(getattr(c, f)) for f in ("first", "second", "left", "right", "body")
            if isinstance(getattr(c, f, None), S.Combinator)}
    return type(c)(**kids) if kids else c


def test_dagger_rejects_unresolved_references():
    import pytest

    with pytest.raises(ValueError):
        S.structural_dagger(S.Ref("f"))


def test_fold_annotation_must_be_mu():
    import pytest

    with pytest.raises(TypeError):
        S.FoldC(Sum(ONE, ONE))


def test_fold_depth():
    v = S.Fold(S.InR(S.Fold(S.InL(S.UNIT))))
    assert S.fold_depth(v) == 2
    assert S.fold_depth(S.Pair(S.UNIT, v)) == 2
    assert S.fold_depth(S.UNIT) == 0
    assert ZERO != ONE
