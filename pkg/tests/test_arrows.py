import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pio import arrows as A
from pio import interp
from pio import syntax as S
from pio.interp import Defined, Undefined
from pio.parser import parse_combinator, parse_value
from pio.syntax import ONE, Prod, Sum

B = Sum(ONE, ONE)
T3 = A.finite_type(3)


def test_finite_type_sizes():
    assert [interp.cardinality(A.finite_type(n)) for n in range(5)] == [0, 1, 2, 3, 4]


@given(st.integers(0, 10**6))
def test_random_revfuns_are_partial_inverses(seed):
    f = A.random_revfun(random.Random(seed), T3, A.finite_type(4))
    assert not A.check_partial_inverse(f, interp.enumerate_values(T3),
                                       interp.enumerate_values(A.finite_type(4)))
    assert f.dagger.dagger.forward is f.forward


def test_rev_from_combinator_and_compose():
    f = A.rev_from_combinator(parse_combinator("swap+"), B, B)
    g = A.rev_compose(f, f)
    for v in interp.enumerate_values(B):
        assert g(v) == Defined(v)
    assert f(parse_value("inl ()")) == Defined(parse_value("inr ()"))


def test_rev_from_mapping_rejects_non_injective():
    with pytest.raises(ValueError):
        A.rev_from_mapping(B, ONE, {S.InL(S.UNIT): S.UNIT, S.InR(S.UNIT): S.UNIT})


def test_lists_and_zip():
    xs = A.from_list([S.UNIT, S.InL(S.UNIT)])
    assert A.to_list(xs) == [S.UNIT, S.InL(S.UNIT)]
    pairs = A.from_list([S.Pair(S.UNIT, S.InL(S.UNIT))])
    r = A.unzip_lists(pairs)
    assert r.defined
    assert A.zip_lists(r.value) == Defined(pairs)
    # lists of different lengths do not zip
    assert A.zip_lists(S.Pair(A.from_list([S.UNIT]), A.NIL)) == Undefined


@pytest.mark.parametrize("name", ["pure", "rstate", "reader", "rewriter", "serializer"])
def test_full_instances_pass_every_law(name):
    rep = A.check_laws(A.INSTANCES[name](), (B, T3, B), trials=2)
    assert rep.ok, rep.lines()
    assert all(r.status == "pass" and r.checked > 0 for r in rep.results.values())


def test_error_is_a_weak_arrow():
    inst = A.INSTANCES["error"]()
    assert inst.weak
    rep = A.check_laws(inst, (B, T3, B), trials=2)
    assert rep.ok
    assert {k for k, r in rep.results.items() if r.status == "n/a"} == A.FIRST_LAWS
    with pytest.raises(A.NotSupported):
        inst.second(inst.arr(A.rev_identity(B)), B)


def test_vector_laws_on_short_lists():
    rep = A.check_laws(A.INSTANCES["vector"](), (B, B, B), trials=2)
    assert rep.ok, rep.lines()


def test_broken_inverse_is_caught():
    rep = A.check_laws(A.mk_broken(), (T3, T3, B), trials=4)
    assert not rep.ok
    assert "daggerarrow3" in rep.failed()
    ce = rep.results["daggerarrow3"].counterexample
    assert ce["lhs"] != ce["rhs"]


def test_rstate_update_and_state_threading():
    inst = A.INSTANCES["rstate"]()
    flip = A.rev_from_combinator(parse_combinator("swap+"), B, B)
    up = inst.helpers["update"](flip)
    v = S.Pair(S.UNIT, S.InL(S.UNIT))
    assert up(v) == Defined(S.Pair(S.UNIT, S.InR(S.UNIT)))
    assert inst.inv(up)(up(v).value) == Defined(v)


def test_reader_invariance():
    inst = A.INSTANCES["reader"]()
    check = inst.helpers["check_invariance"]
    good = inst.arr(A.rev_identity(B))
    assert check(good).ok
    flip_ctx = A.RevFun(B, B, lambda v: Defined(S.Pair(v.first, S.InR(S.UNIT))),
                        lambda v: Defined(v), "clobber")
    assert not check(flip_ctx).ok
    with pytest.raises(A.InvarianceViolation):
        inst.helpers["require_invariant"](flip_ctx)


def test_rewriter_group_action():
    inst = A.INSTANCES["rewriter"]()
    g = inst.helpers["group"]
    one = g.elements()[1]
    rw = inst.helpers["rewrite"](one)
    v = S.Pair(S.UNIT, g.gunit)
    assert rw(rw(v).value) == Defined(v)  # Z/2: adding 1 twice is the identity


def test_group_validation():
    A.cyclic_group(4).validate()
    with pytest.raises(A.GroupLawViolation):
        A.table_group(B, [[0, 1], [0, 1]])  # two elements share an inverse
    # rows are permutations but 0 is not a unit
    with pytest.raises(A.GroupLawViolation):
        A.table_group(B, [[1, 0], [0, 1]]).validate()


def test_error_raise_and_handle():
    inst = A.INSTANCES["error"]()
    e = inst.state_type
    f = A.rev_from_mapping(ONE, e, {S.UNIT: S.InL(S.UNIT)})
    p = A.rev_from_mapping(e, Sum(e, e), {S.InL(S.UNIT): S.InL(S.InL(S.UNIT)),
                                          S.InR(S.UNIT): S.InR(S.InR(S.UNIT))})
    r = inst.helpers["raise"](f, p)
    out = r(S.InL(S.UNIT))
    assert out == Defined(S.InR(S.InL(S.UNIT)))
    assert inst.helpers["handle"](f, p)(out.value) == Defined(S.InL(S.UNIT))


def test_error_choice_laws_are_enforced():
    inst = A.INSTANCES["error"]()
    e = inst.state_type
    f = A.rev_from_mapping(ONE, e, {S.UNIT: S.InL(S.UNIT)})
    # p sends f's output to the right: violates p f = i1 f
    p = A.rev_from_mapping(e, Sum(e, e), {S.InL(S.UNIT): S.InR(S.InL(S.UNIT))})
    with pytest.raises(A.ChoiceLawViolation):
        inst.helpers["raise"](f, p)


def test_serializer_codec_is_strict():
    codec = A.default_codec(B)
    assert codec(S.InL(S.UNIT)) == Defined("inl ()")
    assert codec.backward("inl ()") == Defined(S.InL(S.UNIT))
    assert codec.backward("inl  ()") == Undefined
    assert codec.backward("((), ())") == Undefined


def test_serializer_rejects_lossy_codecs():
    def lossy(x):
        return A.RevFun(x, "text", lambda v: Defined("same"), lambda t: Undefined, "lossy")
    inst = A.mk_serializer(lossy)
    with pytest.raises(A.CodecNotInjective):
        inst.arr(A.rev_identity(B))


def test_left_for_pure_and_unsupported_instances():
    left = A.mk_left(A.mk_pure())
    flip = A.rev_from_combinator(parse_combinator("swap+"), B, B)
    l = left(flip, ONE)
    assert l(S.InL(S.InL(S.UNIT))) == Defined(S.InL(S.InR(S.UNIT)))
    assert l(S.InR(S.UNIT)) == Defined(S.InR(S.UNIT))
    with pytest.raises(A.NotSupported):
        A.mk_left(A.mk_serializer())


def test_structural_maps():
    rho = A.rev_structural("rho", B)
    assert rho(S.Pair(S.InL(S.UNIT), S.UNIT)) == Defined(S.InL(S.UNIT))
    alpha = A.rev_structural("alpha", ONE, ONE, ONE)
    v = S.Pair(S.UNIT, S.Pair(S.UNIT, S.UNIT))
    assert alpha.dagger(alpha(v).value) == Defined(v)
    assert Prod(ONE, ONE) == alpha.type_in.right
