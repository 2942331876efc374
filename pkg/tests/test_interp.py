import pytest
from hypothesis import given

from pio import interp
from pio import syntax as S
from pio.interp import Defined, Fuel, OutOfFuel, Undefined
from pio.parser import parse_combinator, parse_type, parse_value
from pio.syntax import ONE, Mu, Sum, Var
from strategies import typed_terms

NAT = Mu("n", Sum(ONE, Var("n")))


def run(src, val, **kw):
    return interp.run(parse_combinator(src), parse_value(val), **kw)


@pytest.mark.parametrize("src,val,out", [
    ("swap+", "inl ()", "inr ()"),
    ("distrib", "(inr (), ())", "inr ((), ())"),
    ("factor", "inl ((), inr ())", "(inl (), inr ())"),
    ("assocl+", "inr (inl ())", "inl (inr ())"),
    ("assocr*", "(((), inl ()), inr ())", "((), (inl (), inr ()))"),
    ("unitr+", "()", "inr ()"),
    ("unitl*", "((), inl ())", "inl ()"),
    ("swap* ; swap*", "((), inl ())", "((), inl ())"),
    ("trace(swap+)", "inl ()", "inl ()"),
    ("trace(swap+)", "inr ()", "inr ()"),
    ("inv(distrib)", "inl ((), ())", "(inl (), ())"),
])
def test_examples(src, val, out):
    assert run(src, val) == Defined(parse_value(out))


def test_fold_unfold():
    v = parse_value("fold inr fold inl ()")
    assert interp.run(S.UnfoldC(NAT), v) == Defined(parse_value("inr fold inl ()"))
    assert interp.run(S.FoldC(NAT), parse_value("inl ()")) == Defined(parse_value("fold inl ()"))


def test_trace_iterates_the_loop():
    # trace(assocl+ ; swap+) at 1 <-> 1 passes once through the loop
    c = parse_combinator("trace(assocl+ ; swap+)")
    r, steps = interp.evaluate(c, S.UNIT)
    assert r.defined and steps > 3


def test_divergent_trace_runs_out_of_fuel():
    c = parse_combinator("trace(fold[mu x. 1 + x] ; unitr+)")
    r = interp.run(c, S.UNIT, Fuel(max_trace_steps=25))
    assert isinstance(r, OutOfFuel)
    assert r.steps_used > 25
    assert not r.defined


def test_total_step_budget():
    c = parse_combinator("trace(fold[mu x. 1 + x] ; unitr+)")
    r = interp.run(c, S.UNIT, Fuel(max_trace_steps=10**6, max_total_steps=100))
    assert r == OutOfFuel(101)


def test_fuel_must_be_positive():
    with pytest.raises(ValueError):
        Fuel(max_trace_steps=0)


def test_ill_typed_input_is_an_internal_error():
    with pytest.raises(interp.InternalTypeError):
        run("swap+", "()")


def test_undefined_is_a_singleton_result():
    assert Undefined == interp.Undefined and not Undefined.defined


@given(typed_terms())
def test_backward_undoes_forward(t):
    c, dom, _ = t
    for v in interp.enumerate_values(dom):
        r = interp.run(c, v)
        assert isinstance(r, Defined)
        assert interp.run_backward(c, r.value) == Defined(v)


@given(typed_terms())
def test_generated_terms_are_bijections(t):
    c, dom, cod = t
    outs = [interp.run(c, v).value for v in interp.enumerate_values(dom)]
    assert sorted(map(str, outs)) == sorted(map(str, interp.enumerate_values(cod)))


def test_enumeration_order_and_cardinality():
    t = parse_type("(1 + 1) * (1 + 1 + 1)")
    vals = interp.enumerate_values(t)
    assert len(vals) == interp.cardinality(t) == 6
    assert vals[1] == parse_value("(inl (), inr inl ())")
    assert vals[3] == parse_value("(inr (), inl ())")
    with pytest.raises(ValueError):
        interp.enumerate_values(NAT)


@pytest.mark.parametrize("depth,count", [(0, 0), (1, 1), (2, 2), (3, 3), (4, 4)])
def test_nat_approximants(depth, count):
    assert len(interp.unroll_mu_approximant(NAT, depth)) == count


def test_tree_approximants_grow_like_catalan_closure():
    tree = parse_type("mu t. 1 + t * t")
    assert [len(interp.unroll_mu_approximant(tree, d)) for d in range(4)] == [0, 1, 2, 5]


def test_approximant_rejects_open_types():
    with pytest.raises(interp.NotPolynomial):
        interp.unroll_mu_approximant(Mu("x", Sum(Var("y"), Var("x"))), 2)
