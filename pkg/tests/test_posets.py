import itertools
from fractions import Fraction

import pytest

from ctrlk.control import ControlSpace
from ctrlk.errors import CycleDetected, NoOrderExists, NotNested
from ctrlk.posets import (antichain, find_common_order, image_partial_order,
                          is_epsilon_bounded, shuffle_orders, validate_poset)


def line_space(n=11, spacing=1):
    edges = [[f"p{i}", f"p{i+1}", spacing] for i in range(n - 1)]
    return ControlSpace.graph([f"p{i}" for i in range(n)], edges)


def test_validate_poset_transitivity():
    p = validate_poset([("a", "b"), ("b", "c")])
    assert p.less("a", "c")
    assert not p.less("c", "a")


def test_validate_poset_cycle():
    with pytest.raises(CycleDetected) as err:
        validate_poset([("a", "b"), ("b", "a")])
    assert "a" in err.value.witness


def test_validate_poset_antichain():
    p = validate_poset([], elements=["a", "b"])
    assert p.elements == {"a", "b"}
    assert not p.pairs


def test_find_common_order_minimal():
    p = find_common_order([("a", "b")])
    assert p.pairs == {("a", "b")}
    with pytest.raises(NoOrderExists):
        find_common_order([("a", "b"), ("b", "a")])


def test_find_common_order_matches_total_order_search():
    # constraints from requiring both a 1-lower and a 1-upper matrix to be
    # triangular on two elements: no common order exists
    constraints = [("a", "b"), ("b", "a")]
    found = True
    try:
        find_common_order(constraints)
    except NoOrderExists:
        found = False
    brute = any(all(order.index(x) < order.index(y) for (x, y) in constraints)
                for order in itertools.permutations(["a", "b"]))
    assert found == brute is False


def test_exhaustive_small_order_agreement():
    import random
    rng = random.Random(7)
    labels = ["a", "b", "c", "d"]
    for _ in range(200):
        constraints = [(rng.choice(labels), rng.choice(labels)) for _ in range(3)]
        constraints = [(x, y) for (x, y) in constraints if x != y]
        try:
            find_common_order(constraints, elements=labels)
            found = True
        except NoOrderExists:
            found = False
        brute = any(
            all(perm.index(x) < perm.index(y) for (x, y) in constraints)
            for perm in (list(p) for p in itertools.permutations(labels)))
        assert found == brute


def test_epsilon_bounded_antichain():
    space = line_space()
    p = antichain(["a", "b"])
    rep = is_epsilon_bounded(p, {"a": "p0", "b": "p10"}, 1, space)
    assert rep.epsilon_bounded
    assert rep.max_chain_length == {"a": 1, "b": 1}


def test_epsilon_bounded_violation():
    space = line_space()
    p = validate_poset([("a", "b")])
    bad = is_epsilon_bounded(p, {"a": "p0", "b": "p10"}, 1, space)
    assert not bad.epsilon_bounded
    assert bad.violating_element == "a"
    ok = is_epsilon_bounded(p, {"a": "p0", "b": "p1"}, 2, space)
    assert ok.epsilon_bounded
    assert ok.max_chain_length["a"] == 2


def test_image_partial_order_examples():
    assert image_partial_order([{"x", "y"}]).pairs == frozenset()
    p = image_partial_order([set(), {"x"}, {"x", "y"}])
    assert p.pairs == {("y", "x")}
    q = image_partial_order([{"a"}, {"a", "b"}, {"a", "b", "c"}])
    assert q.less("c", "b") and q.less("b", "a") and q.less("c", "a")
    with pytest.raises(NotNested):
        image_partial_order([{"x"}, {"y"}])


def test_image_partial_order_per_degree():
    p = image_partial_order({0: [{"x"}, {"x", "y"}], 1: [{"u"}, {"u", "v"}]})
    assert p.less("y", "x") and p.less("v", "u")
    assert not p.comparable("y", "u")


def test_shuffle_orders_uncontrolled():
    pc = antichain(["s"])
    psc = antichain(["t"])
    out = shuffle_orders(pc, psc, ([], []))
    assert out.less("t", "s")
    empty = shuffle_orders(pc, antichain([]), ([], []))
    assert empty.pairs == frozenset()


def test_shuffle_orders_distance_gate():
    space = line_space()
    pc, psc = antichain(["s"]), antichain(["t"])
    loc = (space, {"s": "p0", "t": "p3"})
    near = shuffle_orders(pc, psc, ([], []), loc=loc, epsilon=1)   # 3 < 5
    assert near.less("t", "s")
    far = shuffle_orders(pc, psc, ([], []), loc=loc, epsilon=Fraction(3, 5))
    assert not far.comparable("t", "s")


def test_shuffle_orders_image_condition():
    # s only joins the order above t when s sits at least as deep
    pc = antichain(["s_deep", "s_new"])
    psc = antichain(["t"])
    images = ([{"s_deep"}], [{"t"}])
    out = shuffle_orders(pc, psc, images)
    assert out.less("t", "s_deep")
    assert not out.comparable("t", "s_new")


def test_shuffle_orders_chain_diameter():
    # both sides epsilon-bounded: every increasing chain stays within 7 eps
    from fractions import Fraction
    eps = Fraction(1)
    space = line_space(12)
    pc = validate_poset([("c0", "c1")])
    psc = validate_poset([("t0", "t1")])
    loc_map = {"c0": "p6", "c1": "p7", "t0": "p2", "t1": "p3"}
    assert is_epsilon_bounded(pc, loc_map, 2 * eps, space).epsilon_bounded
    out = shuffle_orders(pc, psc, ([], []), loc=(space, loc_map), epsilon=eps)
    chains = []
    for a in out.elements:
        for b in out.above(a):
            chains.append((a, b))
            assert space.distance(loc_map[a], loc_map[b]) < 7 * eps
    assert ("t1", "c0") in out.pairs
