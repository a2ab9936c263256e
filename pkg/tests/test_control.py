import random
from fractions import Fraction

import pytest

from ctrlk.control import (ControlSpace, SampledPath, check_excision, enlarge,
                           frontier_enlargement, path_radius, reduce)
from ctrlk.errors import DocumentError, UnknownPoint


def line(n, spacing=1, frontier=None):
    pts = [f"p{i}" for i in range(n)]
    edges = [[f"p{i}", f"p{i+1}", spacing] for i in range(n - 1)]
    return ControlSpace.graph(pts, edges, frontier)


def test_metric_axioms_on_graph():
    space = line(4)
    assert space.distance("p0", "p0") == 0
    assert space.distance("p0", "p3") == 3
    assert space.distance("p3", "p0") == 3
    for a in space.points:
        for b in space.points:
            for c in space.points:
                assert space.distance(a, c) <= space.distance(a, b) + space.distance(b, c)


def test_path_radius_basics():
    space = line(5)
    assert path_radius(["p2"], space) == 0
    assert path_radius(["p0", "p1", "p2"], space) == 2
    euclid = ControlSpace.euclidean({"a": [0.0], "b": [0.4], "c": [0.9]})
    assert path_radius(["a", "b", "c"], euclid) == pytest.approx(0.9)


def test_path_radius_triangle_inequality_for_concatenation():
    space = line(8)
    first = ["p0", "p1", "p2"]
    second = ["p2", "p3"]
    r1 = path_radius(first, space)
    r2 = path_radius(second, space)
    assert path_radius(first + second[1:], space) <= r1 + r2


def test_path_radius_folds_heavy_edges():
    # shortcut through c makes d(a, b) = 2 but the direct edge weighs 10
    space = ControlSpace.graph(["a", "b", "c"],
                               [["a", "b", 10], ["a", "c", 1], ["c", "b", 1]])
    assert path_radius(["a", "b"], space) == 10
    assert path_radius(["a", "c", "b"], space) == 2


def test_path_adjacency_enforced():
    space = line(4)
    with pytest.raises(DocumentError):
        path_radius(["p0", "p2"], space)
    with pytest.raises(UnknownPoint):
        path_radius(["p0", "zz"], space)


def test_enlarge_examples():
    space = line(4)
    assert enlarge(space, {"p0"}, 0) == {"p0"}
    assert enlarge(space, {"p0"}, Fraction(3, 2)) == {"p0", "p1"}
    assert enlarge(space, set(space.points), 1) == set(space.points)
    assert enlarge(space, {"p0"}, Fraction(5, 2)) == {"p0", "p1", "p2"}


def test_enlarge_monotone():
    space = line(7)
    small = enlarge(space, {"p0"}, 2)
    big = enlarge(space, {"p0"}, 3)
    assert small <= big
    wider = enlarge(space, {"p0", "p5"}, 2)
    assert small <= wider
    assert {"p0"} <= enlarge(space, {"p0"}, Fraction(1, 10))


def test_reduce_examples():
    space = line(6)
    assert reduce(space, set(space.points), 2) == set(space.points)
    assert reduce(space, {"p0", "p1", "p2"}, Fraction(3, 2)) == {"p0", "p1"}
    assert reduce(space, set(), 1) == set()
    assert reduce(space, {"p0", "p1"}, 1) <= {"p0", "p1"}


def test_frontier_enlargement():
    compact = line(4)
    assert frontier_enlargement(compact, 1) == set()
    # discretized open interval (0,1) with both ends ideal
    pts = {f"q{i}": Fraction(i + 1, 5) for i in range(4)}  # 0.2 .. 0.8
    space = ControlSpace.graph(
        list(pts),
        [[f"q{i}", f"q{i+1}", Fraction(1, 5)] for i in range(3)],
        frontier=[
            {"id": "end0", "dist": {q: v for q, v in pts.items()}},
            {"id": "end1", "dist": {q: 1 - v for q, v in pts.items()}},
        ])
    near = frontier_enlargement(space, Fraction(1, 4))
    assert near == {"q0", "q3"}
    assert frontier_enlargement(space, 0) == set()
    assert frontier_enlargement(space, Fraction(1, 2)) == {"q0", "q1", "q2", "q3"}


def test_excision_trivial_cases():
    space = line(5)
    everything = set(space.points)
    rep = check_excision(space, everything, 2)
    assert rep.equal and rep.inside == ()
    rep = check_excision(space, set(), 2)
    assert rep.equal and rep.inside == ()


def random_graph_space(rng, max_points=12):
    n = rng.randrange(3, max_points)
    pts = [f"v{i}" for i in range(n)]
    edges = []
    for i in range(1, n):
        j = rng.randrange(i)
        edges.append([pts[i], pts[j], rng.randrange(1, 5)])
    extra = rng.randrange(0, n)
    for _ in range(extra):
        a, b = rng.sample(pts, 2)
        edges.append([a, b, rng.randrange(1, 6)])
    return ControlSpace.graph(pts, edges)


def test_excision_randomised():
    rng = random.Random(23)
    for _ in range(60):
        space = random_graph_space(rng)
        size = rng.randrange(0, len(space.points) + 1)
        subset = set(rng.sample(list(space.points), size))
        eps = Fraction(rng.randrange(1, 9), rng.choice([1, 2]))
        rep = check_excision(space, subset, eps)
        assert rep.equal, (space.to_json(), sorted(subset), eps, rep)


def test_contractive_map_enlargement_bound():
    # d(x, x') < delta implies d(fx, fx') < eps gives f(W^delta) in (fW)^eps
    rng = random.Random(31)
    for _ in range(30):
        space = random_graph_space(rng)
        target = ControlSpace.euclidean(
            {p: [rng.uniform(0, 4), rng.uniform(0, 4)] for p in space.points})
        delta = Fraction(rng.randrange(1, 6))
        # smallest eps making the hypothesis true for the identity point map
        worst = max((target.distance(a, b)
                     for a in space.points for b in space.points
                     if space.distance(a, b) < delta), default=0.0)
        eps = worst + 1e-6
        seeds = set(rng.sample(list(space.points), 2))
        enlarged = enlarge(space, seeds, delta)
        image_targets = enlarge(target, seeds, eps)
        assert enlarged <= image_targets


def test_restrict_keeps_ambient_distances():
    space = ControlSpace.graph(["a", "b", "c"],
                               [["a", "b", 10], ["a", "c", 1], ["c", "b", 1]])
    sub = space.restrict({"a", "b"})
    # ambient shortest path through c survives restriction
    assert sub.distance("a", "b") == 2
    assert path_radius(["a", "b"], sub) == 10


def test_reversed_path():
    p = SampledPath(("a", "b", "c"))
    assert p.reversed().samples == ("c", "b", "a")
