import random

import pytest

from ctrlk.errors import (DiagonalNotInvertible, NotASubbasis, NotDiagonal,
                          NotTriangular, ShapeMismatch)
from ctrlk.modules import (add, based_module, compose, decompose_triangular,
                           factor_elementary, from_matrix, identity,
                           invert_triangular, is_U_diagonal, morphism, perp,
                           subtract, to_matrix, zero_morphism)
from ctrlk.posets import antichain, validate_poset
from ctrlk.rings import (Ring, UnitSubgroup, identity_matrix, matrix_eq,
                         ring_matrix_inverse_oracle)

Z = Ring.integers()
Z5 = Ring.integers_mod(5)
Z7 = Ring.integers_mod(7)


def test_perp():
    mod = based_module(Z, ["x", "y", "z"])
    assert perp(mod, {"x", "y", "z"}).basis == ()
    assert perp(mod, set()).basis == ("x", "y", "z")
    assert perp(mod, {"y"}).basis == ("x", "z")
    with pytest.raises(NotASubbasis):
        perp(mod, {"w"})


def test_is_U_diagonal():
    mod = based_module(Z, ["a", "b"])
    one = UnitSubgroup(Z, "one")
    assert is_U_diagonal(identity(mod), one) == {"a": "a", "b": "b"}
    swap = morphism(mod, mod, {("a", "b"): 1, ("b", "a"): 1})
    assert is_U_diagonal(swap, one) == {"a": "b", "b": "a"}
    shear = morphism(mod, mod, {("a", "a"): 1, ("a", "b"): 1, ("b", "b"): 1})
    with pytest.raises(NotDiagonal):
        is_U_diagonal(shear, one)


def test_decompose_triangular_example():
    mod = based_module(Z7, ["a", "b"])
    order = validate_poset([("a", "b")])
    allu = UnitSubgroup(Z7, "all-units")
    f = morphism(mod, mod, {("a", "a"): 2, ("b", "a"): 1, ("b", "b"): 3})
    dec = decompose_triangular(f, order, allu)
    assert dec.diagonal.entries == {("a", "a"): 2, ("b", "b"): 3}
    assert dec.increasing.entries == {("b", "a"): 1}
    assert dec.base_function == {"a": "a", "b": "b"}


def test_decompose_identity():
    mod = based_module(Z, ["a", "b"])
    dec = decompose_triangular(identity(mod), antichain(["a", "b"]),
                               UnitSubgroup(Z, "one"))
    assert dec.diagonal == identity(mod)
    assert dec.increasing.is_zero()


def test_decompose_rejects_decreasing_entry():
    mod = based_module(Z, ["a", "b"])
    order = validate_poset([("a", "b")])
    f = morphism(mod, mod, {("a", "a"): 1, ("a", "b"): 1, ("b", "b"): 1})
    with pytest.raises(NotTriangular):
        decompose_triangular(f, order, UnitSubgroup(Z, "one"))


def test_decompose_certificate_independent():
    mod = based_module(Z5, ["a", "b", "c"])
    f = morphism(mod, mod, {("a", "a"): 1, ("b", "b"): 2, ("c", "c"): 3,
                            ("c", "a"): 4})
    allu = UnitSubgroup(Z5, "all-units")
    d1 = decompose_triangular(f, validate_poset([("a", "c")],
                                                elements=["a", "b", "c"]), allu)
    d2 = decompose_triangular(f, validate_poset([("a", "c"), ("a", "b"), ("b", "c")]),
                              allu)
    assert d1.diagonal == d2.diagonal
    assert d1.increasing == d2.increasing


def test_invert_triangular_small():
    mod = based_module(Z5, ["a", "b"])
    order = validate_poset([("a", "b")])
    f = morphism(mod, mod, {("a", "a"): 1, ("b", "a"): 2, ("b", "b"): 1})
    dec = decompose_triangular(f, order, UnitSubgroup(Z5, "one"))
    inv = invert_triangular(dec)
    assert to_matrix(inv) == [[1, 0], [3, 1]]
    assert compose(f, inv) == identity(mod)
    assert compose(inv, f) == identity(mod)


def _random_triangular(rng, ring, labels, subgroup, total_order, unit_pool):
    mod = based_module(ring, labels)
    entries = {}
    for i, col in enumerate(labels):
        entries[(labels[i], col)] = rng.choice(unit_pool)
        for j in range(i + 1, len(labels)):
            if rng.random() < 0.6:
                coeff = rng.randrange(-4, 5) if ring.kind == "Z" else rng.randrange(5)
                if coeff:
                    entries[(labels[j], col)] = coeff
    return morphism(mod, mod, entries)


def test_invert_matches_oracle_randomised():
    rng = random.Random(11)
    labels = ["a", "b", "c", "d"]
    order = validate_poset([(labels[i], labels[j])
                            for i in range(4) for j in range(i + 1, 4)])
    for ring, unit_pool in ((Z5, [1, 2, 3, 4]), (Z, [1, -1])):
        subgroup = UnitSubgroup(ring, "all-units")
        for _ in range(25):
            f = _random_triangular(rng, ring, labels, subgroup, order, unit_pool)
            dec = decompose_triangular(f, order, subgroup)
            inv = invert_triangular(dec)
            oracle = ring_matrix_inverse_oracle(ring, to_matrix(f))
            assert matrix_eq(ring, to_matrix(inv), oracle)
            # inverse is triangular for the same order
            decompose_triangular(inv, order, subgroup)


def test_diag_functoriality():
    rng = random.Random(5)
    labels = ["a", "b", "c"]
    order = validate_poset([("a", "b"), ("b", "c")])
    subgroup = UnitSubgroup(Z5, "all-units")
    for _ in range(40):
        f = _random_triangular(rng, Z5, labels, subgroup, order, [1, 2, 3, 4])
        g = _random_triangular(rng, Z5, labels, subgroup, order, [1, 2, 3, 4])
        gf = compose(f, g)
        dec = decompose_triangular(gf, order, subgroup)
        df = decompose_triangular(f, order, subgroup).diagonal
        dg = decompose_triangular(g, order, subgroup).diagonal
        assert dec.diagonal == compose(df, dg)


def test_diag_of_increasing_perturbation():
    rng = random.Random(6)
    labels = ["a", "b", "c"]
    order = validate_poset([("a", "b"), ("b", "c")])
    subgroup = UnitSubgroup(Z5, "all-units")
    f = _random_triangular(rng, Z5, labels, subgroup, order, [1, 2, 3, 4])
    bump = morphism(f.source, f.target, {("c", "a"): 2})
    g = add(f, bump)
    df = decompose_triangular(f, order, subgroup).diagonal
    dg = decompose_triangular(g, order, subgroup).diagonal
    assert df == dg


def test_factor_elementary_example():
    mod = based_module(Z, ["a", "b", "c"])
    order = validate_poset([("a", "b"), ("b", "c")])
    f = from_matrix(mod, mod, [[1, 0, 0], [1, 1, 0], [1, 1, 1]])
    dec = decompose_triangular(f, order, UnitSubgroup(Z, "one"))
    factors, diag = factor_elementary(dec)
    assert diag == identity(mod)
    assert len(factors) == 2
    assert factors[0].entries == {("c", "b"): 1}
    assert factors[1].entries == {("b", "a"): 1, ("c", "a"): 1}
    product = diag
    for alpha in factors:
        product = compose(product, add(identity(mod), alpha))
    assert product == f
    for i, ai in enumerate(factors):
        for j, aj in enumerate(factors):
            if j <= i:
                assert compose(aj, ai).is_zero()


def test_factor_elementary_trivial():
    mod = based_module(Z, ["a"])
    dec = decompose_triangular(identity(mod), antichain(["a"]),
                               UnitSubgroup(Z, "one"))
    factors, diag = factor_elementary(dec)
    assert factors == []
    assert diag == identity(mod)


def test_compose_shape_mismatch():
    a = based_module(Z, ["a"])
    b = based_module(Z, ["b"])
    with pytest.raises(ShapeMismatch):
        compose(identity(a), identity(b))


def test_invert_requires_bijective_base():
    mod = based_module(Z, ["a", "b"])
    tgt = based_module(Z, ["a", "b"])
    order = validate_poset([("a", "b")])
    f = morphism(mod, tgt, {("a", "a"): 1})  # b maps to zero
    dec = decompose_triangular(f, order, UnitSubgroup(Z, "one"))
    with pytest.raises(DiagonalNotInvertible):
        invert_triangular(dec)
