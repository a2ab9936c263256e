"""Based free modules and the diagonal/triangular morphism calculus.

Morphisms are sparse: entries are keyed (target label, source label) and
zero coefficients are never stored.  Matrix layout is deliberately
divorced from the structural partial orders; triangularity is always
checked against an explicit order certificate.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (CoefficientOutsideU, DiagonalNotInvertible, NotASubbasis,
                     NotDiagonal, NotTriangular, RadiusExceeded, ShapeMismatch)
from .posets import Poset
from .rings import Ring, UnitSubgroup, in_unit_subgroup


@dataclass(frozen=True)
class BasedModule:
    ring: Ring
    basis: tuple
    location: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if len(set(self.basis)) != len(self.basis):
            raise NotASubbasis("basis labels are not distinct")
        if self.location and not set(self.basis) <= set(self.location):
            raise NotASubbasis("location map is not total on the basis")

    @property
    def rank(self) -> int:
        return len(self.basis)

    def locate(self, label):
        return self.location.get(label)


def based_module(ring, labels, location=None) -> BasedModule:
    return BasedModule(ring, tuple(labels), dict(location or {}))


def zero_module(ring) -> BasedModule:
    return BasedModule(ring, ())


def perp(module: BasedModule, sub_basis) -> BasedModule:
    """Perpendicular module generated by the rest of the basis."""
    sub = set(sub_basis)
    if not sub <= set(module.basis):
        raise NotASubbasis(f"{sorted(sub - set(module.basis))} not in the basis",
                           witness=sorted(sub - set(module.basis)))
    keep = tuple(b for b in module.basis if b not in sub)
    return BasedModule(module.ring, keep,
                       {b: p for b, p in module.location.items() if b in keep})


@dataclass(frozen=True)
class Morphism:
    source: BasedModule
    target: BasedModule
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        ring = self.source.ring
        if ring != self.target.ring:
            raise ShapeMismatch("source and target rings differ")
        clean = {}
        src, tgt = set(self.source.basis), set(self.target.basis)
        for (row, col), coeff in self.entries.items():
            if row not in tgt:
                raise ShapeMismatch(f"row label {row!r} not in target basis")
            if col not in src:
                raise ShapeMismatch(f"column label {col!r} not in source basis")
            coeff = ring.normalize(coeff)
            if not ring.is_zero(coeff):
                clean[(row, col)] = coeff
        object.__setattr__(self, "entries", clean)

    def column(self, col) -> dict:
        return {row: c for (row, src), c in self.entries.items() if src == col}

    def is_zero(self) -> bool:
        return not self.entries

    def support(self) -> set:
        return {col for (_, col) in self.entries}

    def __eq__(self, other):
        return (isinstance(other, Morphism)
                and self.source.basis == other.source.basis
                and self.target.basis == other.target.basis
                and self.entries == other.entries)

    def __hash__(self):
        return hash((self.source.basis, self.target.basis,
                     tuple(sorted(self.entries))))


def morphism(source, target, entries) -> Morphism:
    return Morphism(source, target, dict(entries))


def zero_morphism(source, target) -> Morphism:
    return Morphism(source, target, {})


def identity(module: BasedModule) -> Morphism:
    one = module.ring.one()
    return Morphism(module, module, {(b, b): one for b in module.basis})


def add(f: Morphism, g: Morphism) -> Morphism:
    if f.source.basis != g.source.basis or f.target.basis != g.target.basis:
        raise ShapeMismatch("cannot add morphisms with different bases")
    ring = f.source.ring
    entries = dict(f.entries)
    for key, coeff in g.entries.items():
        entries[key] = ring.add(entries.get(key, ring.zero()), coeff)
    return Morphism(f.source, f.target, entries)


def negate(f: Morphism) -> Morphism:
    ring = f.source.ring
    return Morphism(f.source, f.target,
                    {k: ring.neg(v) for k, v in f.entries.items()})


def subtract(f: Morphism, g: Morphism) -> Morphism:
    return add(f, negate(g))


def compose(f: Morphism, g: Morphism) -> Morphism:
    """Composite g after f (f is applied first).

    Coefficients multiply in traversal order, f's entry first; this
    matches geometric path concatenation and is the plain matrix product
    for commutative coefficients.
    """
    if f.target.basis != g.source.basis:
        raise ShapeMismatch("target of the first morphism must be the source "
                            "of the second")
    ring = f.source.ring
    by_row = {}
    for (row, col), coeff in f.entries.items():
        by_row.setdefault(row, []).append((col, coeff))
    entries = {}
    for (row, mid), gcoeff in g.entries.items():
        for col, fcoeff in by_row.get(mid, ()):  # g's column consumes f's row
            key = (row, col)
            acc = entries.get(key, ring.zero())
            entries[key] = ring.add(acc, ring.mul(fcoeff, gcoeff))
    return Morphism(f.source, g.target, entries)


def restrict_morphism(f: Morphism, source_basis, target_basis) -> Morphism:
    """Submatrix on based submodules (induced homomorphism)."""
    src = perp(f.source, set(f.source.basis) - set(source_basis))
    tgt = perp(f.target, set(f.target.basis) - set(target_basis))
    keep_s, keep_t = set(src.basis), set(tgt.basis)
    return Morphism(src, tgt, {(r, c): v for (r, c), v in f.entries.items()
                               if r in keep_t and c in keep_s})


def to_matrix(f: Morphism):
    """Row-major matrix in the stored basis orders."""
    ring = f.source.ring
    return [[f.entries.get((row, col), ring.zero()) for col in f.source.basis]
            for row in f.target.basis]


def from_matrix(source: BasedModule, target: BasedModule, rows) -> Morphism:
    entries = {}
    for i, row_label in enumerate(target.basis):
        for j, col_label in enumerate(source.basis):
            entries[(row_label, col_label)] = rows[i][j]
    return Morphism(source, target, entries)


def is_U_diagonal(f: Morphism, subgroup: UnitSubgroup, epsilon=None, space=None):
    """Base function of a U-diagonal morphism, or an error.

    With ``epsilon`` (and ``space``) given the morphism is measured: each
    nonzero entry must join locations at distance below epsilon, and every
    source label located outside the epsilon frontier enlargement must
    carry an entry.
    """
    columns = {}
    for (row, col), coeff in f.entries.items():
        columns.setdefault(col, []).append((row, coeff))
    base = {}
    for col in sorted(columns):
        cells = columns[col]
        if len(cells) > 1:
            raise NotDiagonal(f"source {col!r} has {len(cells)} entries", witness=col)
        row, coeff = cells[0]
        if not in_unit_subgroup(coeff, subgroup):
            raise CoefficientOutsideU(f"coefficient on {col!r} lies outside U",
                                      witness=(row, col))
        base[col] = row
    targets = list(base.values())
    if len(set(targets)) != len(targets):
        dup = next(t for t in targets if targets.count(t) > 1)
        raise NotDiagonal(f"base function not injective at {dup!r}", witness=dup)
    if epsilon is not None:
        if space is None or not f.source.location or not f.target.location:
            raise NotDiagonal("measured check needs module locations and a space")
        for col, row in base.items():
            d = space.distance(f.source.location[col], f.target.location[row])
            if not d < epsilon:
                raise RadiusExceeded(f"entry {row!r}<-{col!r} has radius {d}",
                                     witness=(row, col))
        frontier = space.frontier_enlargement(epsilon)
        for col in f.source.basis:
            if col not in base and f.source.location[col] not in frontier:
                raise NotDiagonal(f"source {col!r} outside the frontier region "
                                  "has no entry", witness=col)
    return base


@dataclass
class TriangularDecomposition:
    """f = diagonal + increasing, certified by a target-basis order."""

    diagonal: Morphism
    increasing: Morphism
    base_function: dict
    order: Poset
    subgroup: UnitSubgroup

    @property
    def morphism(self) -> Morphism:
        return add(self.diagonal, self.increasing)


def decompose_triangular(f: Morphism, order: Poset, subgroup: UnitSubgroup,
                         source_order: Poset | None = None) -> TriangularDecomposition:
    """Split f into its U-diagonal and increasing parts.

    The diagonal target of a source label is the unique minimum of the
    column support; all other support entries must sit strictly above it
    in the certified order.  The decomposition is independent of which
    valid certificate is supplied.
    """
    if not set(f.target.basis) <= order.elements:
        raise NotTriangular("order certificate does not cover the target basis")
    if source_order is None and f.source.basis == f.target.basis:
        source_order = order
    columns = {}
    for (row, col), coeff in f.entries.items():
        columns.setdefault(col, {})[row] = coeff
    base, diag_entries, inc_entries = {}, {}, {}
    for col in sorted(columns):
        support = columns[col]
        bottom = [r for r in support
                  if all(r == other or order.less(r, other) for other in support)]
        if not bottom:
            raise NotTriangular(
                f"column {col!r} has no minimum in the certified order",
                witness=(col, sorted(support)))
        row = bottom[0]
        coeff = support[row]
        if not in_unit_subgroup(coeff, subgroup):
            raise NotTriangular(
                f"diagonal coefficient on {col!r} lies outside U",
                witness=(row, col))
        base[col] = row
        diag_entries[(row, col)] = coeff
        for other, c in support.items():
            if other != row:
                inc_entries[(other, col)] = c
    targets = list(base.values())
    if len(set(targets)) != len(targets):
        dup = next(t for t in targets if targets.count(t) > 1)
        raise NotTriangular(f"base function not injective at {dup!r}", witness=dup)
    if source_order is not None:
        for (a, b) in source_order.pairs:
            if a in base and b in base and not order.less(base[a], base[b]):
                raise NotTriangular(
                    f"base function is not order-preserving on {a!r} < {b!r}",
                    witness=(a, b))
    return TriangularDecomposition(
        diagonal=Morphism(f.source, f.target, diag_entries),
        increasing=Morphism(f.source, f.target, inc_entries),
        base_function=base,
        order=order,
        subgroup=subgroup)


def _invert_diagonal(dec: TriangularDecomposition) -> Morphism:
    ring = dec.diagonal.source.ring
    if set(dec.base_function) != set(dec.diagonal.source.basis) or \
            set(dec.base_function.values()) != set(dec.diagonal.target.basis):
        raise DiagonalNotInvertible("base function is not a bijection of bases")
    entries = {}
    for col, row in dec.base_function.items():
        coeff = dec.diagonal.entries[(row, col)]
        try:
            inv = ring.invert(coeff)
        except Exception as exc:
            raise DiagonalNotInvertible(str(exc)) from exc
        entries[(col, row)] = inv
    return Morphism(dec.diagonal.target, dec.diagonal.source, entries)


def invert_triangular(dec: TriangularDecomposition) -> Morphism:
    """Exact two-sided inverse via the alternating sum over the diagonal.

    The increasing part is nilpotent for a finite certified order, so the
    series has finitely many terms.
    """
    h_inv = _invert_diagonal(dec)
    step = negate(compose(dec.increasing, h_inv))   # -(h^-1 u): source endo
    total = h_inv
    current = h_inv
    for _ in range(len(dec.diagonal.source.basis) + 1):
        current = compose(current, step)
        if current.is_zero():
            break
        total = add(total, current)
    else:
        raise DiagonalNotInvertible("increasing part is not nilpotent")
    return total


def factor_elementary(dec: TriangularDecomposition):
    """Canonical factorization f = (1+a_n)...(1+a_1) diag(f).

    The a_i are increasing, pairwise annihilating (a_i a_j = 0 for j <= i),
    and independent of the order certificate.  Zero factors are dropped.
    """
    h_inv = _invert_diagonal(dec)
    target = dec.diagonal.target
    u = subtract(compose(h_inv, dec.morphism), identity(target))
    columns = {}
    for (row, col), coeff in u.entries.items():
        columns.setdefault(col, {})[row] = coeff
    # maximal chain of based submodules with u(D_i) inside D_{i-1}
    level = {}
    assigned = set()
    stage = 0
    while len(assigned) < len(target.basis):
        stage += 1
        fresh = [b for b in target.basis
                 if b not in assigned and set(columns.get(b, ())) <= assigned]
        if not fresh:
            raise DiagonalNotInvertible("increasing part is not nilpotent")
        for b in fresh:
            level[b] = stage
        assigned.update(fresh)
    factors = []
    remaining = dict(u.entries)
    for i in range(1, stage + 1):
        entries = {(row, col): coeff for (row, col), coeff in remaining.items()
                   if level[col] <= i}
        for key in entries:
            del remaining[key]
        alpha = Morphism(target, target, entries)
        if not alpha.is_zero():
            factors.append(alpha)
    return factors, dec.diagonal
