"""Bounded chain complexes with contractions.

Complexes are nonnegatively graded with a hard degree cap; all identities
(boundary squared, contraction identity) are checked exactly.  The sign
convention puts signs in suspensions: odd-degree structure maps flip sign
once per suspension step, chain maps are unchanged.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (InvalidDecomposition, NoCancellation, NotAChainMap,
                     NotStrictContractible, RingMismatch, ShapeMismatch)
from .modules import (BasedModule, Morphism, add, based_module, compose,
                      decompose_triangular, identity, morphism, negate,
                      perp, restrict_morphism, subtract, zero_morphism)
from .posets import Poset
from .rings import Ring, UnitSubgroup

MAX_DEGREE = 64


@dataclass
class ChainComplex:
    ring: Ring
    modules: dict                  # degree -> BasedModule
    boundary: dict                 # degree -> Morphism C^d -> C^{d-1}

    def __post_init__(self):
        if any(d < 0 or d > MAX_DEGREE for d in self.modules):
            raise ShapeMismatch(f"degrees must lie in 0..{MAX_DEGREE}")
        for d, f in self.boundary.items():
            if d - 1 not in self.modules or d not in self.modules:
                raise ShapeMismatch(f"boundary in degree {d} has no modules")
            if f.source.basis != self.modules[d].basis or \
                    f.target.basis != self.modules[d - 1].basis:
                raise ShapeMismatch(f"boundary in degree {d} has wrong bases")

    @property
    def top(self) -> int:
        return max((d for d, m in self.modules.items() if m.basis), default=0)

    def degrees(self):
        return sorted(self.modules)

    def module(self, d) -> BasedModule:
        return self.modules.get(d) or based_module(self.ring, ())

    def boundary_map(self, d) -> Morphism:
        if d in self.boundary:
            return self.boundary[d]
        return zero_morphism(self.module(d), self.module(d - 1))

    def map_between(self, maps: dict, d: int, shift: int) -> Morphism:
        if d in maps:
            return maps[d]
        return zero_morphism(self.module(d), self.module(d + shift))


@dataclass
class Contraction:
    maps: dict                     # degree -> Morphism C^d -> C^{d+1}

    def map_for(self, complex_: ChainComplex, d: int) -> Morphism:
        if d in self.maps:
            return self.maps[d]
        return zero_morphism(complex_.module(d), complex_.module(d + 1))


def chain_complex(ring, modules, boundary) -> ChainComplex:
    return ChainComplex(ring, dict(modules), dict(boundary))


@dataclass
class ComplexReport:
    checks: list = field(default_factory=list)

    def record(self, name, passed, witness=None):
        self.checks.append((name, bool(passed), witness))

    @property
    def ok(self) -> bool:
        return all(passed for _, passed, _ in self.checks)

    def failures(self):
        return [(n, w) for n, p, w in self.checks if not p]


def validate_complex(cx: ChainComplex, contraction: Contraction | None = None) -> ComplexReport:
    """Exact check of boundary-squared and the contraction identity."""
    report = ComplexReport()
    for d in cx.degrees():
        if d + 1 in cx.modules:
            square = compose(cx.boundary_map(d + 1), cx.boundary_map(d))
            report.record(f"boundary_squared_degree_{d + 1}", square.is_zero(),
                          None if square.is_zero() else sorted(square.entries))
    if contraction is not None:
        for d in cx.degrees():
            xi_d = contraction.map_for(cx, d)
            down_up = compose(cx.boundary_map(d), contraction.map_for(cx, d - 1))
            up_down = compose(xi_d, cx.boundary_map(d + 1))
            total = add(down_up, up_down)
            ident = identity(cx.module(d))
            ok = total == ident
            report.record(f"contraction_identity_degree_{d}", ok,
                          None if ok else sorted(subtract(total, ident).entries))
    return report


def suspend(cx: ChainComplex, shift: int, truncate: bool = False,
            contraction: Contraction | None = None):
    """Shift grading by ``shift``; odd-degree structure maps pick up a sign
    once per step.  ``truncate`` drops negative degrees."""
    sign = 1 if shift % 2 == 0 else -1
    modules = {}
    for d, mod in cx.modules.items():
        nd = d + shift
        if nd < 0:
            if truncate:
                continue
            raise ShapeMismatch("negative degrees need truncate=True")
        modules[nd] = mod
    boundary = {}
    for d in sorted(cx.boundary):
        nd = d + shift
        if nd < 1 or nd not in modules or nd - 1 not in modules:
            continue
        f = cx.boundary[d]
        boundary[nd] = f if sign == 1 else negate(f)
    out = ChainComplex(cx.ring, modules, boundary)
    if contraction is None:
        return out
    maps = {}
    for d, f in contraction.maps.items():
        nd = d + shift
        if nd < 0 or nd not in modules or nd + 1 not in modules:
            continue
        maps[nd] = f if sign == 1 else negate(f)
    return out, Contraction(maps)


@dataclass
class ChainMap:
    source: ChainComplex
    target: ChainComplex
    maps: dict                     # degree -> Morphism

    def map_for(self, d) -> Morphism:
        if d in self.maps:
            return self.maps[d]
        return zero_morphism(self.source.module(d), self.target.module(d))


def validate_chain_map(f: ChainMap) -> bool:
    degrees = set(f.source.modules) | set(f.target.modules)
    for d in degrees:
        if d < 1:
            continue
        left = compose(f.map_for(d), f.target.boundary_map(d))
        right = compose(f.source.boundary_map(d), f.map_for(d - 1))
        if left != right:
            return False
    return True


def _tag_module(mod: BasedModule, tag: str) -> BasedModule:
    return based_module(mod.ring, [f"{tag}{b}" for b in mod.basis],
                        {f"{tag}{b}": p for b, p in mod.location.items()} or None)


def _tag_entries(entries, row_tag, col_tag):
    return {(f"{row_tag}{r}", f"{col_tag}{c}"): v for (r, c), v in entries.items()}


def mapping_cone(f: ChainMap):
    """Cone complex of a chain map, with its canonical contraction when the
    map inverts degreewise.

    Basis labels are tagged "t." for the target summand and "s." for the
    suspended source.  Returns (complex, contraction-or-None).
    """
    if not validate_chain_map(f):
        raise NotAChainMap("the given maps do not commute with the boundaries")
    src, tgt = f.source, f.target
    if src.ring != tgt.ring:
        raise RingMismatch("cone requires one coefficient ring")
    top = max([d for d in tgt.modules] + [d + 1 for d in src.modules] + [0])
    degrees = list(range(top + 1))
    modules = {}
    for d in degrees:
        labels = [f"t.{b}" for b in tgt.module(d).basis] + \
                 [f"s.{b}" for b in src.module(d - 1).basis]
        loc = {}
        for b, p in tgt.module(d).location.items():
            loc[f"t.{b}"] = p
        for b, p in src.module(d - 1).location.items():
            loc[f"s.{b}"] = p
        modules[d] = based_module(src.ring, labels, loc or None)
    boundary = {}
    for d in degrees:
        if d < 1:
            continue
        entries = {}
        entries.update(_tag_entries(tgt.boundary_map(d).entries, "t.", "t."))
        entries.update(_tag_entries(f.map_for(d - 1).entries, "t.", "s."))
        for key, v in _tag_entries(src.boundary_map(d - 1).entries, "s.", "s.").items():
            entries[key] = src.ring.neg(v)
        boundary[d] = morphism(modules[d], modules[d - 1], entries)
    cone = ChainComplex(src.ring, modules, boundary)
    inverses = {}
    for d in set(src.modules) | set(tgt.modules):
        fd = f.map_for(d)
        if not fd.source.basis and not fd.target.basis:
            continue
        inv = _try_invert_morphism(fd)
        if inv is None:
            return cone, None
        inverses[d] = inv
    maps = {}
    for d in degrees:
        if d + 1 not in modules:
            continue
        inv = inverses.get(d)
        if inv is None:
            continue
        entries = _tag_entries(inv.entries, "s.", "t.")
        maps[d] = morphism(modules[d], modules[d + 1], entries)
    return cone, Contraction(maps)


def _try_invert_morphism(f: Morphism):
    """Exact inverse of a module morphism, or None.

    Over Z a rational inverse is computed and checked for integrality;
    elsewhere unit-pivot elimination is attempted.  The result is verified
    two-sided before being returned.
    """
    from .modules import from_matrix, to_matrix
    from .rings import Singular, ring_matrix_inverse_oracle
    if len(f.source.basis) != len(f.target.basis):
        return None
    if not f.source.basis:
        return zero_morphism(f.target, f.source)
    try:
        rows = ring_matrix_inverse_oracle(f.source.ring, to_matrix(f))
    except Singular:
        return None
    inv = from_matrix(f.target, f.source, rows)
    if compose(f, inv) == identity(f.source) and compose(inv, f) == identity(f.target):
        return inv
    return None


def direct_sum(a: ChainComplex, b: ChainComplex,
               xi_a: Contraction | None = None, xi_b: Contraction | None = None):
    """Blockwise sum; bases must already be disjoint degreewise."""
    if a.ring != b.ring:
        raise RingMismatch("direct sum requires one coefficient ring")
    modules = {}
    for d in sorted(set(a.modules) | set(b.modules)):
        ma, mb = a.module(d), b.module(d)
        clash = set(ma.basis) & set(mb.basis)
        if clash:
            raise ShapeMismatch(f"basis labels {sorted(clash)} appear on both "
                                f"sides in degree {d}; relabel first")
        loc = {**ma.location, **mb.location}
        modules[d] = based_module(a.ring, list(ma.basis) + list(mb.basis),
                                  loc or None)
    boundary = {}
    for d in sorted(set(a.boundary) | set(b.boundary)):
        entries = {}
        entries.update(a.boundary_map(d).entries)
        entries.update(b.boundary_map(d).entries)
        boundary[d] = morphism(modules[d], modules[d - 1], entries)
    out = ChainComplex(a.ring, modules, boundary)
    if xi_a is None and xi_b is None:
        return out
    maps = {}
    for d in sorted(set((xi_a.maps if xi_a else {})) | set((xi_b.maps if xi_b else {}))):
        entries = {}
        if xi_a:
            entries.update(xi_a.map_for(a, d).entries)
        if xi_b:
            entries.update(xi_b.map_for(b, d).entries)
        maps[d] = morphism(modules[d], modules[d + 1], entries)
    return out, Contraction(maps)


def relabel_complex(cx: ChainComplex, tag: str,
                    contraction: Contraction | None = None):
    modules = {d: _tag_module(m, tag) for d, m in cx.modules.items()}
    boundary = {d: morphism(modules[d], modules[d - 1],
                            _tag_entries(f.entries, tag, tag))
                for d, f in cx.boundary.items()}
    out = ChainComplex(cx.ring, modules, boundary)
    if contraction is None:
        return out
    maps = {d: morphism(modules[d], modules[d + 1],
                        _tag_entries(f.entries, tag, tag))
            for d, f in contraction.maps.items()}
    return out, Contraction(maps)


# ---------------------------------------------------------------------------
# cancellation structure

@dataclass
class CancellationDecomposition:
    kept: dict                     # degree -> tuple of labels (the subcomplex)
    cancel_upper: dict             # degree -> tuple of labels (D)
    cancel_lower: dict             # degree -> tuple of labels (D-bar)
    delta: dict                    # degree -> Morphism  D-bar^d -> D^{d+1}


def _restrict_block(f: Morphism, rows, cols) -> Morphism:
    keep_r, keep_c = set(rows), set(cols)
    src = perp(f.source, set(f.source.basis) - keep_c)
    tgt = perp(f.target, set(f.target.basis) - keep_r)
    return Morphism(src, tgt, {(r, c): v for (r, c), v in f.entries.items()
                               if r in keep_r and c in keep_c})


def find_cancellation(cx: ChainComplex, xi: Contraction, kept: dict,
                      orders: dict) -> CancellationDecomposition:
    """Locate the unique cancellation split of the complement of a based
    subcomplex, when it exists.

    ``kept`` lists the subcomplex basis per degree, ``orders`` gives the
    per-degree order certificates.  The upper part D collects complement
    elements sent into the subcomplex by the contraction; the rest must
    map onto D through a sign-triangular isomorphism.
    """
    kept = {d: tuple(kept.get(d, ())) for d in cx.degrees()}
    for d in cx.degrees():
        missing = set(kept[d]) - set(cx.module(d).basis)
        if missing:
            raise NoCancellation(f"kept labels {sorted(missing)} unknown in "
                                 f"degree {d}", witness=sorted(missing))
    # the kept part must be a subcomplex preserved by the contraction
    for d in cx.degrees():
        if d >= 1:
            for (row, col) in cx.boundary_map(d).entries:
                if col in kept[d] and row not in kept[d - 1]:
                    raise NoCancellation(
                        f"boundary leaves the subcomplex at {col!r} in degree {d}",
                        witness=(d, col, row))
    upper, lower, delta = {}, {}, {}
    for d in cx.degrees():
        complement = [b for b in cx.module(d).basis if b not in set(kept[d])]
        xi_d = xi.map_for(cx, d)
        up, low = [], []
        kept_next = set(kept.get(d + 1, ()))
        for b in complement:
            image_rows = {r for (r, c) in xi_d.entries if c == b}
            if image_rows <= kept_next:
                up.append(b)
            else:
                low.append(b)
        upper[d], lower[d] = tuple(up), tuple(low)
    for d in cx.degrees():
        # contraction must keep the subcomplex inside itself
        xi_d = xi.map_for(cx, d)
        kept_next = set(kept.get(d + 1, ()))
        for (row, col) in xi_d.entries:
            if col in set(kept[d]) and row not in kept_next:
                raise NoCancellation(
                    f"contraction leaves the subcomplex at {col!r} in degree {d}",
                    witness=(d, col, row))
        # lower columns may only hit kept and upper rows
        allowed = kept_next | set(upper.get(d + 1, ()))
        for (row, col) in xi_d.entries:
            if col in set(lower[d]) and row not in allowed:
                raise NoCancellation(
                    f"contraction sends {col!r} into the lower part in degree {d}",
                    witness=(d, col, row))
    pm = UnitSubgroup(cx.ring, "plus-minus-one")
    for d in cx.degrees():
        if not lower[d] and not upper.get(d + 1):
            continue
        xi_d = xi.map_for(cx, d)
        block = _restrict_block(xi_d, upper.get(d + 1, ()), lower[d])
        order = orders.get(d + 1)
        if order is None:
            from .posets import antichain
            order = antichain(upper.get(d + 1, ()))
        try:
            dec = decompose_triangular(block, order.restrict(upper.get(d + 1, ())), pm)
        except Exception as exc:
            raise NoCancellation(f"cancelling block in degree {d} is not "
                                 f"sign-triangular: {exc}") from exc
        if set(dec.base_function) != set(lower[d]) or \
                set(dec.base_function.values()) != set(upper.get(d + 1, ())):
            raise NoCancellation(
                f"cancelling block in degree {d} is not an isomorphism",
                witness=(d, sorted(lower[d]), sorted(upper.get(d + 1, ()))))
        delta[d] = block
    # order condition: complement precedes kept whenever comparable
    for d in cx.degrees():
        order = orders.get(d)
        if order is None:
            continue
        for k in kept[d]:
            for c in upper[d] + lower[d]:
                if order.less(k, c):
                    raise NoCancellation(
                        f"kept element {k!r} precedes complement element {c!r} "
                        f"in degree {d}", witness=(d, k, c))
    return CancellationDecomposition(kept=kept, cancel_upper=upper,
                                     cancel_lower=lower, delta=delta)


def _block(f: Morphism, rows, cols) -> dict:
    keep_r, keep_c = set(rows), set(cols)
    return {(r, c): v for (r, c), v in f.entries.items()
            if r in keep_r and c in keep_c}


def standardize_cancellation(cx: ChainComplex, xi: Contraction,
                             dec: CancellationDecomposition):
    """Standard coordinates for a cancellation.

    Returns graded maps (f, b, beta): f is a sign-triangular automorphism
    carrying the standard pair (b, beta) to (boundary, contraction); b is
    the kept boundary plus the trivial cancelling block, beta the kept
    contraction plus its block.  The identities f b = c f and
    f beta = xi f are verified exactly.
    """
    ring = cx.ring
    kept, upper, lower = dec.kept, dec.cancel_upper, dec.cancel_lower
    f_maps, b_maps, beta_maps = {}, {}, {}
    inv_delta = {}
    for d, blk in dec.delta.items():
        # read delta inverse out of the boundary and verify it
        c_next = cx.boundary_map(d + 1)
        cand = _restrict_block(c_next, lower[d], upper[d + 1])
        if compose(blk, cand) != identity(blk.source) or \
                compose(cand, blk) != identity(cand.source):
            raise InvalidDecomposition(
                f"boundary block on the cancelling pair in degree {d + 1} is "
                f"not inverse to the contraction block")
        inv_delta[d + 1] = cand
    for d in cx.degrees():
        mod = cx.module(d)
        ident = identity(mod)
        c_next = cx.boundary_map(d + 1)        # degree d+1 -> d
        x_block = _block(c_next, kept[d], upper[d + 1]) if d + 1 in cx.modules else {}
        d_block = _block(c_next, upper[d], upper[d + 1]) if d + 1 in cx.modules else {}
        entries = dict(ident.entries)
        blk = dec.delta.get(d)
        if blk is not None:
            # x delta and d delta columns over the lower part
            for (row, mid), v in x_block.items():
                for (mid2, col), w in blk.entries.items():
                    if mid2 == mid:
                        key = (row, col)
                        entries[key] = ring.add(entries.get(key, ring.zero()),
                                                ring.mul(w, v))
            for (row, mid), v in d_block.items():
                for (mid2, col), w in blk.entries.items():
                    if mid2 == mid:
                        key = (row, col)
                        entries[key] = ring.add(entries.get(key, ring.zero()),
                                                ring.mul(w, v))
        f_maps[d] = morphism(mod, mod, entries)
    for d in cx.degrees():
        if d < 1:
            continue
        c_d = cx.boundary_map(d)
        entries = dict(_block(c_d, kept[d - 1], kept[d]))
        entries.update(_block(c_d, lower[d - 1], upper[d]))  # delta inverse
        b_maps[d] = morphism(cx.module(d), cx.module(d - 1), entries)
    for d in cx.degrees():
        xi_d = xi.map_for(cx, d)
        entries = dict(_block(xi_d, kept[d + 1], kept[d]))
        entries.update(_block(xi_d, kept[d + 1], upper[d]))   # u block
        blk = dec.delta.get(d)
        if blk is not None:
            entries.update(blk.entries)                        # delta block
            # corner block: minus kept-boundary after u after delta
            u_next = _restrict_block(xi.map_for(cx, d + 1),
                                     kept.get(d + 2, ()), upper.get(d + 1, ()))
            c_top = _restrict_block(cx.boundary_map(d + 2),
                                    kept.get(d + 1, ()), kept.get(d + 2, ())) \
                if d + 2 in cx.modules else None
            if c_top is not None and u_next.entries:
                corner = negate(compose(compose(blk, u_next), c_top))
                entries.update(corner.entries)
        beta_maps[d] = morphism(cx.module(d), cx.module(d + 1), entries)
    # exact verification of the conjugation identities
    for d in cx.degrees():
        if d >= 1:
            left = compose(b_maps[d], f_maps[d - 1])
            right = compose(f_maps[d], cx.boundary_map(d))
            if left != right:
                raise InvalidDecomposition(f"f b = c f fails in degree {d}",
                                           witness=d)
        left = compose(beta_maps[d], f_maps.get(d + 1, identity(cx.module(d + 1))))
        right = compose(f_maps[d], xi.map_for(cx, d))
        if left != right:
            raise InvalidDecomposition(f"f beta = xi f fails in degree {d}",
                                       witness=d)
    return f_maps, b_maps, beta_maps


def contraction_improvement(cx: ChainComplex, xi: Contraction,
                            dec: CancellationDecomposition,
                            b_maps: dict, beta_maps: dict):
    """Degree-2 homotopy clearing the free blocks of the standard
    contraction; returns the improved contraction maps."""
    ring = cx.ring
    h_maps = {}
    for d, blk in dec.delta.items():
        u_next = _restrict_block(xi.map_for(cx, d + 1),
                                 dec.kept.get(d + 2, ()), dec.cancel_upper.get(d + 1, ()))
        if u_next.entries:
            h_maps[d] = compose(blk, u_next)   # lower^d -> kept^{d+2}
    improved = {}
    for d in cx.degrees():
        base = beta_maps.get(d, zero_morphism(cx.module(d), cx.module(d + 1)))
        total = base
        h_d = h_maps.get(d)
        if h_d is not None:
            lifted = morphism(cx.module(d), cx.module(d + 2), dict(h_d.entries))
            b_top = b_maps.get(d + 2)
            if b_top is not None:
                total = add(total, compose(lifted, b_top))
        b_d = b_maps.get(d)
        h_prev = h_maps.get(d - 1)
        if b_d is not None and h_prev is not None:
            lifted = morphism(cx.module(d - 1), cx.module(d + 1), dict(h_prev.entries))
            total = subtract(total, compose(b_d, lifted))
        improved[d] = total
    return Contraction(improved)


def fold_two_degrees(cx: ChainComplex, xi: Contraction):
    """Collapse a strict contractible complex into degrees 0 and 1.

    Degree 0 collects the even chain groups, degree 1 the odd ones; the
    boundary is the chain boundary corrected by the contraction sandwich,
    the contraction the complementary residue.  The two are exact mutual
    inverses.  Two-degree inputs are returned unchanged, labels included.
    """
    report = validate_complex(cx, xi)
    if not report.ok:
        raise NotStrictContractible(f"strict identities fail: {report.failures()}")
    if cx.top <= 1:
        return cx, xi
    ring = cx.ring

    def tagged(degrees):
        labels, loc = [], {}
        for d in degrees:
            mod = cx.module(d)
            for b in mod.basis:
                labels.append(f"{d}.{b}")
                if b in mod.location:
                    loc[f"{d}.{b}"] = mod.location[b]
        return based_module(ring, labels, loc or None)

    evens = [d for d in cx.degrees() if d % 2 == 0]
    odds = [d for d in cx.degrees() if d % 2 == 1]
    even_mod, odd_mod = tagged(evens), tagged(odds)
    boundary_entries = {}
    contraction_entries = {}
    for d in odds:
        c_d = cx.boundary_map(d)
        for (row, col), v in c_d.entries.items():
            key = (f"{d - 1}.{row}", f"{d}.{col}")
            boundary_entries[key] = ring.add(boundary_entries.get(key, ring.zero()), v)
        sandwich = compose(compose(xi.map_for(cx, d), cx.boundary_map(d + 1)),
                           xi.map_for(cx, d))
        for (row, col), v in sandwich.entries.items():
            key = (f"{d + 1}.{row}", f"{d}.{col}")
            boundary_entries[key] = ring.add(boundary_entries.get(key, ring.zero()),
                                             ring.neg(v))
    for d in evens:
        sandwich = compose(compose(xi.map_for(cx, d), cx.boundary_map(d + 1)),
                           xi.map_for(cx, d))
        for (row, col), v in sandwich.entries.items():
            key = (f"{d + 1}.{row}", f"{d}.{col}")
            contraction_entries[key] = ring.add(
                contraction_entries.get(key, ring.zero()), v)
        double = compose(compose(cx.boundary_map(d), xi.map_for(cx, d - 1)),
                         cx.boundary_map(d))
        for (row, col), v in double.entries.items():
            key = (f"{d - 1}.{row}", f"{d}.{col}")
            contraction_entries[key] = ring.add(
                contraction_entries.get(key, ring.zero()), ring.neg(v))
    folded = ChainComplex(ring, {0: even_mod, 1: odd_mod},
                          {1: morphism(odd_mod, even_mod, boundary_entries)})
    folded_xi = Contraction({0: morphism(even_mod, odd_mod, contraction_entries)})
    return folded, folded_xi
