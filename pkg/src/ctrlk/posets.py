"""Finite partial orders on basis label sets.

Orders are stored as explicit strict relations (transitive closures) over
finite label sets.  Construction validates acyclicity and reports a
witness cycle on failure.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import CycleDetected, NoOrderExists, NotNested, UnknownPoint


@dataclass(frozen=True)
class Poset:
    """Strict partial order: ``pairs`` is the full transitive relation a < b."""

    elements: frozenset
    pairs: frozenset

    def less(self, a, b) -> bool:
        return (a, b) in self.pairs

    def comparable(self, a, b) -> bool:
        return (a, b) in self.pairs or (b, a) in self.pairs

    def above(self, a) -> set:
        return {b for (x, b) in self.pairs if x == a}

    def restrict(self, subset) -> "Poset":
        subset = frozenset(subset)
        return Poset(subset & self.elements,
                     frozenset((a, b) for (a, b) in self.pairs
                               if a in subset and b in subset))

    def union(self, other: "Poset") -> "Poset":
        """Disjoint union; no cross relations are added."""
        overlap = self.elements & other.elements
        if overlap:
            raise CycleDetected(f"element sets overlap: {sorted(overlap)}",
                                witness=sorted(overlap))
        return Poset(self.elements | other.elements, self.pairs | other.pairs)

    def covers(self):
        """Minimal generating pairs (transitive reduction), sorted."""
        out = []
        for (a, b) in self.pairs:
            if not any((a, m) in self.pairs and (m, b) in self.pairs
                       for m in self.elements):
                out.append((a, b))
        return sorted(out)

    def to_json(self):
        return {"elements": sorted(self.elements), "covers": [list(p) for p in self.covers()]}


def antichain(elements) -> Poset:
    return Poset(frozenset(elements), frozenset())


def _closure_or_cycle(elements, arcs):
    """Transitive closure of the arc set, or a witness cycle."""
    succ = {e: set() for e in elements}
    for a, b in arcs:
        succ.setdefault(a, set()).add(b)
        succ.setdefault(b, set())
    closed = {}
    for start in succ:
        seen = set()
        stack = [start]
        while stack:
            cur = stack.pop()
            for nxt in succ[cur]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        closed[start] = seen
    for e in sorted(closed, key=str):
        if e in closed[e]:
            return None, _witness_cycle(succ, closed, e)
    pairs = frozenset((a, b) for a, reach in closed.items() for b in reach)
    return Poset(frozenset(succ), pairs), None


def _witness_cycle(succ, closed, start):
    path = [start]
    seen = {start}
    cur = start
    while True:
        # follow successors that can get back to start
        nxt = next(n for n in sorted(succ[cur], key=str)
                   if n == start or (n not in seen and start in closed[n]))
        if nxt == start:
            return path + [start]
        seen.add(nxt)
        path.append(nxt)
        cur = nxt


def validate_poset(covers, elements=()) -> Poset:
    """Build the poset generated by cover pairs; CycleDetected on cycles."""
    arcs = [(a, b) for a, b in covers]
    elems = set(elements)
    for a, b in arcs:
        elems.add(a)
        elems.add(b)
    poset, cycle = _closure_or_cycle(elems, arcs)
    if cycle is not None:
        raise CycleDetected(f"cycle {cycle}", witness=cycle)
    return poset


def find_common_order(constraints, elements=()) -> Poset:
    """Minimal partial order satisfying all required pairs x < y.

    Returns the transitive closure of the constraint digraph, never a
    total extension.  NoOrderExists carries a witness cycle when the
    constraints are contradictory.
    """
    arcs = list(constraints)
    elems = set(elements)
    for a, b in arcs:
        if a == b:
            raise NoOrderExists(f"reflexive constraint {a} < {a}", witness=[a, a])
        elems.add(a)
        elems.add(b)
    poset, cycle = _closure_or_cycle(elems, arcs)
    if cycle is not None:
        raise NoOrderExists(f"constraint cycle {cycle}", witness=cycle)
    return poset


@dataclass
class BoundednessReport:
    max_chain_length: dict
    epsilon_bounded: bool
    violating_element: object = None


def is_epsilon_bounded(poset: Poset, loc, epsilon, space) -> BoundednessReport:
    """Check the metric chain condition for a partial order.

    Every increasing chain starting at s must stay inside the open
    epsilon ball about loc(s); finiteness of chains is automatic for
    finite posets.  ``loc`` maps elements to points of ``space``.
    """
    for e in poset.elements:
        if e not in loc:
            raise UnknownPoint(f"no location for element {e!r}", witness=e)
        if loc[e] not in space.point_set:
            raise UnknownPoint(f"location {loc[e]!r} is not a point of the space",
                               witness=loc[e])
    lengths = {}

    def longest(e):
        if e in lengths:
            return lengths[e]
        lengths[e] = 1 + max((longest(t) for t in poset.above(e)), default=0)
        return lengths[e]

    violating = None
    for s in sorted(poset.elements):
        longest(s)
        for t in poset.above(s):
            if not space.distance(loc[s], loc[t]) < epsilon:
                violating = s
                break
        if violating is not None:
            break
    return BoundednessReport(max_chain_length=lengths,
                             epsilon_bounded=violating is None,
                             violating_element=violating)


def _stage_map(chain):
    """Label -> index of the innermost chain member containing it."""
    stages = {}
    previous = set()
    for i, layer in enumerate(chain):
        layer = set(layer)
        if not previous <= layer:
            raise NotNested(f"chain stage {i} does not contain stage {i - 1}",
                            witness=sorted(previous - layer))
        for lbl in layer - previous:
            stages[lbl] = i
        previous = layer
    return stages, previous


def image_partial_order(chain) -> Poset:
    """Block order induced by a nested submodule chain.

    ``chain`` lists nested basis-label sets, innermost first, ending with
    the full basis.  Elements new at stage i+1 (the complement of stage i
    inside stage i+1) precede everything at stage i and below.  A mapping
    {degree: chain} is accepted and produces the disjoint union of the
    per-degree orders.
    """
    if isinstance(chain, dict):
        out = antichain(())
        for deg in sorted(chain):
            out = out.union(image_partial_order(chain[deg]))
        return out
    stages, full = _stage_map(chain)
    pairs = set()
    for a in full:
        for b in full:
            if stages[a] > stages[b]:
                pairs.add((a, b))
    return Poset(frozenset(full), frozenset(pairs))


def shuffle_orders(p_main, p_shift, images, loc=None, epsilon=None) -> Poset:
    """Interleave the orders on a module and on its suspended copy.

    ``images`` is a pair of nested image chains (main side, shifted side),
    innermost first; labels absent from every image stage count as
    outermost.  A cross pair (t in the shifted side, s in the main side)
    is made comparable, shifted element first, exactly when s sits in an
    image stage at least as deep as t and, when ``epsilon`` is given, the
    distance between their locations is below 5*epsilon.
    """
    chain_main, chain_shift = images
    stage_main, _ = _stage_map(list(chain_main) + [p_main.elements])
    stage_shift, _ = _stage_map(list(chain_shift) + [p_shift.elements])
    base = p_main.union(p_shift)
    arcs = set(base.pairs)
    for t in p_shift.elements:
        for s in p_main.elements:
            if stage_main[s] > stage_shift[t]:
                continue
            if epsilon is not None:
                space, lmap = loc
                if not space.distance(lmap[s], lmap[t]) < 5 * epsilon:
                    continue
            arcs.add((t, s))
    poset, cycle = _closure_or_cycle(base.elements, arcs)
    if cycle is not None:
        # cannot happen for valid inputs; reported defensively
        raise CycleDetected(f"cycle {cycle}", witness=cycle)
    return poset
