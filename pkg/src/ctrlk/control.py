"""Metric control spaces, sampled paths, and radius bookkeeping.

A space is a finite label set with either weighted-graph shortest-path
distances (kept exact as Fractions) or Euclidean coordinates.  Paths are
finite sample sequences; the radius of a path is the diameter of its
sample set, with traversed edge lengths folded in for graph models so
that edge interiors are covered.  Ideal boundary points can be declared
as a metric frontier with distances to every point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import networkx as nx

from .errors import DocumentError, UnknownPoint

INF = math.inf


def as_length(value):
    """Exact length when possible: ints and decimal strings become Fractions."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, float):
        return value
    raise DocumentError(f"cannot interpret {value!r} as a length")


def length_to_json(value):
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else int(value)
    if value == INF:
        return "inf"
    return value


@dataclass
class ControlSpace:
    points: tuple
    kind: str                      # "graph" | "euclidean" | "matrix"
    edges: dict = field(default_factory=dict)      # frozenset{a,b} -> weight
    coords: dict = field(default_factory=dict)
    frontier: dict = field(default_factory=dict)   # id -> {point: distance}
    _dist: dict = field(default_factory=dict, repr=False)

    # -- constructors ---------------------------------------------------
    @staticmethod
    def graph(points, weighted_edges, frontier=None) -> "ControlSpace":
        points = tuple(points)
        seen = set(points)
        if len(seen) != len(points):
            raise DocumentError("duplicate point labels")
        edges = {}
        for a, b, w in weighted_edges:
            if a not in seen or b not in seen:
                raise UnknownPoint(f"edge endpoint {a!r}/{b!r} unknown")
            w = as_length(w)
            if w < 0:
                raise DocumentError("negative edge weight")
            key = frozenset((a, b))
            if len(key) == 1:
                continue
            edges[key] = min(edges[key], w) if key in edges else w
        space = ControlSpace(points, "graph", edges=edges)
        space._dist = _shortest_paths(points, edges)
        space._attach_frontier(frontier or [])
        return space

    @staticmethod
    def euclidean(coords, frontier=None) -> "ControlSpace":
        pts = tuple(sorted(coords))
        space = ControlSpace(pts, "euclidean",
                             coords={p: tuple(float(x) for x in coords[p]) for p in pts})
        space._attach_frontier(frontier or [])
        return space

    @staticmethod
    def from_matrix(points, dist, edges=None, frontier=None) -> "ControlSpace":
        space = ControlSpace(tuple(points), "matrix", edges=dict(edges or {}))
        space._dist = dict(dist)
        space._attach_frontier(frontier or [])
        return space

    def _attach_frontier(self, declared):
        front = {}
        for item in declared:
            fid = item["id"]
            dist = {p: as_length(v) for p, v in item["dist"].items()}
            missing = set(self.points) - set(dist)
            if missing:
                raise DocumentError(f"frontier point {fid!r} lacks distances "
                                    f"to {sorted(missing)}")
            for p in self.points:
                if dist[p] < 0:
                    raise DocumentError("negative frontier distance")
                for q in self.points:
                    if self.distance(p, q) > dist[p] + dist[q] or \
                            dist[p] > dist[q] + self.distance(p, q):
                        raise DocumentError(
                            f"frontier distances for {fid!r} break the "
                            f"triangle inequality at ({p}, {q})")
            front[fid] = dist
        self.frontier = front

    # -- metric ----------------------------------------------------------
    @property
    def point_set(self) -> set:
        return set(self.points)

    def distance(self, a, b):
        if a == b:
            if a not in self.point_set and a not in self.frontier:
                raise UnknownPoint(f"unknown point {a!r}", witness=a)
            return Fraction(0) if self.kind != "euclidean" else 0.0
        if a in self.frontier or b in self.frontier:
            if b in self.frontier and a not in self.frontier:
                a, b = b, a
            if b in self.frontier:  # both ideal: smallest consistent detour
                return min(self.frontier[a][p] + self.frontier[b][p]
                           for p in self.points)
            return self.frontier[a][b]
        for p in (a, b):
            if p not in self.point_set:
                raise UnknownPoint(f"unknown point {p!r}", witness=p)
        if self.kind == "euclidean":
            xa, xb = self.coords[a], self.coords[b]
            return math.sqrt(sum((u - v) ** 2 for u, v in zip(xa, xb)))
        return self._dist.get((a, b), INF)

    def adjacent(self, a, b) -> bool:
        """Whether a sampled path may step from a to b."""
        if a == b:
            return True
        if self.kind in ("euclidean",):
            return True
        if a in self.frontier or b in self.frontier:
            return a in self.frontier or b in self.frontier
        return frozenset((a, b)) in self.edges

    def edge_weight(self, a, b):
        if a == b:
            return Fraction(0)
        if self.kind == "euclidean":
            return self.distance(a, b)
        if a in self.frontier or b in self.frontier:
            return self.distance(a, b)
        return self.edges.get(frozenset((a, b)), self.distance(a, b))

    # -- subspaces ---------------------------------------------------------
    def restrict(self, subset, extra_frontier=None) -> "ControlSpace":
        """Metric subspace: distances are inherited, graph edges induced.

        ``extra_frontier`` maps new ideal-point ids to real points of this
        space; their declared distances are measured here.
        """
        keep = [p for p in self.points if p in set(subset)]
        dist = {(a, b): self.distance(a, b) for a in keep for b in keep if a != b}
        edges = {}
        if self.kind == "graph":
            edges = {k: w for k, w in self.edges.items() if k <= set(keep)}
        elif self.kind == "matrix":
            edges = {k: w for k, w in self.edges.items() if k <= set(keep)}
        elif self.kind == "euclidean":
            edges = None
        sub = ControlSpace.from_matrix(keep, dist, edges=edges or {})
        if self.kind == "euclidean":
            sub.kind = "matrix"
            sub.edges = {frozenset((a, b)): dist[(a, b)]
                         for a in keep for b in keep if a != b}
        declared = []
        for fid, dmap in self.frontier.items():
            declared.append({"id": fid, "dist": {p: dmap[p] for p in keep}})
        for fid, anchor in (extra_frontier or {}).items():
            declared.append({"id": fid,
                             "dist": {p: self.distance(anchor, p) for p in keep}})
        sub._attach_frontier(declared)
        return sub

    # -- serialization ------------------------------------------------------
    def to_json(self):
        doc = {"points": list(self.points)}
        if self.kind == "graph":
            doc["metric"] = {"kind": "graph",
                             "edges": sorted([sorted(k) + [length_to_json(w)]
                                              for k, w in self.edges.items()])}
        elif self.kind == "euclidean":
            doc["metric"] = {"kind": "euclidean",
                             "coords": {p: list(c) for p, c in self.coords.items()}}
        else:
            doc["metric"] = {
                "kind": "matrix",
                "dist": sorted([[a, b, length_to_json(w)]
                                for (a, b), w in self._dist.items() if a < b])}
        doc["frontier"] = [{"id": fid,
                            "dist": {p: length_to_json(v) for p, v in dmap.items()}}
                           for fid, dmap in sorted(self.frontier.items())]
        return doc

    @staticmethod
    def from_json(doc) -> "ControlSpace":
        metric = doc.get("metric", {})
        frontier = doc.get("frontier", [])
        kind = metric.get("kind")
        if kind == "graph":
            return ControlSpace.graph(doc["points"], metric.get("edges", []), frontier)
        if kind == "euclidean":
            return ControlSpace.euclidean(metric["coords"], frontier)
        if kind == "matrix":
            dist = {}
            for a, b, w in metric.get("dist", []):
                dist[(a, b)] = as_length(w)
                dist[(b, a)] = as_length(w)
            return ControlSpace.from_matrix(doc["points"], dist, frontier=frontier)
        raise DocumentError(f"unsupported metric kind {kind!r}")


def _shortest_paths(points, edges):
    dist = {}
    for a in points:
        dist[(a, a)] = Fraction(0)
    for key, w in edges.items():
        a, b = tuple(key)
        dist[(a, b)] = min(dist.get((a, b), INF), w)
        dist[(b, a)] = dist[(a, b)]
    for mid in points:
        for a in points:
            d_am = dist.get((a, mid))
            if d_am is None:
                continue
            for b in points:
                d_mb = dist.get((mid, b))
                if d_mb is None:
                    continue
                if dist.get((a, b), INF) > d_am + d_mb:
                    dist[(a, b)] = d_am + d_mb
    return {k: v for k, v in dist.items() if v != INF}


@dataclass(frozen=True)
class SampledPath:
    samples: tuple

    def __post_init__(self):
        if not self.samples:
            raise DocumentError("a sampled path needs at least one sample")

    @property
    def start(self):
        return self.samples[0]

    @property
    def end(self):
        return self.samples[-1]

    def reversed(self) -> "SampledPath":
        return SampledPath(tuple(reversed(self.samples)))


def validate_path(path, space: ControlSpace):
    samples = tuple(path.samples if isinstance(path, SampledPath) else path)
    for p in samples:
        if p not in space.point_set and p not in space.frontier:
            raise UnknownPoint(f"unknown point {p!r}", witness=p)
    if space.kind != "euclidean":
        for a, b in zip(samples, samples[1:]):
            if not space.adjacent(a, b):
                raise DocumentError(f"samples {a!r}, {b!r} are not adjacent")
    return SampledPath(samples)


def path_radius(path, space: ControlSpace):
    """Diameter of the sample set; graph walks fold in traversed edges."""
    samples = validate_path(path, space).samples
    radius = Fraction(0) if space.kind != "euclidean" else 0.0
    for i, a in enumerate(samples):
        for b in samples[i + 1:]:
            d = space.distance(a, b)
            if d > radius:
                radius = d
    if space.kind != "euclidean":
        for a, b in zip(samples, samples[1:]):
            if a != b:
                w = space.edge_weight(a, b)
                if w > radius:
                    radius = w
    return radius


def _reach_graph(space: ControlSpace, points, epsilon):
    """Edges usable by a walk of radius below epsilon."""
    g = nx.Graph()
    g.add_nodes_from(points)
    for i, a in enumerate(points):
        for b in points[i + 1:]:
            if space.kind == "euclidean":
                if space.distance(a, b) < epsilon:
                    g.add_edge(a, b)
            else:
                if space.adjacent(a, b) and space.edge_weight(a, b) < epsilon \
                        and space.distance(a, b) < epsilon:
                    g.add_edge(a, b)
    return g


def _compat_graph(space: ControlSpace, points, epsilon):
    g = nx.Graph()
    g.add_nodes_from(points)
    for i, a in enumerate(points):
        for b in points[i + 1:]:
            if space.distance(a, b) < epsilon:
                g.add_edge(a, b)
    return g


def _path_reachable(space: ControlSpace, points, seeds, epsilon) -> set:
    """All points reachable from the seed set by a walk of radius < epsilon.

    A walk of radius < epsilon visits a vertex set that is pairwise within
    epsilon (a clique of the compatibility graph) and connected through
    edges shorter than epsilon; conversely any such set supports a walk.
    Enumerating maximal cliques is exact for the finite model.
    """
    seeds = set(seeds)
    if not seeds:
        return set()
    compat = _compat_graph(space, points, epsilon)
    reach = _reach_graph(space, points, epsilon)
    out = set()
    for clique in nx.find_cliques(compat):
        clique = set(clique)
        if not clique & seeds:
            continue
        sub = reach.subgraph(clique)
        for component in nx.connected_components(sub):
            if component & seeds:
                out |= component
    return out


def enlarge(space: ControlSpace, subset, epsilon) -> set:
    """Path enlargement: points joined to the subset by a walk of radius
    strictly below epsilon.  For epsilon <= 0 the subset itself is
    returned (constant paths have radius 0, which is not below 0)."""
    subset = set(subset)
    unknown = subset - space.point_set
    if unknown:
        raise UnknownPoint(f"unknown points {sorted(unknown)}",
                           witness=sorted(unknown))
    epsilon = as_length(epsilon) if not isinstance(epsilon, float) else epsilon
    if epsilon <= 0:
        return set(subset)
    return _path_reachable(space, list(space.points), subset, epsilon)


def reduce(space: ControlSpace, subset, epsilon) -> set:
    """Path reduction via the complement identity."""
    subset = set(subset)
    complement = space.point_set - subset
    return space.point_set - enlarge(space, complement, epsilon)


def frontier_enlargement(space: ControlSpace, epsilon) -> set:
    """Points reachable from a declared ideal boundary point by a walk of
    radius strictly below epsilon, the ideal point riding along as a
    virtual sample."""
    epsilon = as_length(epsilon) if not isinstance(epsilon, float) else epsilon
    if not space.frontier or epsilon <= 0:
        return set()
    points = list(space.points) + list(space.frontier)
    reached = _path_reachable(space, points, set(space.frontier), epsilon)
    return reached & space.point_set


@dataclass
class ExcisionReport:
    equal: bool
    inside: tuple
    relative: tuple
    only_inside: tuple = ()
    only_relative: tuple = ()


def check_excision(space: ControlSpace, open_set, epsilon, boundary=None) -> ExcisionReport:
    """Compare the two path enlargements of the excision identity.

    The declared closure of the open set is the set itself plus
    ``boundary``; when omitted, the combinatorial boundary (points outside
    with an edge into the set, or everything outside for non-graph
    models) is used.
    """
    open_set = set(open_set)
    unknown = open_set - space.point_set
    if unknown:
        raise UnknownPoint(f"unknown points {sorted(unknown)}", witness=sorted(unknown))
    outside = space.point_set - open_set
    if boundary is None:
        if space.kind == "graph":
            boundary = {p for p in outside
                        if any(space.adjacent(p, q) for q in open_set)}
        else:
            boundary = set(outside)
    closure = open_set | set(boundary)
    left = enlarge(space, outside, epsilon) & open_set
    closed_sub = space.restrict(closure)
    right = enlarge(closed_sub, set(boundary) & closure, epsilon) & open_set
    return ExcisionReport(equal=left == right,
                          inside=tuple(sorted(left)),
                          relative=tuple(sorted(right)),
                          only_inside=tuple(sorted(left - right)),
                          only_relative=tuple(sorted(right - left)))
