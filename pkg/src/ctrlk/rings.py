"""Exact coefficient rings and their designated unit subgroups.

Four ring families are supported: the integers, integers mod n, integral
group rings of a finite group given by its multiplication table, and the
integral Laurent ring in one variable.  Elements are plain Python values:
ints for Z and Z/n, sparse dicts for group rings ({group index: int}) and
Laurent polynomials ({exponent: int}).  All arithmetic is exact; integers
are arbitrary precision.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DocumentError, NotAUnit, Singular

Z = "Z"
ZMOD = "Zmod"
GROUP_RING = "GroupRing"
LAURENT = "Laurent"


def _validate_group_table(table):
    m = len(table)
    if m == 0:
        raise DocumentError("group table is empty")
    for row in table:
        if len(row) != m or any(not (0 <= v < m) for v in row):
            raise DocumentError("group table is not square over 0..m-1")
    identity = None
    for e in range(m):
        if all(table[e][i] == i and table[i][e] == i for i in range(m)):
            identity = e
            break
    if identity is None:
        raise DocumentError("group table has no identity")
    for i in range(m):
        if not any(table[i][j] == identity and table[j][i] == identity for j in range(m)):
            raise DocumentError(f"group element {i} has no inverse")
    for a in range(m):
        for b in range(m):
            for c in range(m):
                if table[table[a][b]][c] != table[a][table[b][c]]:
                    raise DocumentError("group table is not associative")
    return identity


@dataclass(frozen=True)
class Ring:
    """Exact ring described by one of the four supported descriptors."""

    kind: str
    n: int = 0                      # modulus for Zmod
    table: tuple = ()               # multiplication table for GroupRing
    identity_index: int = field(default=0, compare=False)

    @staticmethod
    def integers() -> "Ring":
        return Ring(Z)

    @staticmethod
    def integers_mod(n: int) -> "Ring":
        if n < 2:
            raise DocumentError("Zmod needs n >= 2")
        return Ring(ZMOD, n=n)

    @staticmethod
    def group_ring(table) -> "Ring":
        tbl = tuple(tuple(row) for row in table)
        e = _validate_group_table(tbl)
        return Ring(GROUP_RING, table=tbl, identity_index=e)

    @staticmethod
    def laurent() -> "Ring":
        return Ring(LAURENT)

    # -- element plumbing ---------------------------------------------
    @property
    def group_size(self) -> int:
        return len(self.table)

    def normalize(self, x):
        if self.kind == Z:
            return int(x)
        if self.kind == ZMOD:
            return int(x) % self.n
        # sparse dicts with zero coefficients dropped
        out = {}
        for k, v in dict(x).items():
            k = int(k)
            v = int(v)
            if self.kind == GROUP_RING and not (0 <= k < self.group_size):
                raise DocumentError(f"group index {k} out of range")
            if v:
                out[k] = out.get(k, 0) + v
        return {k: v for k, v in out.items() if v}

    def zero(self):
        return 0 if self.kind in (Z, ZMOD) else {}

    def one(self):
        if self.kind in (Z, ZMOD):
            return self.normalize(1)
        if self.kind == GROUP_RING:
            return {self.identity_index: 1}
        return {0: 1}

    def is_zero(self, x) -> bool:
        return x == 0 if self.kind in (Z, ZMOD) else not x

    def eq(self, a, b) -> bool:
        return self.normalize(a) == self.normalize(b)

    def add(self, a, b):
        if self.kind == Z:
            return a + b
        if self.kind == ZMOD:
            return (a + b) % self.n
        out = dict(a)
        for k, v in b.items():
            out[k] = out.get(k, 0) + v
        return {k: v for k, v in out.items() if v}

    def neg(self, a):
        if self.kind == Z:
            return -a
        if self.kind == ZMOD:
            return (-a) % self.n
        return {k: -v for k, v in a.items()}

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.kind == Z:
            return a * b
        if self.kind == ZMOD:
            return (a * b) % self.n
        out = {}
        if self.kind == GROUP_RING:
            for g, u in a.items():
                for h, v in b.items():
                    k = self.table[g][h]
                    out[k] = out.get(k, 0) + u * v
        else:
            for g, u in a.items():
                for h, v in b.items():
                    out[g + h] = out.get(g + h, 0) + u * v
        return {k: v for k, v in out.items() if v}

    def group_inverse(self, g: int) -> int:
        for h in range(self.group_size):
            if self.table[g][h] == self.identity_index:
                return h
        raise DocumentError(f"group element {g} has no inverse")

    # -- units --------------------------------------------------------
    def invert(self, r):
        """Two-sided inverse of a unit, or NotAUnit."""
        if self.kind == Z:
            if r in (1, -1):
                return r
            raise NotAUnit(f"{r} is not a unit of Z")
        if self.kind == ZMOD:
            try:
                return pow(int(r), -1, self.n)
            except ValueError:
                raise NotAUnit(f"{r} is not a unit of Z/{self.n}") from None
        if self.kind == LAURENT:
            r = self.normalize(r)
            if len(r) == 1:
                (exp, coeff), = r.items()
                if coeff in (1, -1):
                    return {-exp: coeff}
            raise NotAUnit(f"{r} is not a unit of the Laurent ring")
        return self._invert_group_ring_element(self.normalize(r))

    def _invert_group_ring_element(self, r):
        # Trivial units +-g invert directly; anything else goes through the
        # left-regular representation over Z.
        if len(r) == 1:
            (g, coeff), = r.items()
            if coeff in (1, -1):
                return {self.group_inverse(g): coeff}
        m = self.group_size
        rows = [[Fraction(0)] * m for _ in range(m)]
        for g, coeff in r.items():
            for h in range(m):
                rows[self.table[g][h]][h] += coeff
        try:
            inv = _fraction_matrix_inverse(rows)
        except Singular:
            raise NotAUnit(f"{r} is not a unit of the group ring") from None
        cand = {}
        for h in range(m):
            v = inv[h][self.identity_index]
            if v.denominator != 1:
                raise NotAUnit(f"{r} is not a unit of the group ring")
            if v:
                cand[h] = int(v)
        if self.eq(self.mul(r, cand), self.one()) and self.eq(self.mul(cand, r), self.one()):
            return cand
        raise NotAUnit(f"{r} is not a unit of the group ring")

    def is_unit(self, r) -> bool:
        try:
            self.invert(r)
            return True
        except NotAUnit:
            return False

    # -- serialization ------------------------------------------------
    def element_to_json(self, x):
        x = self.normalize(x)
        if self.kind in (Z, ZMOD):
            return x
        return {str(k): v for k, v in sorted(x.items())}

    def element_from_json(self, obj):
        if self.kind in (Z, ZMOD):
            if not isinstance(obj, int):
                raise DocumentError(f"expected integer coefficient, got {obj!r}")
            return self.normalize(obj)
        if not isinstance(obj, dict):
            raise DocumentError(f"expected sparse coefficient map, got {obj!r}")
        return self.normalize({int(k): int(v) for k, v in obj.items()})

    def to_json(self):
        if self.kind == Z:
            return {"kind": "Z"}
        if self.kind == ZMOD:
            return {"kind": "Zmod", "n": self.n}
        if self.kind == GROUP_RING:
            return {"kind": "GroupRing", "table": [list(r) for r in self.table]}
        return {"kind": "Laurent"}

    @staticmethod
    def from_json(obj) -> "Ring":
        if not isinstance(obj, dict) or "kind" not in obj:
            raise DocumentError("ring descriptor must be an object with a 'kind'")
        kind = obj["kind"]
        if kind == "Z":
            return Ring.integers()
        if kind == "Zmod":
            return Ring.integers_mod(int(obj["n"]))
        if kind == "GroupRing":
            return Ring.group_ring(obj["table"])
        if kind == "Laurent":
            return Ring.laurent()
        raise DocumentError(f"unsupported ring kind {kind!r}")


ONE = "one"
PLUS_MINUS_ONE = "plus-minus-one"
PLUS_MINUS_GROUP = "plus-minus-group"
ALL_UNITS = "all-units"


@dataclass(frozen=True)
class UnitSubgroup:
    """Designated subgroup of the units of a ring."""

    ring: Ring
    kind: str

    def __post_init__(self):
        if self.kind not in (ONE, PLUS_MINUS_ONE, PLUS_MINUS_GROUP, ALL_UNITS):
            raise DocumentError(f"unsupported unit subgroup {self.kind!r}")
        if self.kind == PLUS_MINUS_GROUP and self.ring.kind != GROUP_RING:
            raise DocumentError("plus-minus-group requires a group ring")

    def contains(self, r) -> bool:
        return in_unit_subgroup(r, self)


def invert_unit(ring: Ring, r):
    """Inverse of a unit element; raises NotAUnit otherwise."""
    return ring.invert(r)


def in_unit_subgroup(r, subgroup: UnitSubgroup) -> bool:
    ring = subgroup.ring
    r = ring.normalize(r)
    if subgroup.kind == ONE:
        return ring.eq(r, ring.one())
    if subgroup.kind == PLUS_MINUS_ONE:
        return ring.eq(r, ring.one()) or ring.eq(r, ring.neg(ring.one()))
    if subgroup.kind == PLUS_MINUS_GROUP:
        return len(r) == 1 and next(iter(r.values())) in (1, -1)
    return ring.is_unit(r)


def _fraction_matrix_inverse(rows):
    """Gauss-Jordan over Q.  Raises Singular."""
    m = len(rows)
    aug = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(m)]
           for i, row in enumerate(rows)]
    for col in range(m):
        pivot = next((r for r in range(col, m) if aug[r][col]), None)
        if pivot is None:
            raise Singular("matrix is singular over Q")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        pv = aug[col][col]
        aug[col] = [v / pv for v in aug[col]]
        for r in range(m):
            if r != col and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [v - factor * w for v, w in zip(aug[r], aug[col])]
    return [row[m:] for row in aug]


def ring_matrix_inverse_oracle(ring: Ring, rows):
    """Brute-force two-sided matrix inverse, used as a test oracle.

    Over Z the inverse is computed with rational Gauss-Jordan and checked
    for integrality (unimodular input).  Over Z/n (and the other rings)
    elimination proceeds with unit pivots.  Raises Singular when no
    inverse exists along these routes.
    """
    m = len(rows)
    if any(len(r) != m for r in rows):
        raise Singular("matrix is not square")
    if m == 0:
        return []
    if ring.kind == Z:
        inv = _fraction_matrix_inverse([[Fraction(v) for v in row] for row in rows])
        if any(v.denominator != 1 for row in inv for v in row):
            raise Singular("integer matrix is not unimodular")
        return [[int(v) for v in row] for row in inv]
    return _unit_pivot_inverse(ring, rows)


def _unit_pivot_inverse(ring: Ring, rows):
    """Gauss-Jordan over an arbitrary ring using unit pivots only."""
    m = len(rows)
    aug = [[ring.normalize(v) for v in row]
           + [ring.one() if i == j else ring.zero() for j in range(m)]
           for i, row in enumerate(rows)]
    for col in range(m):
        pivot = None
        for r in range(col, m):
            if ring.is_unit(aug[r][col]):
                pivot = r
                break
        if pivot is None:
            raise Singular(f"no unit pivot available in column {col}")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = ring.invert(aug[col][col])
        aug[col] = [ring.mul(inv, v) for v in aug[col]]
        for r in range(m):
            if r != col and not ring.is_zero(aug[r][col]):
                factor = aug[r][col]
                aug[r] = [ring.sub(v, ring.mul(factor, w))
                          for v, w in zip(aug[r], aug[col])]
    return [row[m:] for row in aug]


def matrix_mul(ring: Ring, a, b):
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    out = [[ring.zero() for _ in range(m)] for _ in range(n)]
    for i in range(n):
        for j in range(m):
            acc = ring.zero()
            for t in range(k):
                acc = ring.add(acc, ring.mul(a[i][t], b[t][j]))
            out[i][j] = acc
    return out


def matrix_eq(ring: Ring, a, b) -> bool:
    if len(a) != len(b):
        return False
    for ra, rb in zip(a, b):
        if len(ra) != len(rb):
            return False
        if any(not ring.eq(x, y) for x, y in zip(ra, rb)):
            return False
    return True


def identity_matrix(ring: Ring, m: int):
    return [[ring.one() if i == j else ring.zero() for j in range(m)] for i in range(m)]
