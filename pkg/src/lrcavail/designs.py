"""Membership matrices and the combinatorial designs that supply them.

A membership matrix is the k x m 0/1 matrix whose columns are the
supports of local groups over the k systematic symbols.  It is stored
sparsely as column supports (1-based point labels) grouped into
parallel classes.  Three sources are shipped: a Kirkman triple system on
15 points, affine planes AG(2, q), and the zigzag block family with
k = r * t**r points.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .gf import FieldSpec

__all__ = [
    "MembershipMatrix",
    "ResolvableDesign",
    "ZigzagSpec",
    "Assumption1Report",
    "check_assumption1",
    "design_to_membership",
    "build_kirkman15",
    "build_affine_design",
    "build_zigzag_membership",
    "pair_counts",
]

Block = tuple[int, ...]


@dataclass(frozen=True)
class MembershipMatrix:
    """Column supports over the points ``1..k``, grouped into classes.

    ``classes[i]`` is the list of column supports forming class R_{i+1};
    columns are numbered class by class in that order.
    """

    k: int
    classes: tuple[tuple[Block, ...], ...]
    r: int | None = None

    def __post_init__(self) -> None:
        cls = tuple(tuple(tuple(sorted(int(x) for x in b)) for b in c) for c in self.classes)
        object.__setattr__(self, "classes", cls)
        for b in self.columns:
            if any(not 1 <= x <= self.k for x in b):
                raise ValueError(f"support {b} outside [1, {self.k}]")
            if len(set(b)) != len(b):
                raise ValueError(f"support {b} repeats a point")

    @property
    def columns(self) -> list[Block]:
        return [b for c in self.classes for b in c]

    @property
    def m(self) -> int:
        return sum(len(c) for c in self.classes)

    @property
    def t(self) -> int:
        return len(self.classes)

    def restrict(self, t: int) -> "MembershipMatrix":
        """Keep only the first ``t`` classes."""
        if t > self.t:
            raise ValueError(f"matrix has {self.t} classes, {t} requested")
        return MembershipMatrix(self.k, self.classes[:t], self.r)

    def to_dense(self) -> np.ndarray:
        R = np.zeros((self.k, self.m), dtype=np.int64)
        for j, b in enumerate(self.columns):
            for x in b:
                R[x - 1, j] = 1
        return R

    def row_supports(self) -> list[set[int]]:
        rows: list[set[int]] = [set() for _ in range(self.k)]
        for j, b in enumerate(self.columns):
            for x in b:
                rows[x - 1].add(j)
        return rows

    @classmethod
    def from_dense(cls, R, class_sizes=None, r=None) -> "MembershipMatrix":
        R = np.asarray(R)
        cols = [tuple(int(i) + 1 for i in np.nonzero(R[:, j])[0]) for j in range(R.shape[1])]
        sizes = class_sizes or [len(cols)]
        if sum(sizes) != len(cols):
            raise ValueError("class sizes do not cover the columns")
        it = iter(cols)
        classes = tuple(tuple(next(it) for _ in range(s)) for s in sizes)
        return cls(R.shape[0], classes, r)

    def to_json(self) -> dict:
        r = self.r if self.r is not None else max((len(b) for b in self.columns), default=0)
        return {"k": self.k, "r": r, "t": self.t,
                "classes": [[list(b) for b in c] for c in self.classes]}

    @classmethod
    def from_json(cls, d: dict) -> "MembershipMatrix":
        return cls(int(d["k"]), tuple(tuple(tuple(b) for b in c) for c in d["classes"]),
                   d.get("r"))


@dataclass(frozen=True)
class ResolvableDesign:
    """A 2-(k, b, c, r, lambda) resolvable design on points ``1..k``."""

    k: int
    r: int
    classes: tuple[tuple[Block, ...], ...]
    lam: int = 1
    name: str = ""

    def __post_init__(self) -> None:
        cls = tuple(tuple(tuple(sorted(b)) for b in c) for c in self.classes)
        object.__setattr__(self, "classes", cls)

    @property
    def blocks(self) -> list[Block]:
        return [b for c in self.classes for b in c]

    @property
    def b(self) -> int:
        return len(self.blocks)

    @property
    def c(self) -> int:
        return len(self.classes)

    def params(self) -> tuple[int, int, int, int, int]:
        return (self.k, self.b, self.c, self.r, self.lam)

    def validate(self) -> list[str]:
        """Problems with the declared parameters; empty when valid."""
        problems = []
        for blk in self.blocks:
            if len(blk) != self.r:
                problems.append(f"block {blk} has size {len(blk)} != {self.r}")
        points = set(range(1, self.k + 1))
        for i, c in enumerate(self.classes, 1):
            seen = Counter(x for blk in c for x in blk)
            if set(seen) != points or any(v != 1 for v in seen.values()):
                problems.append(f"class {i} does not partition the points")
        counts = pair_counts(self.blocks)
        for pair in itertools.combinations(range(1, self.k + 1), 2):
            if counts.get(pair, 0) != self.lam:
                problems.append(f"pair {pair} in {counts.get(pair, 0)} blocks")
        return problems

    def to_json(self) -> dict:
        return {"k": self.k, "r": self.r, "t": self.c, "lambda": self.lam, "b": self.b,
                "classes": [[list(b) for b in c] for c in self.classes]}

    @classmethod
    def from_json(cls, d: dict) -> "ResolvableDesign":
        return cls(int(d["k"]), int(d["r"]), tuple(tuple(tuple(b) for b in c) for c in d["classes"]),
                   int(d.get("lambda", 1)))


def pair_counts(blocks) -> Counter:
    counts: Counter = Counter()
    for blk in blocks:
        for pair in itertools.combinations(sorted(blk), 2):
            counts[pair] += 1
    return counts


@dataclass(frozen=True)
class ZigzagSpec:
    r: int
    t: int

    def __post_init__(self) -> None:
        if self.r < 1 or self.t < 1:
            raise ValueError("r and t must be positive")

    @property
    def k(self) -> int:
        return self.r * self.t**self.r

    @property
    def blocks(self) -> int:
        return self.t ** (self.r + 1)


@dataclass
class Assumption1Report:
    conformant: bool
    violations: list[str] = field(default_factory=list)
    column_weights: list[int] = field(default_factory=list)
    min_row_weight: int = 0

    def to_json(self) -> dict:
        return {"conformant": self.conformant, "violations": self.violations,
                "column_weights": self.column_weights, "min_row_weight": self.min_row_weight}


def check_assumption1(R: MembershipMatrix, k: int, r: int, t: int) -> Assumption1Report:
    """Check that R's first t classes give t partitions of [k] into r-sets
    and that any two rows share at most one column.

    Only a row-count mismatch raises; every other defect (including
    ``r`` not dividing ``k``) is reported as a violation.
    """
    if R.k != k:
        raise ValueError(f"membership matrix has {R.k} rows, expected k={k}")
    violations: list[str] = []
    if r < 1 or k % r:
        violations.append(f"r={r} does not divide k={k}")
    if R.t < t:
        violations.append(f"{R.t} classes present, t={t} required")
    used = R.restrict(min(t, R.t))
    if r >= 1 and k % r == 0 and used.m != t * (k // r):
        violations.append(f"{used.m} columns, expected t*k/r={t * (k // r)}")
    weights = [len(b) for b in used.columns]
    col = 0
    points = set(range(1, k + 1))
    for ci, cls in enumerate(used.classes, 1):
        for b in cls:
            col += 1
            if len(b) != r:
                violations.append(f"column {col} (class {ci}) has weight {len(b)} != r={r}")
        cover = Counter(x for b in cls for x in b)
        dup = sorted(x for x, v in cover.items() if v > 1)
        missing = sorted(points - set(cover))
        if dup:
            violations.append(f"class {ci} covers points {dup} more than once")
        if missing:
            violations.append(f"class {ci} misses points {missing}")
    rows = used.row_supports()
    shared: dict[tuple[int, int], list[int]] = {}
    for j, b in enumerate(used.columns, 1):
        for pair in itertools.combinations(b, 2):
            shared.setdefault(pair, []).append(j)
    for pair, cols in sorted(shared.items()):
        if len(cols) > 1:
            violations.append(f"rows {pair[0]} and {pair[1]} share columns {cols}")
    return Assumption1Report(
        conformant=not violations,
        violations=violations,
        column_weights=weights,
        min_row_weight=min((len(s) for s in rows), default=0),
    )


def design_to_membership(D: ResolvableDesign, t: int) -> MembershipMatrix:
    """Incidence sub-matrix of the first ``t`` parallel classes."""
    if t < 1:
        raise ValueError("t must be positive")
    if D.c < t:
        raise ValueError(f"design has {D.c} parallel classes, t={t} requested")
    return MembershipMatrix(D.k, D.classes[:t], D.r)


# One resolution of KTS(15).  The first two classes match the local
# groups l1..l5 and l6..l10 of the (30, 15, 3, 2) worked example.
_KIRKMAN15 = (
    ((1, 2, 3), (6, 7, 8), (11, 12, 13), (4, 9, 14), (5, 10, 15)),
    ((1, 5, 6), (4, 7, 11), (8, 9, 12), (3, 10, 14), (2, 13, 15)),
    ((1, 4, 8), (2, 6, 12), (3, 5, 11), (7, 14, 15), (9, 10, 13)),
    ((1, 7, 13), (2, 9, 11), (3, 8, 15), (4, 6, 10), (5, 12, 14)),
    ((1, 9, 15), (2, 4, 5), (3, 7, 12), (6, 13, 14), (8, 10, 11)),
    ((1, 10, 12), (2, 8, 14), (3, 4, 13), (5, 7, 9), (6, 11, 15)),
    ((1, 11, 14), (2, 7, 10), (3, 6, 9), (4, 12, 15), (5, 8, 13)),
)


def build_kirkman15() -> ResolvableDesign:
    return ResolvableDesign(15, 3, _KIRKMAN15, 1, "kirkman15")


def _prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    m = 0
    v = q
    while v % p == 0:
        v //= p
        m += 1
    if v != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, m


def build_affine_design(q: int, spec: FieldSpec | None = None) -> ResolvableDesign:
    """Lines of the affine plane AG(2, q) as a 2-(q^2, q(q+1), q+1, q, 1) design.

    Point (x, y) is labelled ``1 + x + q*y`` with x, y field elements.
    Classes are the slopes 0, 1, ..., q-1 (lines y = s*x + b, ordered by
    intercept b) followed by the vertical lines x = c.
    """
    p, m = _prime_power(q)
    F = spec or FieldSpec(p, m)
    if F.order != q:
        raise ValueError(f"field {F!r} does not have order {q}")

    def label(x: int, y: int) -> int:
        return 1 + x + q * y

    classes = []
    for s in range(q):
        cls = []
        for b in range(q):
            cls.append(tuple(sorted(label(x, F.add(F.mul(s, x), b)) for x in range(q))))
        classes.append(tuple(cls))
    classes.append(tuple(tuple(sorted(label(c, y) for y in range(q))) for c in range(q)))
    return ResolvableDesign(q * q, q, tuple(classes), 1, f"affine{q}")


_ZIGZAG_LIMIT = 1 << 20


def build_zigzag_membership(spec: ZigzagSpec) -> MembershipMatrix:
    """Blocks Z^l_s = {x_{i,j} : i + (l-1) e_j = s} with the congruence
    taken componentwise mod t in Z_t^r.

    x_{i,j} is point ``(j-1)*t**r + i + 1`` where i is read as an r-digit
    base-t vector, least significant digit first.  Class l holds the
    t**r blocks Z^l_0, ..., Z^l_{t^r - 1}.
    """
    r, t = spec.r, spec.t
    if spec.k * spec.t > _ZIGZAG_LIMIT:
        raise ValueError(f"zigzag size k={spec.k}, t={t} exceeds builder limit")
    size = t**r

    def vec(i: int) -> list[int]:
        return [(i // t**d) % t for d in range(r)]

    def num(v) -> int:
        return sum(c * t**d for d, c in enumerate(v))

    classes = []
    for l in range(1, t + 1):
        cls = []
        for s in range(size):
            sv = vec(s)
            blk = []
            for j in range(1, r + 1):
                iv = list(sv)
                iv[j - 1] = (iv[j - 1] - (l - 1)) % t
                blk.append((j - 1) * size + num(iv) + 1)
            cls.append(tuple(blk))
        classes.append(tuple(cls))
    return MembershipMatrix(spec.k, tuple(classes), r)


def lemma1_counts(R: MembershipMatrix) -> tuple[int, int, int]:
    """(ones, max column weight * m, min row weight * k) for R."""
    ones = sum(len(b) for b in R.columns)
    rows = R.row_supports()
    return (ones, max((len(b) for b in R.columns), default=0) * R.m,
            min((len(s) for s in rows), default=0) * R.k)

