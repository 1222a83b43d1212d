"""Systematic MDS generator matrices: Cauchy Reed-Solomon and Gabidulin."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import linalg
from .errors import UnrecoverableError
from .gf import FieldSpec, base_degree, lin_independent_points

__all__ = [
    "GeneratorMatrix",
    "GabidulinCode",
    "MdsCertificate",
    "systematic_rs",
    "gabidulin",
    "moore_matrix",
    "certify_mds",
    "mds_erasure_decode",
]


@dataclass(frozen=True, eq=False)
class GeneratorMatrix:
    spec: FieldSpec
    rows: np.ndarray

    def __post_init__(self) -> None:
        rows = np.array(self.rows, dtype=np.int64, ndmin=2)
        self.spec.check(rows)
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)

    @property
    def k(self) -> int:
        return self.rows.shape[0]

    @property
    def n(self) -> int:
        return self.rows.shape[1]

    @property
    def systematic(self) -> bool:
        return np.array_equal(self.rows[:, : self.k], np.eye(self.k, dtype=np.int64))

    def encode(self, message) -> np.ndarray:
        message = np.asarray(message, dtype=np.int64)
        if message.shape[-1] != self.k:
            raise ValueError(f"message length {message.shape[-1]} != k={self.k}")
        self.spec.check(message)
        return linalg.matmul(self.spec, message, self.rows)

    def to_json(self) -> dict:
        return {"field": self.spec.to_json(), "k": self.k, "n": self.n,
                "systematic": self.systematic, "rows": self.rows.tolist()}

    @classmethod
    def from_json(cls, d: dict) -> "GeneratorMatrix":
        G = cls(FieldSpec.from_json(d["field"]), np.array(d["rows"], dtype=np.int64))
        if (G.k, G.n) != (d.get("k", G.k), d.get("n", G.n)):
            raise ValueError("declared shape does not match rows")
        return G


def systematic_rs(spec: FieldSpec, n: int, k: int) -> GeneratorMatrix:
    """``[I | C]`` with C the Cauchy matrix ``1 / (x_i - y_j)``.

    x_i = i for i < k and y_j = k + j, so every square submatrix of C is
    nonsingular and every parity entry is nonzero.
    """
    if not 0 < k <= n:
        raise ValueError(f"need 0 < k <= n, got k={k}, n={n}")
    if spec.order < n:
        raise ValueError(f"{spec!r} has {spec.order} elements, a length-{n} code needs {n}")
    x = np.arange(k, dtype=np.int64)[:, None]
    y = np.arange(k, n, dtype=np.int64)[None, :]
    C = spec.inv(spec.sub(x, y)) if n > k else np.zeros((k, 0), dtype=np.int64)
    return GeneratorMatrix(spec, np.concatenate([np.eye(k, dtype=np.int64), C], axis=1))


@dataclass
class MdsCertificate:
    mds: bool
    mode: str
    checked: int
    total: int
    failing: tuple[int, ...] | None = None


def certify_mds(G: GeneratorMatrix, exhaustive_limit: int = 10**6, samples: int = 10**4,
                seed: int = 0, chunk: int = 4096) -> MdsCertificate:
    """Check that every k-column subset of G is nonsingular.

    Exhaustive when C(n, k) <= ``exhaustive_limit``; otherwise ``samples``
    random subsets are tested and the mode says so.
    """
    n, k = G.n, G.k
    total = math.comb(n, k)
    if total <= exhaustive_limit:
        mode = "exhaustive"
        subsets = itertools.combinations(range(n), k)
    else:
        mode = "sampled"
        rng = np.random.default_rng(seed)
        subsets = (tuple(sorted(rng.choice(n, k, replace=False))) for _ in range(samples))
    checked = 0
    while True:
        batch = list(itertools.islice(subsets, chunk))
        if not batch:
            break
        idx = np.array(batch, dtype=np.int64)
        mats = G.rows[:, idx].transpose(1, 0, 2)
        ranks = linalg.batch_rank(G.spec, mats)
        checked += len(batch)
        bad = np.nonzero(ranks < k)[0]
        if bad.size:
            return MdsCertificate(False, mode, checked, total, tuple(int(i) for i in idx[bad[0]]))
    return MdsCertificate(True, mode, checked, total)


def moore_matrix(spec: FieldSpec, points: Sequence[int], base_q: int, rows: int) -> np.ndarray:
    """Entry (i, j) is ``points[j] ** (base_q ** i)``."""
    M = np.zeros((rows, len(points)), dtype=np.int64)
    for j, y in enumerate(points):
        v = int(y)
        for i in range(rows):
            M[i, j] = v
            v = spec.pow(v, base_q)
    return M


@dataclass(frozen=True, eq=False)
class GabidulinCode:
    """[N, K] Gabidulin code over ``spec`` evaluated at GF(base_q)-independent points.

    ``generator`` is the Moore matrix G_Gab, ``systematic`` is
    ``inv(G1) @ G_Gab`` where G1 is its first K columns.
    """

    spec: FieldSpec
    base_q: int
    N: int
    K: int
    points: tuple[int, ...]
    generator: np.ndarray
    g1_inv: np.ndarray
    systematic: np.ndarray = field(repr=False)

    @property
    def g1(self) -> np.ndarray:
        return self.generator[:, : self.K]

    def systematic_matrix(self) -> GeneratorMatrix:
        return GeneratorMatrix(self.spec, self.systematic)

    def transform_message(self, message) -> np.ndarray:
        """Linearized-polynomial coefficients for a systematic message."""
        return linalg.matmul(self.spec, np.asarray(message, dtype=np.int64), self.g1_inv)

    def evaluate(self, coeffs, point: int) -> int:
        F = self.spec
        acc = 0
        v = int(point)
        for c in coeffs:
            acc = F.add(acc, F.mul(int(c), v))
            v = F.pow(v, self.base_q)
        return acc

    def encode_poly(self, message) -> np.ndarray:
        """Encode via polynomial evaluation; equals ``message @ systematic``."""
        coeffs = self.transform_message(message)
        return np.array([self.evaluate(coeffs, y) for y in self.points], dtype=np.int64)

    def to_json(self) -> dict:
        return {"field": self.spec.to_json(), "base_q": self.base_q, "N": self.N, "K": self.K,
                "points": list(self.points)}

    @classmethod
    def from_json(cls, d: dict) -> "GabidulinCode":
        spec = FieldSpec.from_json(d["field"])
        return _gabidulin_from_points(spec, int(d["base_q"]), int(d["K"]), [int(y) for y in d["points"]])


def _gabidulin_from_points(spec, base_q, K, points) -> GabidulinCode:
    G = moore_matrix(spec, points, base_q, K)
    g1_inv = linalg.inverse(spec, G[:, :K])
    Gbar = linalg.matmul(spec, g1_inv, G)
    return GabidulinCode(spec, base_q, len(points), K, tuple(points), G, g1_inv, Gbar)


def gabidulin(spec_ext: FieldSpec, base_q: int, N_cal: int, K_cal: int) -> GabidulinCode:
    if not 0 < K_cal <= N_cal:
        raise ValueError(f"need 0 < K <= N, got K={K_cal}, N={N_cal}")
    M = base_degree(spec_ext, base_q)
    if M < N_cal:
        raise ValueError(f"{spec_ext!r} has degree {M} over GF({base_q}); length {N_cal} needs M >= {N_cal}")
    points = [y.value for y in lin_independent_points(spec_ext, base_q, N_cal)]
    return _gabidulin_from_points(spec_ext, base_q, K_cal, points)


def mds_erasure_decode(G: GeneratorMatrix, received: Sequence[int | None]) -> np.ndarray:
    """Message m with ``m @ G`` agreeing with every unerased coordinate.

    ``None`` marks an erased coordinate.
    """
    if len(received) != G.n:
        raise ValueError(f"received length {len(received)} != n={G.n}")
    alive = [i for i, v in enumerate(received) if v is not None]
    if len(alive) < G.k:
        raise UnrecoverableError(f"only {len(alive)} symbols survive, k={G.k} needed",
                                 rank=linalg.rank(G.spec, G.rows[:, alive]) if alive else 0, needed=G.k)
    sub = G.rows[:, alive]
    vals = np.array([received[i] for i in alive], dtype=np.int64)
    try:
        return linalg.solve_left(G.spec, sub, vals)
    except linalg.SingularMatrixError as exc:
        r = linalg.rank(G.spec, sub)
        if r < G.k:
            raise UnrecoverableError(f"surviving columns have rank {r} < k={G.k}",
                                     rank=r, needed=G.k) from exc
        raise UnrecoverableError("received word is not consistent with the code",
                                 rank=r, needed=G.k) from exc
