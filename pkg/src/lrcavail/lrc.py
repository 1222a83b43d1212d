"""Locally repairable codes with (r, t)-availability.

Symbol indices are 0-based throughout this module; the JSON bundle and
the command line use 1-based indices.

``construction1`` splits the last t columns of a systematic (N + t, k)
MDS generator into k/r local-parity columns each, one column per block
of the t parallel classes of a membership matrix.  ``construction2``
starts from the systematic form of a Gabidulin code, applies the same
split with t - 1 classes and then adds unit-coefficient local parities over
the systematic symbols (grouped by the last class) and over the global
parities (grouped consecutively), which gives locality to every symbol.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import linalg
from .designs import MembershipMatrix, check_assumption1
from .errors import GroupUnavailableError
from .gf import FieldSpec
from .mds import GabidulinCode, GeneratorMatrix, mds_erasure_decode, moore_matrix

__all__ = [
    "LrcCode",
    "AvailabilityReport",
    "DecodeResult",
    "construction1",
    "construction2",
    "encode",
    "repair_symbol",
    "verify_availability",
    "decode_thm3",
    "decode_thm4",
    "decode_generic",
    "erase",
]

Group = tuple[int, ...]


@dataclass(frozen=True, eq=False)
class LrcCode:
    """Generator matrix plus the index sets and repair groups of an LRC.

    ``local_supports`` maps each local parity to the symbols it combines;
    ``groups`` maps a symbol to its recorded repair groups.
    """

    kind: str
    k: int
    r: int
    t: int
    generator: GeneratorMatrix
    systematic: tuple[int, ...]
    global_parity: tuple[int, ...]
    local1: tuple[tuple[int, ...], ...]
    local2: tuple[int, ...]
    groups: dict[int, tuple[Group, ...]]
    local_supports: dict[int, Group] = field(default_factory=dict)
    N: int | None = None
    ghat: GeneratorMatrix | None = None
    gab: GabidulinCode | None = None
    membership: MembershipMatrix | None = None
    _coeffs: dict = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return self.generator.n

    @property
    def spec(self) -> FieldSpec:
        return self.generator.spec

    @property
    def params(self) -> tuple[int, int, int, int]:
        return (self.n, self.k, self.r, self.t)

    @property
    def rate(self) -> float:
        return self.k / self.n

    def repair_coefficients(self, i: int, group: Group) -> np.ndarray:
        """Coefficients expressing column i as a combination of the group's columns."""
        key = (i, tuple(group))
        if key not in self._coeffs:
            G = self.generator.rows
            lam = linalg.solve_any(self.spec, G[:, list(group)], G[:, i])
            if lam is None:
                raise ValueError(f"symbol {i} is not a function of symbols {list(group)}")
            self._coeffs[key] = lam
        return self._coeffs[key]

    def to_json(self) -> dict:
        one = lambda xs: [x + 1 for x in xs]  # noqa: E731
        d = {
            "kind": self.kind,
            "params": {"n": self.n, "k": self.k, "r": self.r, "t": self.t},
            "field": self.spec.to_json(),
            "generator": self.generator.rows.tolist(),
            "index_sets": {
                "systematic": one(self.systematic),
                "global": one(self.global_parity),
                "local1": [one(c) for c in self.local1],
                "local2": one(self.local2),
            },
            "groups": [{"symbol": s + 1, "repair": [one(g) for g in gs]}
                       for s, gs in sorted(self.groups.items())],
            "local_supports": [{"parity": p + 1, "support": one(s)}
                               for p, s in sorted(self.local_supports.items())],
        }
        prov: dict = {}
        if self.N is not None:
            prov["N"] = self.N
        if self.ghat is not None:
            prov["mds"] = self.ghat.to_json()
        if self.gab is not None:
            prov["gabidulin"] = self.gab.to_json()
        if self.membership is not None:
            prov["membership"] = self.membership.to_json()
        d["provenance"] = prov
        return d

    @classmethod
    def from_json(cls, d: dict) -> "LrcCode":
        zero = lambda xs: tuple(int(x) - 1 for x in xs)  # noqa: E731
        spec = FieldSpec.from_json(d["field"])
        G = GeneratorMatrix(spec, np.array(d["generator"], dtype=np.int64))
        p = d["params"]
        ix = d["index_sets"]
        prov = d.get("provenance", {})
        code = cls(
            kind=d["kind"],
            k=int(p["k"]), r=int(p["r"]), t=int(p["t"]),
            generator=G,
            systematic=zero(ix["systematic"]),
            global_parity=zero(ix.get("global", [])),
            local1=tuple(zero(c) for c in ix.get("local1", [])),
            local2=zero(ix.get("local2", [])),
            groups={int(g["symbol"]) - 1: tuple(zero(x) for x in g["repair"]) for g in d["groups"]},
            local_supports={int(e["parity"]) - 1: zero(e["support"]) for e in d.get("local_supports", [])},
            N=prov.get("N"),
            ghat=GeneratorMatrix.from_json(prov["mds"]) if "mds" in prov else None,
            gab=GabidulinCode.from_json(prov["gabidulin"]) if "gabidulin" in prov else None,
            membership=MembershipMatrix.from_json(prov["membership"]) if "membership" in prov else None,
        )
        if code.n != int(p["n"]):
            raise ValueError(f"generator has {code.n} columns, params say n={p['n']}")
        return code


def _require_conformant(R: MembershipMatrix, k: int, r: int, t: int) -> None:
    if r < 1 or k % r:
        raise ValueError(f"r must divide k (r={r}, k={k})")
    if R.k != k:
        raise ValueError(f"membership matrix has k={R.k}, code has k={k}")
    rep = check_assumption1(R, k, r, t)
    if not rep.conformant:
        raise ValueError("membership matrix is not a valid layout: " + "; ".join(rep.violations[:5]))


def construction1(ghat: GeneratorMatrix, R: MembershipMatrix, r: int, t: int) -> LrcCode:
    """Split the last t columns of a systematic (N + t, k) MDS generator."""
    if t < 1:
        raise ValueError("t must be at least 1")
    k = ghat.k
    N = ghat.n - t
    if N < k:
        raise ValueError(f"MDS code length {ghat.n} leaves N={N} < k={k}")
    if not ghat.systematic:
        raise ValueError("MDS generator must be systematic")
    _require_conformant(R, k, r, t)
    src = ghat.rows[:, N:]
    if not np.all(src != 0):
        row, col = map(int, np.argwhere(src == 0)[0])
        raise ValueError(f"zero parity entry at row {row + 1}, column {N + col + 1}")
    R = R.restrict(t)
    cols = [ghat.rows[:, :N]]
    local1 = []
    supports: dict[int, Group] = {}
    nxt = N
    for ci, cls in enumerate(R.classes):
        idx = []
        for blk in cls:
            members = [x - 1 for x in blk]
            col = np.zeros((k, 1), dtype=np.int64)
            col[members, 0] = src[members, ci]
            cols.append(col)
            supports[nxt] = tuple(members)
            idx.append(nxt)
            nxt += 1
        local1.append(tuple(idx))
    G = GeneratorMatrix(ghat.spec, np.concatenate(cols, axis=1))
    groups: dict[int, tuple[Group, ...]] = {}
    for s in range(k):
        gs = []
        for cls in local1:
            p = next(p for p in cls if s in supports[p])
            gs.append(tuple(sorted(set(supports[p]) - {s})) + (p,))
        groups[s] = tuple(gs)
    for p, sup in supports.items():
        groups[p] = (sup,)
    return LrcCode(
        kind="construction1", k=k, r=r, t=t, generator=G,
        systematic=tuple(range(k)), global_parity=tuple(range(k, N)),
        local1=tuple(local1), local2=(), groups=groups, local_supports=supports,
        N=N, ghat=ghat, membership=R,
    )


def construction2(gab: GabidulinCode, R: MembershipMatrix, r: int, t: int) -> LrcCode:
    """All-symbol-locality LRC from an [N + t - 1, k] Gabidulin code."""
    if t < 1:
        raise ValueError("t must be at least 1")
    k = gab.K
    N = gab.N - (t - 1)
    if r < 1 or k % r:
        raise ValueError(f"r must divide k (r={r}, k={k})")
    if N % r:
        raise ValueError(f"r must divide N (r={r}, N={N})")
    if N < k:
        raise ValueError(f"Gabidulin length {gab.N} leaves N={N} < k={k}")
    _require_conformant(R, k, r, t)
    R = R.restrict(t)
    gbar = gab.systematic_matrix()
    if t > 1:
        step1 = construction1(gbar, MembershipMatrix(k, R.classes[: t - 1], R.r), r, t - 1)
        G1 = step1.generator.rows
        local1 = step1.local1
        supports = dict(step1.local_supports)
        groups = {s: step1.groups[s] for s in range(k)}
        for p in supports:
            groups[p] = (supports[p],)
    else:
        G1 = gbar.rows[:, :N]
        local1, supports, groups = (), {}, {s: () for s in range(k)}
    step2_groups = [tuple(x - 1 for x in blk) for blk in R.classes[t - 1]]
    step2_groups += [tuple(range(g, g + r)) for g in range(k, N, r)]
    cols = [G1]
    nxt = G1.shape[1]
    local2 = []
    for members in step2_groups:
        # unit coefficients from the base field
        cols.append(np.asarray(gab.spec.sum(G1[:, list(members)], axis=1), dtype=np.int64)[:, None])
        supports[nxt] = members
        local2.append(nxt)
        groups[nxt] = (members,)
        for s in members:
            extra = tuple(sorted(set(members) - {s})) + (nxt,)
            groups[s] = tuple(groups.get(s, ())) + (extra,)
        nxt += 1
    G = GeneratorMatrix(gab.spec, np.concatenate(cols, axis=1))
    return LrcCode(
        kind="construction2", k=k, r=r, t=t, generator=G,
        systematic=tuple(range(k)), global_parity=tuple(range(k, N)),
        local1=tuple(local1), local2=tuple(local2), groups=groups, local_supports=supports,
        N=N, ghat=gbar, gab=gab, membership=R,
    )


def encode(code: LrcCode, message) -> np.ndarray:
    return code.generator.encode(message)


def repair_symbol(code: LrcCode, cw: Sequence[int | None], i: int, j: int) -> int:
    """Rebuild symbol ``i`` from its ``j``-th repair group."""
    groups = code.groups.get(i, ())
    if not 0 <= j < len(groups):
        raise IndexError(f"symbol {i} has {len(groups)} repair groups")
    group = groups[j]
    erased = [u for u in group if cw[u] is None]
    if erased:
        raise GroupUnavailableError(f"group unavailable: symbol(s) {erased} erased", erased)
    lam = code.repair_coefficients(i, group)
    return code.spec.dot(lam, [cw[u] for u in group])


@dataclass
class AvailabilityReport:
    groups: dict[int, list[dict]]
    max_r_used: int
    t_achieved: int
    all_symbol: bool
    failures: list[str]

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "groups": [{"symbol": s + 1, "repair": [
                {"group": [u + 1 for u in e["group"]], "size_ok": e["size_ok"],
                 "in_span": e["in_span"]} for e in es]} for s, es in sorted(self.groups.items())],
            "max_r_used": self.max_r_used, "t_achieved": self.t_achieved,
            "all_symbol": self.all_symbol, "failures": self.failures,
        }


def verify_availability(code: LrcCode) -> AvailabilityReport:
    """Certify every recorded repair group algebraically.

    A group is valid for symbol i when it excludes i, has at most r
    members and column i lies in the span of the group's columns.
    """
    F = code.spec
    G = code.generator.rows
    failures: list[str] = []
    per: dict[int, list[dict]] = {}
    max_r = 0
    for s, gs in sorted(code.groups.items()):
        entries = []
        for g in gs:
            size_ok = len(g) <= code.r and s not in g
            span = linalg.in_span(F, G[:, list(g)], G[:, s]) if s not in g else False
            if not size_ok:
                failures.append(f"symbol {s + 1}: group {[u + 1 for u in g]} violates size/exclusion")
            if not span:
                failures.append(f"symbol {s + 1}: not a function of group {[u + 1 for u in g]}")
            max_r = max(max_r, len(g))
            entries.append({"group": g, "size_ok": size_ok, "in_span": span})
        valid = [set(e["group"]) for e in entries if e["size_ok"] and e["in_span"]]
        for a in range(len(valid)):
            for b in range(a + 1, len(valid)):
                if valid[a] & valid[b]:
                    failures.append(f"symbol {s + 1}: groups {a + 1} and {b + 1} intersect")
        per[s] = entries
    t_ach = min((_disjoint_count(per.get(s, [])) for s in code.systematic), default=0)
    if t_ach < code.t:
        failures.append(f"availability {t_ach} < t={code.t}")
    all_symbol = all(_disjoint_count(per.get(s, [])) >= 1 for s in range(code.n))
    return AvailabilityReport(per, max_r, t_ach, all_symbol, failures)


def _disjoint_count(entries: list[dict]) -> int:
    chosen: list[set] = []
    for e in entries:
        if e["size_ok"] and e["in_span"]:
            g = set(e["group"])
            if all(not (g & c) for c in chosen):
                chosen.append(g)
    return len(chosen)


@dataclass
class DecodeResult:
    message: np.ndarray
    path: str
    within_guarantee: bool
    erasures: int


def _erased(code: LrcCode, received: Sequence[int | None]) -> set[int]:
    if len(received) != code.n:
        raise ValueError(f"received length {len(received)} != n={code.n}")
    return {i for i, v in enumerate(received) if v is None}


def decode_generic(code: LrcCode, received: Sequence[int | None]) -> np.ndarray:
    return mds_erasure_decode(code.generator, received)


def _generic_fallback(code, received, erased, within) -> DecodeResult:
    msg = decode_generic(code, received)
    return DecodeResult(msg, "generic", within, len(erased))


def decode_thm3(code: LrcCode, received: Sequence[int | None]) -> DecodeResult:
    """Structured erasure decoder for split-parity (``construction1``) codes.

    Case 1 decodes the punctured (N, k) MDS code on systematic and global
    symbols.  Case 2 first rebuilds the split MDS parity of every local
    class that has no erasures by summing its local parities.
    """
    if code.kind != "construction1" or code.ghat is None:
        raise ValueError("decode_thm3 needs a construction1 code")
    F = code.spec
    N, k, t = code.N, code.k, code.t
    erased = _erased(code, received)
    within = len(erased) <= N - k + t
    alive_L = [i for i in range(N) if i not in erased]
    cols = list(alive_L)
    vals = [received[i] for i in alive_L]
    path = "case1"
    if len(alive_L) < k:
        path = "case2"
        for ci, cls in enumerate(code.local1):
            if all(p not in erased for p in cls):
                cols.append(N + ci)
                vals.append(F.sum([received[p] for p in cls]))
    if len(cols) >= k:
        sub = code.ghat.rows[:, cols[:k]]
        msg = linalg.solve_left(F, sub, np.array(vals[:k], dtype=np.int64))
        return DecodeResult(msg, path, within, len(erased))
    return _generic_fallback(code, received, erased, within)


def _evaluation_points(code: LrcCode) -> dict[int, int]:
    """Point at which each symbol of I, P_gbl and P2 evaluates f."""
    F = code.spec
    pts = {i: code.gab.points[i] for i in range(code.N)}
    for p in code.local2:
        pts[p] = F.sum([pts[u] for u in code.local_supports[p]])
    return pts


def decode_thm4(code: LrcCode, received: Sequence[int | None]) -> DecodeResult:
    """Structured erasure decoder for Gabidulin-based (``construction2``) codes.

    Unerased systematic, global and step-2 symbols are evaluations of the
    linearized polynomial with coefficients ``m @ inv(G1)``; every
    erasure-free step-1 class adds one more evaluation.  Interpolating at
    k independent points recovers the coefficients and ``m = coeffs @ G1``.
    """
    if code.kind != "construction2" or code.gab is None:
        raise ValueError("decode_thm4 needs a construction2 code")
    F = code.spec
    gab = code.gab
    N, k, r, t = code.N, code.k, code.r, code.t
    erased = _erased(code, received)
    within = len(erased) <= N + N // r - k - k // r + t
    key = ("moore",)
    if key not in code._coeffs:
        pts = _evaluation_points(code)
        extra = {ci: gab.points[N + ci] for ci in range(len(code.local1))}
        code._coeffs[key] = (
            {i: moore_matrix(F, [y], gab.base_q, k)[:, 0] for i, y in pts.items()},
            {ci: moore_matrix(F, [y], gab.base_q, k)[:, 0] for ci, y in extra.items()},
        )
    sym_rows, cls_rows = code._coeffs[key]
    rows = [sym_rows[i] for i in sorted(sym_rows) if i not in erased]
    vals = [received[i] for i in sorted(sym_rows) if i not in erased]

    def interpolate():
        A = np.array(rows, dtype=np.int64).T if rows else np.zeros((k, 0), dtype=np.int64)
        if A.shape[1] < k or linalg.rank(F, A) < k:
            return None
        coeffs = linalg.solve_left(F, A, np.array(vals, dtype=np.int64))
        return linalg.matmul(F, coeffs, gab.g1)

    msg = interpolate()
    if msg is not None:
        return DecodeResult(msg, "case1", within, len(erased))
    for ci, cls in enumerate(code.local1):
        if all(p not in erased for p in cls):
            rows.append(cls_rows[ci])
            vals.append(F.sum([received[p] for p in cls]))
    msg = interpolate()
    if msg is not None:
        return DecodeResult(msg, "case2", within, len(erased))
    return _generic_fallback(code, received, erased, within)


def erase(codeword, positions) -> list[int | None]:
    """Copy of ``codeword`` with the given positions set to None."""
    out: list[int | None] = [int(v) for v in codeword]
    for i in positions:
        out[i] = None
    return out

