"""Arithmetic in prime and extension fields GF(p^m).

Elements are integers in ``[0, p**m)`` holding the polynomial-basis
coordinates little-endian in base p, i.e. ``value = sum(c_i * p**i)``.
For p = 2 this is the usual bit-vector encoding, so ``x`` is ``2`` and
``x**2`` is ``4``.

All arithmetic entry points on :class:`FieldSpec` accept Python ints or
numpy integer arrays and broadcast.  Fields up to order 2**16 use
precomputed log/antilog tables (full product tables up to order 1024);
larger fields fall back to schoolbook polynomial arithmetic.
"""

from __future__ import annotations

import functools
import operator
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

__all__ = [
    "FieldSpec",
    "FieldElement",
    "FieldMismatchError",
    "LinearizedPolynomial",
    "DEFAULT_POLYS",
    "field_arith",
    "frobenius",
    "lin_poly_eval",
    "lin_independent_points",
    "base_degree",
    "is_irreducible",
    "gf2",
]

# ascending coefficients, monic
DEFAULT_POLYS: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 1): (0, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 0, 0, 0, 1),
    (2, 7): (1, 0, 0, 1, 0, 0, 0, 1),
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0, 1),
    (2, 9): (1, 0, 0, 0, 1, 0, 0, 0, 0, 1),
    (2, 10): (1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1),
    (2, 11): (1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (2, 12): (1, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 1),
    (2, 13): (1, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (2, 14): (1, 1, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1),
    (2, 15): (1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (2, 16): (1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (5, 2): (2, 1, 1),
    (7, 2): (3, 1, 1),
}

_TABLE_ORDER = 1 << 16
_FULL_TABLE_ORDER = 1 << 10


class FieldMismatchError(ValueError):
    """Raised when elements of different fields are combined."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomials over GF(p): ascending coefficient lists --------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a = _trim([x % p for x in a])
    b = _trim([x % p for x in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) >= len(b):
        coef = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - coef * c) % p
        _trim(a)
    return a


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _psub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def _pgcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a = _trim([x % p for x in a])
    b = _trim([x % p for x in b])
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _ppowmod(base: Sequence[int], e: int, mod: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(base, mod, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), mod, p)
        base = _pmod(_pmul(base, base, p), mod, p)
        e >>= 1
    return result


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Rabin's test: f of degree m is irreducible iff f | x^(p^m) - x and
    gcd(x^(p^(m/l)) - x, f) = 1 for every prime l dividing m."""
    f = _trim([c % p for c in poly])
    m = len(f) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    x = [0, 1]

    def x_pow_p_pow(e: int) -> list[int]:
        h = x
        for _ in range(e):
            h = _ppowmod(h, p, f, p)
        return h

    if _psub(x_pow_p_pow(m), x, p):
        return False
    for ell in _prime_factors(m):
        g = _pgcd(_psub(x_pow_p_pow(m // ell), x, p), f, p)
        if len(g) > 1:
            return False
    return True


def _smallest_irreducible(p: int, m: int) -> tuple[int, ...]:
    for v in range(p**m):
        coeffs = [(v // p**i) % p for i in range(m)] + [1]
        if is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise ValueError(f"no irreducible polynomial of degree {m} over GF({p})")


# -- field tables ------------------------------------------------------------

class _Tables:
    __slots__ = ("exp", "log", "inv", "neg", "mul", "add")

    def __init__(self, spec: "FieldSpec") -> None:
        q = spec.order
        gen = spec._find_generator()
        exp = np.zeros(2 * (q - 1), dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        v = 1
        for i in range(q - 1):
            exp[i] = v
            log[v] = i
            v = spec._mul_slow(v, gen)
        exp[q - 1:] = exp[: q - 1]
        self.exp = exp
        self.log = log
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = exp[(q - 1 - log[1:]) % (q - 1)]
        self.inv = inv
        vals = np.arange(q, dtype=np.int64)
        self.neg = spec._neg_digits(vals)
        self.mul = None
        self.add = None
        if q <= _FULL_TABLE_ORDER:
            a = vals[:, None]
            b = vals[None, :]
            prod = exp[log[a] + log[b]]
            prod[0, :] = 0
            prod[:, 0] = 0
            self.mul = prod
            if spec.p != 2:
                self.add = spec._add_digits(a, b)


@functools.lru_cache(maxsize=None)
def _tables_for(spec: "FieldSpec") -> _Tables:
    return _Tables(spec)


def _is_scalar(*xs) -> bool:
    return all(isinstance(x, (int, np.integer)) for x in xs)


def _ret(x, scalar: bool):
    return int(x) if scalar else x


@dataclass(frozen=True)
class FieldSpec:
    """The field GF(p^m) defined by a monic irreducible polynomial.

    ``poly`` lists ascending coefficients and must have length ``m + 1``;
    when omitted, the shipped default for ``(p, m)`` is used (or the
    lexicographically smallest irreducible polynomial if none is shipped).
    """

    p: int
    m: int = 1
    poly: tuple[int, ...] | None = field(default=None)

    def __post_init__(self) -> None:
        if not _is_prime(self.p):
            raise ValueError(f"characteristic {self.p} is not prime")
        if self.m < 1:
            raise ValueError("extension degree must be positive")
        if self.p**self.m > 2**64:
            raise ValueError("field order exceeds 2**64")
        poly = self.poly
        if poly is None:
            poly = DEFAULT_POLYS.get((self.p, self.m)) or _smallest_irreducible(self.p, self.m)
        poly = tuple(int(c) % self.p for c in poly)
        if len(poly) != self.m + 1 or poly[-1] != 1:
            raise ValueError(f"polynomial must be monic of degree {self.m}: {poly}")
        if not is_irreducible(poly, self.p):
            raise ValueError(f"polynomial {poly} is reducible over GF({self.p})")
        object.__setattr__(self, "poly", poly)

    # -- basic attributes --

    @property
    def order(self) -> int:
        return self.p**self.m

    @property
    def _t(self) -> _Tables | None:
        if self.order <= _TABLE_ORDER:
            return _tables_for(self)
        return None

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.m})"

    def __call__(self, value: int) -> "FieldElement":
        return FieldElement(self, value)

    def to_json(self) -> dict:
        return {"p": self.p, "m": self.m, "poly": list(self.poly)}

    @classmethod
    def from_json(cls, d: dict) -> "FieldSpec":
        poly = d.get("poly")
        return cls(int(d["p"]), int(d.get("m", 1)), tuple(poly) if poly is not None else None)

    def digits(self, a: int) -> list[int]:
        """Polynomial-basis coordinates of ``a`` (ascending)."""
        return [(a // self.p**i) % self.p for i in range(self.m)]

    def from_digits(self, ds: Sequence[int]) -> int:
        return sum((int(d) % self.p) * self.p**i for i, d in enumerate(ds))

    def check(self, a) -> None:
        arr = np.asarray(a)
        if arr.size and (arr.min() < 0 or arr.max() >= self.order):
            raise ValueError(f"value out of range for {self!r}")

    # -- reference (schoolbook) arithmetic --

    def _mul_slow(self, a: int, b: int) -> int:
        a, b = int(a), int(b)
        if self.p == 2:
            prod = 0
            while b:
                if b & 1:
                    prod ^= a
                b >>= 1
                a <<= 1
            modulus = self.from_digits(self.poly)
            m = self.m
            for shift in range(prod.bit_length() - 1 - m, -1, -1):
                if prod >> (shift + m) & 1:
                    prod ^= modulus << shift
            return prod
        prod = _pmul(self.digits(a), self.digits(b), self.p)
        return self.from_digits(_pmod(prod, self.poly, self.p))

    def _pow_slow(self, a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self._mul_slow(result, a)
            a = self._mul_slow(a, a)
            e >>= 1
        return result

    def _find_generator(self) -> int:
        q = self.order
        if q == 2:
            return 1
        factors = _prime_factors(q - 1)
        for g in range(2, q):
            if all(self._pow_slow(g, (q - 1) // f) != 1 for f in factors):
                return g
        raise RuntimeError("no generator found")  # unreachable for a field

    def _add_digits(self, a, b):
        p = self.p
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        w = 1
        for _ in range(self.m):
            out += ((a // w + b // w) % p) * w
            w *= p
        return out

    def _neg_digits(self, a):
        p = self.p
        a = np.asarray(a, dtype=np.int64)
        out = np.zeros_like(a)
        w = 1
        for _ in range(self.m):
            out += ((p - (a // w) % p) % p) * w
            w *= p
        return out

    # -- public vectorized arithmetic --

    def add(self, a, b):
        s = _is_scalar(a, b)
        if self.p == 2:
            return _ret(np.bitwise_xor(a, b), s)
        t = self._t
        if t is not None and t.add is not None:
            return _ret(t.add[a, b], s)
        if self.m == 1:
            return _ret((np.asarray(a) + np.asarray(b)) % self.p, s)
        return _ret(self._add_digits(a, b), s)

    def neg(self, a):
        s = _is_scalar(a)
        if self.p == 2:
            return a
        t = self._t
        if t is not None:
            return _ret(t.neg[a], s)
        return _ret(self._neg_digits(a), s)

    def sub(self, a, b):
        if self.p == 2:
            return self.add(a, b)
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        s = _is_scalar(a, b)
        t = self._t
        if t is None:
            f = np.frompyfunc(self._mul_slow, 2, 1)
            r = f(a, b)
            return int(r) if s else np.asarray(r, dtype=np.int64)
        if t.mul is not None:
            return _ret(t.mul[a, b], s)
        a = np.asarray(a)
        b = np.asarray(b)
        r = t.exp[t.log[a] + t.log[b]]
        r = np.where((a == 0) | (b == 0), 0, r)
        return _ret(r, s)

    def inv(self, a):
        s = _is_scalar(a)
        if np.any(np.asarray(a) == 0):
            raise ZeroDivisionError(f"inverse of zero in {self!r}")
        t = self._t
        if t is None:
            f = np.frompyfunc(lambda x: self._pow_slow(x, self.order - 2), 1, 1)
            r = f(a)
            return int(r) if s else np.asarray(r, dtype=np.int64)
        return _ret(t.inv[a], s)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        """``a**e`` for a scalar element; negative exponents invert first."""
        a = int(a)
        if e < 0:
            a = self.inv(a)
            e = -e
        if a == 0:
            return 1 if e == 0 else 0
        t = self._t
        if t is not None:
            return int(t.exp[(int(t.log[a]) * e) % (self.order - 1)])
        return self._pow_slow(a, e)

    def dot(self, a, b) -> int:
        """Inner product of two 1-d element vectors."""
        prods = self.mul(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        return self.sum(prods)

    def sum(self, a, axis=None):
        a = np.asarray(a, dtype=np.int64)
        if axis is None:
            a = a.ravel()
            axis = 0
        if self.p == 2:
            r = np.bitwise_xor.reduce(a, axis=axis)
        elif self.m == 1:
            r = a.sum(axis=axis) % self.p
        else:
            r = functools.reduce(self.add, np.moveaxis(a, axis, 0), 0)
        return int(r) if np.ndim(r) == 0 else r


def gf2(m: int) -> FieldSpec:
    """GF(2^m) with the shipped default polynomial."""
    return FieldSpec(2, m)


@dataclass(frozen=True)
class FieldElement:
    spec: FieldSpec
    value: int

    def __post_init__(self) -> None:
        v = int(self.value)
        if not 0 <= v < self.spec.order:
            raise ValueError(f"{v} is not an element of {self.spec!r}")
        object.__setattr__(self, "value", v)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise FieldMismatchError(f"{self.spec!r} vs {other.spec!r}")
            return other.value
        if isinstance(other, int):
            return FieldElement(self.spec, other).value
        return NotImplemented

    def _binop(op):
        def method(self, other):
            o = self._other(other)
            if o is NotImplemented:
                return o
            return FieldElement(self.spec, getattr(self.spec, op)(self.value, o))
        return method

    __add__ = _binop("add")
    __sub__ = _binop("sub")
    __mul__ = _binop("mul")
    __truediv__ = _binop("div")
    __radd__ = __add__
    __rmul__ = __mul__
    del _binop

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.spec, self.spec.neg(self.value))

    def __pow__(self, e: int) -> "FieldElement":
        return FieldElement(self.spec, self.spec.pow(self.value, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.spec, self.spec.inv(self.value))

    def __int__(self) -> int:
        return self.value

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        return f"{self.spec!r}({self.value})"


_OPS = {"add": operator.add, "sub": operator.sub, "mul": operator.mul, "div": operator.truediv}


def field_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    if op not in _OPS:
        raise ValueError(f"unknown operation {op!r}")
    if a.spec != b.spec:
        raise FieldMismatchError(f"{a.spec!r} vs {b.spec!r}")
    return _OPS[op](a, b)


def base_degree(spec: FieldSpec, base_q: int) -> int:
    """Extension degree of ``spec`` over the subfield GF(base_q)."""
    s = 0
    v = 1
    while v < base_q:
        v *= spec.p
        s += 1
    if v != base_q or s == 0 or spec.m % s:
        raise ValueError(f"GF({base_q}) is not a subfield of {spec!r}")
    return spec.m // s


def frobenius(a: FieldElement | int, base_q: int, iterations: int = 1, spec: FieldSpec | None = None):
    """``a ** (base_q ** iterations)``.

    Accepts a :class:`FieldElement`, or a raw int together with ``spec``
    (in which case an int is returned).
    """
    if isinstance(a, FieldElement):
        return FieldElement(a.spec, frobenius(a.value, base_q, iterations, a.spec))
    if spec is None:
        raise TypeError("spec required for raw integer elements")
    deg = base_degree(spec, base_q)
    v = int(a)
    for _ in range(iterations % deg):
        v = spec.pow(v, base_q)
    return v


@dataclass(frozen=True)
class LinearizedPolynomial:
    """``f(y) = sum_i coeffs[i] * y ** (base_q ** i)`` over ``spec``."""

    spec: FieldSpec
    base_q: int
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        base_degree(self.spec, self.base_q)
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        self.spec.check(self.coeffs)

    def __call__(self, y):
        return lin_poly_eval(self, y)


def lin_poly_eval(f: LinearizedPolynomial, y: FieldElement | int):
    if isinstance(y, FieldElement):
        if y.spec != f.spec:
            raise FieldMismatchError(f"{y.spec!r} vs {f.spec!r}")
        return FieldElement(f.spec, lin_poly_eval(f, y.value))
    F = f.spec
    acc = 0
    power = int(y)
    for c in f.coeffs:
        acc = F.add(acc, F.mul(c, power))
        power = F.pow(power, f.base_q)
    return acc


def lin_independent_points(spec: FieldSpec, base_q: int, count: int) -> list[FieldElement]:
    """The first ``count`` polynomial-basis elements 1, x, x^2, ...

    These are independent over GF(base_q) because x generates the full
    field over every subfield.
    """
    deg = base_degree(spec, base_q)
    if count > deg:
        raise ValueError(f"at most {deg} points of {spec!r} are independent over GF({base_q})")
    if count < 0:
        raise ValueError("count must be non-negative")
    return [FieldElement(spec, spec.p**i) for i in range(count)]
