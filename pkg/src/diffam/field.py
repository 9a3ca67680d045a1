"""Arithmetic in GF(p^m), cyclotomic classes and uniform-cyclotomy Gaussian periods.

Elements are integers in ``[0, p^m)``: the base-p digits are the polynomial
coefficients, constant term least significant. Under this encoding the
additive group of the field is :func:`diffam.group.field_additive`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cache
from typing import Sequence

import numpy as np
from sympy import factorint, isprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p

from .errors import InputError, PreconditionError


def _digits(x: int, p: int, m: int) -> list[int]:
    out = []
    for _ in range(m):
        x, d = divmod(x, p)
        out.append(d)
    return out


def _undigits(ds: Sequence[int], p: int) -> int:
    x = 0
    for d in reversed(ds):
        x = x * p + d
    return x


def _mulmod(a: list[int], b: list[int], modulus: Sequence[int], p: int) -> list[int]:
    """Product of two residues (constant-first coefficient lists) modulo a monic polynomial."""
    m = len(modulus) - 1
    prod = [0] * (2 * m - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    for k in range(len(prod) - 1, m - 1, -1):
        c = prod[k] % p
        if c:
            for i in range(m + 1):
                prod[k - m + i] -= c * modulus[i]
    return [c % p for c in prod[:m]]


@cache
def lex_least_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Least monic irreducible of degree m, ordered by its base-p integer value."""
    for low in range(p**m):
        coeffs = _digits(low, p, m) + [1]
        if gf_irreducible_p([ZZ(c) for c in reversed(coeffs)], p, ZZ):
            return tuple(coeffs)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class Field:
    """GF(p^m) with fixed modulus polynomial and primitive element.

    Construct through :func:`build_field`, which caches instances.
    """

    def __init__(self, p: int, m: int, modulus: Sequence[int], primitive: int, exp: list[int]):
        self.p = p
        self.m = m
        self.modulus = tuple(modulus)
        self.primitive = primitive
        self.r = p**m
        self.exp = exp
        log = [-1] * self.r
        for i, x in enumerate(exp):
            log[x] = i
        self.log = log

    def __repr__(self):
        return f"GF({self.p}^{self.m})"

    @property
    def order(self) -> int:
        return self.r

    def descriptor(self) -> dict:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus)}

    # -- arithmetic ---------------------------------------------------------

    def _check(self, x) -> int:
        if not isinstance(x, (int, np.integer)) or not 0 <= x < self.r:
            raise InputError(f"{x!r} is not an element of {self}")
        return int(x)

    def add(self, a: int, b: int) -> int:
        a, b = self._check(a), self._check(b)
        if self.p == 2:
            return a ^ b
        da, db = _digits(a, self.p, self.m), _digits(b, self.p, self.m)
        return _undigits([(x + y) % self.p for x, y in zip(da, db)], self.p)

    def neg(self, a: int) -> int:
        a = self._check(a)
        if self.p == 2:
            return a
        return _undigits([(-x) % self.p for x in _digits(a, self.p, self.m)], self.p)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        a, b = self._check(a), self._check(b)
        if a == 0 or b == 0:
            return 0
        return self.exp[(self.log[a] + self.log[b]) % (self.r - 1)]

    def pow(self, a: int, e: int) -> int:
        a = self._check(a)
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("0 has no inverse")
            return 1 if e == 0 else 0
        return self.exp[(self.log[a] * e) % (self.r - 1)]

    def inv(self, a: int) -> int:
        return self.pow(a, -1)

    def power_of_primitive(self, i: int) -> int:
        return self.exp[i % (self.r - 1)]

    # -- trace ----------------------------------------------------------------

    def _check_subdegree(self, d: int) -> int:
        if d < 1 or self.m % d:
            raise InputError(f"subfield degree {d} does not divide {self.m}")
        return d

    def trace(self, x: int, d: int = 1) -> int:
        """Relative trace to GF(p^d): x + x^(p^d) + ... (m/d terms)."""
        x, d = self._check(x), self._check_subdegree(d)
        acc = 0
        for i in range(self.m // d):
            acc = self.add(acc, self.pow(x, self.p ** (d * i)))
        return acc

    def trace_table(self, d: int = 1) -> np.ndarray:
        """Traces to GF(p^d) of every element, indexed by element code."""
        d = self._check_subdegree(d)
        p, m, n = self.p, self.m, self.r - 1
        exp = np.asarray(self.exp, dtype=np.int64)
        logs = np.asarray(self.log[1:], dtype=np.int64)  # codes 1 .. r-1
        digits = np.zeros((m, self.r), dtype=np.int64)
        for i in range(m // d):
            terms = exp[(logs * pow(p, d * i, n)) % n]
            for k in range(m):
                digits[k, 1:] += (terms // p**k) % p
        digits %= p
        return (digits * (p ** np.arange(m, dtype=np.int64))[:, None]).sum(axis=0)

    def in_subfield(self, x: int, d: int) -> bool:
        x, d = self._check(x), self._check_subdegree(d)
        return self.pow(x, self.p**d) == x

    # -- multiplicative structure ---------------------------------------------

    def multiplicative_order(self, x: int) -> int:
        x = self._check(x)
        if x == 0:
            raise InputError("0 has no multiplicative order")
        n = self.r - 1
        return n // math.gcd(self.log[x], n)


@cache
def build_field(p: int, m: int, modulus: tuple[int, ...] | None = None) -> Field:
    """GF(p^m); ``modulus`` (constant term first) defaults to the lex-least irreducible."""
    if not isinstance(p, int) or not isprime(p):
        raise InputError(f"characteristic must be prime, got {p!r} (build GF(p^e) as (p, e))")
    if not isinstance(m, int) or m < 1:
        raise InputError(f"degree must be a positive integer, got {m!r}")
    if modulus is None:
        modulus = lex_least_irreducible(p, m)
    else:
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != m + 1 or modulus[-1] != 1:
            raise InputError(f"modulus must be monic of degree {m}, got {list(modulus)}")
        if not gf_irreducible_p([ZZ(c) for c in reversed(modulus)], p, ZZ):
            raise InputError(f"modulus {list(modulus)} is reducible over GF({p})")
    r = p**m
    n = r - 1
    cofactors = [n // f for f in factorint(n)] if n > 1 else []

    def power(x: list[int], e: int) -> list[int]:
        result, base = [1] + [0] * (m - 1), x
        while e:
            if e & 1:
                result = _mulmod(result, base, modulus, p)
            base = _mulmod(base, base, modulus, p)
            e >>= 1
        return result

    one = [1] + [0] * (m - 1)
    for g in range(1, r):
        gd = _digits(g, p, m)
        if all(power(gd, c) != one for c in cofactors):
            break
    else:  # pragma: no cover
        raise AssertionError("no primitive element")
    exp, cur = [], one
    gd = _digits(g, p, m)
    for _ in range(n):
        exp.append(_undigits(cur, p))
        cur = _mulmod(cur, gd, modulus, p)
    return Field(p, m, modulus, g, exp)


# -- cyclotomy ------------------------------------------------------------------


@dataclass(frozen=True)
class CyclotomyTable:
    field: Field
    N: int
    classes: tuple[frozenset[int], ...]

    def class_of(self, x: int) -> int:
        return self.field.log[x] % self.N


def cyclotomic_classes(F: Field, N: int) -> CyclotomyTable:
    """C_i = g^i <g^N> for i in [0, N)."""
    n = F.r - 1
    if N < 1 or n % N:
        raise InputError(f"class count {N} must divide {n}")
    classes = tuple(frozenset(F.exp[i::N]) for i in range(N))
    return CyclotomyTable(F, N, classes)


def additive_character_counts(F: Field, N: int) -> np.ndarray:
    """counts[i, a] = #{x in C_i : Tr_{r/p}(x) = a}."""
    table = cyclotomic_classes(F, N)
    tr = F.trace_table(1)
    counts = np.zeros((N, F.p), dtype=np.int64)
    exp = np.asarray(F.exp, dtype=np.int64)
    idx = np.arange(F.r - 1) % N
    np.add.at(counts, (idx, tr[exp]), 1)
    assert counts.sum() == F.r - 1 and table.N == N
    return counts


def gaussian_periods_by_count(F: Field, N: int) -> list[Fraction | None]:
    """Gaussian periods of order N from trace-value frequencies.

    With zeta a primitive p-th root of unity, sum_a f(a) zeta^a is rational
    exactly when f(1) = ... = f(p-1), and then equals f(0) - f(1). Irrational
    periods come back as None.
    """
    out = []
    for row in additive_character_counts(F, N):
        if F.p == 2 or np.all(row[1:] == row[1]):
            out.append(Fraction(int(row[0] - row[1])))
        else:
            out.append(None)
    return out


@dataclass(frozen=True)
class SemiprimitiveCase:
    """r = p^(2 j gamma), N | p^j + 1 with j minimal."""

    p: int
    j: int
    gamma: int
    N: int

    def __post_init__(self):
        if not isprime(self.p):
            raise PreconditionError(f"{self.p} is not prime")
        if self.N < 2 or self.j < 1 or self.gamma < 1:
            raise PreconditionError("need N >= 2, j >= 1, gamma >= 1")
        if minimal_semiprimitive_j(self.p, self.N) != self.j:
            raise PreconditionError(f"j={self.j} is not the least j with {self.N} | {self.p}^j + 1")

    @property
    def r(self) -> int:
        return self.p ** (2 * self.j * self.gamma)

    @property
    def sqrt_r(self) -> int:
        return self.p ** (self.j * self.gamma)

    @property
    def case_tag(self) -> str:
        odd = self.gamma % 2 and self.p % 2 and ((self.p**self.j + 1) // self.N) % 2
        return "A" if odd else "B"


def minimal_semiprimitive_j(p: int, N: int) -> int | None:
    """Least j >= 1 with N | p^j + 1, or None."""
    if N < 2 or p % N == 0:
        return None
    x = p % N
    for j in range(1, N + 1):
        if (x + 1) % N == 0:
            return j
        x = (x * p) % N
    return None


def semiprimitive_case(p: int, e: int, N: int) -> SemiprimitiveCase:
    """Classify GF(p^e) with N classes, raising PreconditionError when not uniform."""
    j = minimal_semiprimitive_j(p, N)
    if j is None:
        raise PreconditionError(f"{N} divides no p^j + 1 for p = {p}")
    if e % (2 * j):
        raise PreconditionError(f"p^{e} is not of the form p^(2*{j}*gamma)")
    return SemiprimitiveCase(p, j, e // (2 * j), N)


def gaussian_periods_uniform(case: SemiprimitiveCase) -> list[Fraction]:
    N, s = case.N, case.sqrt_r
    if case.case_tag == "A":
        special = Fraction((N - 1) * s - 1, N)
        rest = Fraction(-(1 + s), N)
        return [special if i == N // 2 else rest for i in range(N)]
    sign = -1 if case.gamma % 2 else 1
    rest = Fraction(sign * s - 1, N)
    return [-sign * s + rest] + [rest] * (N - 1)
