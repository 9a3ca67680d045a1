"""Finite abelian groups Z_{m_1} x ... x Z_{m_r} with a mixed-radix element code.

An element is a coordinate tuple ``(x_1, ..., x_r)`` with ``0 <= x_i < m_i``.
Every element also has an integer code in ``[0, v)``; the first coordinate is
the most significant digit, so code order equals lexicographic coordinate
order and, for a cyclic group, the code of ``(x,)`` is ``x`` itself.

Scalar operations accept either a code or a coordinate tuple and answer in
the same form they were given. The ``*_codes`` variants work on numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, reduce
from itertools import product
from typing import Iterator, Sequence

import numpy as np
from sympy import isprime

from .errors import InputError, PreconditionError

KINDS = ("cyclic", "product", "field_additive")


@dataclass(frozen=True)
class Group:
    kind: str
    moduli: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown group kind {self.kind!r}")
        moduli = tuple(int(m) for m in self.moduli)
        if not moduli:
            raise InputError("a group needs at least one modulus")
        if any(m < 2 for m in moduli):
            raise InputError(f"every modulus must be >= 2, got {list(moduli)}")
        if self.kind == "cyclic" and len(moduli) != 1:
            raise InputError("a cyclic group has exactly one modulus")
        if self.kind == "field_additive" and len(set(moduli)) != 1:
            raise InputError("field-additive moduli must all equal p")
        object.__setattr__(self, "moduli", moduli)

    # -- basic structure ---------------------------------------------------

    @property
    def order(self) -> int:
        return math.prod(self.moduli)

    v = order

    @property
    def rank(self) -> int:
        return len(self.moduli)

    @cached_property
    def _weights(self) -> tuple[int, ...]:
        w, out = 1, []
        for m in reversed(self.moduli):
            out.append(w)
            w *= m
        return tuple(reversed(out))

    @property
    def identity(self) -> int:
        return 0

    def __repr__(self):
        return f"Group({self.kind}, {list(self.moduli)})"

    # -- encoding ----------------------------------------------------------

    def encode(self, coords: Sequence[int]) -> int:
        coords = tuple(coords)
        if len(coords) != self.rank:
            raise InputError(f"expected {self.rank} coordinates, got {len(coords)}")
        for c, m in zip(coords, self.moduli):
            if not 0 <= c < m:
                raise InputError(f"coordinate {c} out of range [0, {m})")
        return sum(c * w for c, w in zip(coords, self._weights))

    def decode(self, code: int) -> tuple[int, ...]:
        code = self.check_code(code)
        return tuple((code // w) % m for w, m in zip(self._weights, self.moduli))

    def check_code(self, code) -> int:
        if isinstance(code, (bool, np.bool_)) or not isinstance(code, (int, np.integer)):
            raise InputError(f"element code must be an integer, got {code!r}")
        code = int(code)
        if not 0 <= code < self.order:
            raise InputError(f"element code {code} out of range [0, {self.order})")
        return code

    def codes(self) -> range:
        return range(self.order)

    def elements(self) -> Iterator[tuple[int, ...]]:
        """All elements as coordinate tuples, in lexicographic order."""
        return product(*(range(m) for m in self.moduli))

    # -- scalar arithmetic -------------------------------------------------

    def _split(self, a):
        if isinstance(a, (int, np.integer)) and not isinstance(a, bool):
            return self.decode(a), True
        coords = tuple(a)
        self.encode(coords)  # range check
        return coords, False

    def add(self, a, b):
        ca, as_code = self._split(a)
        cb, _ = self._split(b)
        out = tuple((x + y) % m for x, y, m in zip(ca, cb, self.moduli))
        return self.encode(out) if as_code else out

    def neg(self, a):
        ca, as_code = self._split(a)
        out = tuple((-x) % m for x, m in zip(ca, self.moduli))
        return self.encode(out) if as_code else out

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def order_of(self, a) -> int:
        ca, _ = self._split(a)
        return reduce(math.lcm, (m // math.gcd(x, m) for x, m in zip(ca, self.moduli)), 1)

    # -- vectorized arithmetic on codes ------------------------------------

    def digits(self, codes) -> list[np.ndarray]:
        codes = np.asarray(codes, dtype=np.int64)
        return [(codes // w) % m for w, m in zip(self._weights, self.moduli)]

    def undigits(self, digits) -> np.ndarray:
        out = np.zeros_like(np.asarray(digits[0], dtype=np.int64))
        for d, w in zip(digits, self._weights):
            out = out + np.asarray(d, dtype=np.int64) * w
        return out

    def add_codes(self, a, b) -> np.ndarray:
        if self.rank == 1:
            return (np.asarray(a, dtype=np.int64) + np.asarray(b, dtype=np.int64)) % self.order
        return self.undigits([(x + y) % m for x, y, m in zip(self.digits(a), self.digits(b), self.moduli)])

    def neg_codes(self, a) -> np.ndarray:
        if self.rank == 1:
            return (-np.asarray(a, dtype=np.int64)) % self.order
        return self.undigits([(-x) % m for x, m in zip(self.digits(a), self.moduli)])

    def sub_codes(self, a, b) -> np.ndarray:
        if self.rank == 1:
            return (np.asarray(a, dtype=np.int64) - np.asarray(b, dtype=np.int64)) % self.order
        return self.undigits([(x - y) % m for x, y, m in zip(self.digits(a), self.digits(b), self.moduli)])

    def translate(self, codes: Sequence[int], x: int) -> frozenset[int]:
        """The translate ``codes + x`` as a set of codes."""
        if not len(codes):
            return frozenset()
        return frozenset(self.add_codes(np.fromiter(codes, dtype=np.int64), x).tolist())

    # -- serialization -----------------------------------------------------

    def descriptor(self) -> dict:
        if self.kind == "cyclic":
            return {"kind": "cyclic", "order": self.order}
        if self.kind == "field_additive":
            return {"kind": "field_additive", "p": self.moduli[0], "m": self.rank}
        return {"kind": "product", "moduli": list(self.moduli)}

    @classmethod
    def from_descriptor(cls, desc: dict) -> "Group":
        try:
            kind = desc["kind"]
            if kind == "cyclic":
                return cyclic(desc["order"])
            if kind == "product":
                return make_group("product", desc["moduli"])
            if kind == "field_additive":
                return field_additive(desc["p"], desc["m"])
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed group descriptor {desc!r}") from exc
        raise InputError(f"unknown group kind {kind!r}")


def make_group(kind: str, moduli: Sequence[int]) -> Group:
    if isinstance(moduli, (int, np.integer)):
        moduli = [moduli]
    moduli = list(moduli)
    if any(not isinstance(m, (int, np.integer)) or isinstance(m, bool) for m in moduli):
        raise InputError(f"moduli must be integers, got {moduli!r}")
    if kind == "field_additive" and moduli:
        p = moduli[0]
        if not isprime(int(p)):
            raise InputError(f"field-additive group needs a prime modulus, got {p}")
    return Group(kind, tuple(moduli))


def cyclic(n: int) -> Group:
    return make_group("cyclic", [n])


def direct_product(*moduli: int) -> Group:
    return make_group("product", list(moduli))


def field_additive(p: int, m: int) -> Group:
    """(GF(p^m), +): coordinates are coefficients from x^{m-1} down to x^0.

    With that ordering the group code of an element equals its base-p
    integer encoding in :mod:`diffam.field`.
    """
    if m < 1:
        raise InputError(f"degree must be >= 1, got {m}")
    return make_group("field_additive", [p] * m)


# -- subgroups ----------------------------------------------------------------


@dataclass(frozen=True)
class Subgroup:
    """H = {x : x_i = 0 mod step_i for all i} inside ``parent``.

    Index ``prod(steps)``; H is isomorphic to prod Z_{m_i/step_i}, and the
    H-code of a member x is the mixed-radix code of (x_i / step_i).
    """

    parent: Group
    steps: tuple[int, ...]
    members: tuple[int, ...] = field(repr=False)
    reps: tuple[int, ...]

    @property
    def index(self) -> int:
        return math.prod(self.steps)

    @property
    def order(self) -> int:
        return self.parent.order // self.index

    @cached_property
    def _quotients(self) -> tuple[int, ...]:
        return tuple(m // s for m, s in zip(self.parent.moduli, self.steps))

    @cached_property
    def group(self) -> Group | None:
        """H as a standalone group, or None when H is trivial."""
        kept = [q for q in self._quotients if q > 1]
        if not kept:
            return None
        return Group("cyclic" if len(kept) == 1 else "product", tuple(kept))

    def to_sub(self, codes) -> np.ndarray:
        """Parent codes of members of H -> H codes."""
        digits = self.parent.digits(codes)
        kept = [d // s for d, s, q in zip(digits, self.steps, self._quotients) if q > 1]
        if not kept:
            return np.zeros_like(np.asarray(codes, dtype=np.int64))
        return self.group.undigits(kept)

    def from_sub(self, codes) -> np.ndarray:
        sub = self.group
        digits = iter(sub.digits(codes)) if sub else iter(())
        parent_digits = []
        for s, q in zip(self.steps, self._quotients):
            parent_digits.append(next(digits) * s if q > 1 else np.zeros_like(np.asarray(codes, dtype=np.int64)))
        return self.parent.undigits(parent_digits)


def subgroup(group: Group, index_spec) -> Subgroup:
    """Subgroup selected by index ell or by per-coordinate steps.

    A bare index is accepted for cyclic groups and for products whose moduli
    are pairwise coprime.
    """
    if isinstance(index_spec, (int, np.integer)):
        ell = int(index_spec)
        if ell < 1 or group.order % ell:
            raise InputError(f"index {ell} does not divide the group order {group.order}")
        if group.rank == 1:
            steps = (ell,)
        elif all(math.gcd(a, b) == 1 for i, a in enumerate(group.moduli) for b in group.moduli[i + 1:]):
            # the group is cyclic, so its index-ell subgroup is unique
            steps = tuple(math.gcd(ell, m) for m in group.moduli)
        else:
            raise InputError("a bare index is ambiguous for this product group; pass per-coordinate steps")
    else:
        steps = tuple(int(s) for s in index_spec)
    if len(steps) != group.rank:
        raise InputError(f"expected {group.rank} steps, got {len(steps)}")
    for s, m in zip(steps, group.moduli):
        if s < 1 or m % s:
            raise InputError(f"index {s} does not divide modulus {m}")
    members = tuple(
        group.encode(c) for c in product(*(range(0, m, s) for m, s in zip(group.moduli, steps)))
    )
    reps = tuple(group.encode(c) for c in product(*(range(s) for s in steps)))
    return Subgroup(group, steps, members, reps)


def coset_reps(group: Group, index_spec) -> tuple[frozenset[int], list[int]]:
    sub = subgroup(group, index_spec)
    return frozenset(sub.members), list(sub.reps)


# -- halvings -----------------------------------------------------------------


@dataclass(frozen=True)
class Halving:
    h1: frozenset[int]
    h2: frozenset[int]

    @classmethod
    def from_h1(cls, group: Group, h1) -> "Halving":
        h1 = frozenset(group.check_code(x) for x in h1)
        h2 = frozenset(group.neg(x) for x in h1)
        if 0 in h1 or h1 & h2 or len(h1) + len(h2) != group.order - 1:
            raise InputError("h1 does not induce a halving: need h1, -h1, {0} to partition G")
        return cls(h1, h2)


def canonical_halving(group: Group) -> Halving:
    if group.order % 2 == 0:
        raise PreconditionError(f"group of even order {group.order} has involutions; no halving exists")
    h1, seen = [], {0}
    for x in group.codes():
        if x not in seen:
            h1.append(x)
            seen.add(x)
            seen.add(group.neg(x))
    return Halving.from_h1(group, h1)


def crt_map(group: Group) -> tuple[Group, np.ndarray]:
    """Isomorphism onto a cyclic group when the moduli are pairwise coprime.

    Returns ``(Z_v, images)`` where ``images[code]`` is the residue z in Z_v
    with z = x_i mod m_i for every coordinate.
    """
    moduli = group.moduli
    for i, a in enumerate(moduli):
        for b in moduli[i + 1:]:
            if math.gcd(a, b) != 1:
                raise PreconditionError(f"moduli {list(moduli)} are not pairwise coprime")
    v = group.order
    z = np.arange(v, dtype=np.int64)
    # images is the inverse of z -> (z mod m_i)
    forward = group.undigits([z % m for m in moduli])
    images = np.empty(v, dtype=np.int64)
    images[forward] = z
    return cyclic(v), images
