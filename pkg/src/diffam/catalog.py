"""Difference sets, almost difference sets and DDFs that the constructions start from.

Every constructor certifies its output by brute force before returning, so a
``DifferenceSet`` in hand is always a genuine one.

Residue-class families over a prime power q = p^e live in the additive group
of GF(q); for prime q that group is just Z_q and element codes are residues.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np
from sympy import factorint, isprime

from .errors import InputError, PreconditionError, VerificationFailed
from .field import build_field
from .group import Group, crt_map, cyclic, direct_product, field_additive
from .verify import verify_ads, verify_ddf, verify_difference_set


@dataclass(frozen=True)
class DifferenceSet:
    group: Group
    elements: tuple[int, ...]
    v: int
    k: int
    lam: int
    name: str = ""
    source: dict = field(default_factory=dict, compare=False)

    def is_skew(self) -> bool:
        D = set(self.elements)
        neg = {int(x) for x in self.group.neg_codes(list(D))} if D else set()
        return not (D & neg) and len(D | neg) == self.v - 1

    def params(self) -> tuple[int, int, int]:
        return self.v, self.k, self.lam


@dataclass(frozen=True)
class AlmostDifferenceSet:
    group: Group
    elements: tuple[int, ...]
    v: int
    k: int
    lam: int
    t: int
    T: tuple[int, ...]
    name: str = ""


@dataclass(frozen=True)
class DisjointDifferenceFamily:
    group: Group
    blocks: tuple[tuple[int, ...], ...]
    v: int
    k: int
    lam: int
    name: str = ""


def certify_ds(group: Group, elements, name: str = "", **source) -> DifferenceSet:
    """Wrap a verified difference set; raises VerificationFailed otherwise."""
    elements = tuple(sorted(int(x) for x in elements))
    report = verify_difference_set(group, elements)
    if not report.passed:
        raise VerificationFailed(report)
    return DifferenceSet(group, elements, group.order, len(elements), report.params["lambda"], name, source)


def prime_power(q: int) -> tuple[int, int] | None:
    """(p, e) with q = p^e, or None."""
    if q < 2:
        return None
    f = factorint(q)
    if len(f) != 1:
        return None
    return next(iter(f.items()))


def _require_prime_power(q: int) -> tuple[int, int]:
    pe = prime_power(q)
    if pe is None:
        raise InputError(f"{q} is not a prime power")
    return pe


def _exact_sqrt(n: int) -> int | None:
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


def residue_group(q: int) -> Group:
    p, e = _require_prime_power(q)
    return cyclic(q) if e == 1 else field_additive(p, e)


def power_residues(q: int, N: int, index: int = 0) -> list[int]:
    """Codes of the cyclotomic class g^index <g^N> of GF(q)."""
    p, e = _require_prime_power(q)
    F = build_field(p, e)
    if (q - 1) % N:
        raise InputError(f"{N} does not divide {q - 1}")
    return F.exp[index % N::N]


# -- Singer ------------------------------------------------------------------


def singer_trace_zero_indices(q: int, m: int, modulus=None) -> tuple[Group, list[int]]:
    """Indices i in [0, (q^m-1)/(q-1)) with Tr(alpha^i) = 0, alpha = g^(q-1). No gcd gate.

    ``modulus`` overrides the defining polynomial of GF(q^m) over GF(p).
    """
    p, e = _require_prime_power(q)
    if m < 2:
        raise InputError(f"m must be at least 2, got {m}")
    F = build_field(p, e * m, None if modulus is None else tuple(modulus))
    n = (q**m - 1) // (q - 1)
    tr = F.trace_table(e)
    exp = np.asarray(F.exp, dtype=np.int64)
    powers = exp[(np.arange(n, dtype=np.int64) * (q - 1)) % (F.r - 1)]
    return cyclic(n), np.nonzero(tr[powers] == 0)[0].tolist()


def singer_ds(q: int, m: int, modulus=None) -> DifferenceSet:
    _require_prime_power(q)
    if m < 3:
        raise InputError(f"m must be at least 3, got {m}")
    if math.gcd(q - 1, m) != 1:
        raise PreconditionError(f"gcd(q-1, m) = gcd({q - 1}, {m}) != 1")
    G, D = singer_trace_zero_indices(q, m, modulus)
    source = {"family": "singer", "q": q, "m": m}
    if modulus is not None:
        source["modulus"] = list(modulus)
    return certify_ds(G, D, f"singer({q},{m})", **source)


# -- cyclotomic residue families --------------------------------------------------


def _residue_ds(q: int, N: int, with_zero: bool, name: str, **source) -> DifferenceSet:
    D = set(power_residues(q, N))
    if with_zero:
        D.add(0)
    return certify_ds(residue_group(q), D, name, q=q, **source)


def paley_qr_ds(q: int) -> DifferenceSet:
    _require_prime_power(q)
    if q % 4 != 3:
        raise PreconditionError(f"{q} is not 3 mod 4")
    return _residue_ds(q, 2, False, f"paley({q})", family="paley")


def qr_complement_zero_ds(q: int) -> DifferenceSet:
    _require_prime_power(q)
    if q % 4 != 3:
        raise PreconditionError(f"{q} is not 3 mod 4")
    D = set(power_residues(q, 2, 1)) | {0}
    return certify_ds(residue_group(q), D, f"paley_complement({q})", family="paley_complement", q=q)


def biquadratic_ds(q: int, with_zero: bool = False) -> DifferenceSet:
    _require_prime_power(q)
    offset = 9 if with_zero else 1
    t = _exact_sqrt((q - offset) // 4) if (q - offset) % 4 == 0 else None
    if t is None or t % 2 == 0:
        raise PreconditionError(f"{q} is not 4t^2+{offset} with t odd")
    name = "biquadratic0" if with_zero else "biquadratic"
    return _residue_ds(q, 4, with_zero, f"{name}({q})", family=name)


def octic_ds(q: int, with_zero: bool = False) -> DifferenceSet:
    _require_prime_power(q)
    a, b = (49, 441) if with_zero else (1, 9)
    t = _exact_sqrt((q - a) // 8) if (q - a) % 8 == 0 else None
    s = _exact_sqrt((q - b) // 64) if (q - b) % 64 == 0 else None
    s_ok = s is not None and (s % 2 == 0 if with_zero else s % 2 == 1)
    if t is None or t % 2 == 0 or not s_ok:
        parity = "even" if with_zero else "odd"
        raise PreconditionError(f"{q} is not 8t^2+{a} = 64s^2+{b} with t odd and s {parity}")
    name = "octic0" if with_zero else "octic"
    return _residue_ds(q, 8, with_zero, f"{name}({q})", family=name)


# -- twin primes ---------------------------------------------------------------------


def twin_prime_ds(q: int) -> DifferenceSet:
    """In Z_q x Z_{q+2}: (x, y) with x, y both squares or both nonsquares, plus y = 0."""
    if not (isprime(q) and isprime(q + 2)):
        raise PreconditionError(f"{q} and {q + 2} are not both prime")
    G = direct_product(q, q + 2)

    def chi(x, mod):
        return pow(x, (mod - 1) // 2, mod) if x else 0

    cx = [chi(x, q) for x in range(q)]
    cy = [chi(y, q + 2) for y in range(q + 2)]
    D = [
        G.encode((x, y))
        for x in range(q)
        for y in range(q + 2)
        if y == 0 or (x and (cx[x] == 1) == (cy[y] == 1))
    ]
    return certify_ds(G, D, f"twinprime({q})", family="twinprime", q=q)


def to_cyclic(ds: DifferenceSet) -> DifferenceSet:
    """CRT image of a difference set in a product of coprime cyclic groups."""
    Z, images = crt_map(ds.group)
    return certify_ds(Z, images[list(ds.elements)].tolist(), f"{ds.name}|cyclic", **ds.source)


def complement_ds(ds: DifferenceSet) -> DifferenceSet:
    rest = set(range(ds.v)) - set(ds.elements)
    return certify_ds(ds.group, rest, f"complement({ds.name})", **ds.source, complement=True)


# -- almost difference sets and DDFs --------------------------------------------------


def certify_ads(group: Group, elements, name: str = "") -> AlmostDifferenceSet:
    D = tuple(sorted(int(x) for x in elements))
    report = verify_ads(group, D)
    if not report.passed:
        raise VerificationFailed(report)
    p = report.params
    return AlmostDifferenceSet(group, D, group.order, len(D), p["lambda"], p["t"], tuple(p["T"]), name)


def certify_ddf(group: Group, blocks, name: str = "") -> DisjointDifferenceFamily:
    blocks = tuple(tuple(sorted(int(x) for x in b)) for b in blocks)
    report = verify_ddf(group, blocks)
    if not report.passed:
        raise VerificationFailed(report)
    sizes = {len(b) for b in blocks}
    if len(sizes) != 1:
        raise InputError(f"a disjoint difference family here needs one block size, got {sorted(sizes)}")
    return DisjointDifferenceFamily(group, blocks, group.order, sizes.pop(), report.params["gamma"], name)


def qr_ads(q: int) -> AlmostDifferenceSet:
    _require_prime_power(q)
    if q % 4 != 1:
        raise PreconditionError(f"{q} is not 1 mod 4")
    return certify_ads(residue_group(q), power_residues(q, 2), f"qr_ads({q})")


def cyclotomic_ddf(q: int, e: int) -> DisjointDifferenceFamily:
    p, _ = _require_prime_power(q)
    if p == 2:
        raise InputError(f"q must be odd, got {q}")
    if e < 2 or (q - 1) % e:
        raise InputError(f"e = {e} must be at least 2 and divide {q - 1}")
    if (q - 1) // e < 2:
        raise InputError(f"classes of size {(q - 1) // e} are too small")
    blocks = [power_residues(q, e, i) for i in range(e)]
    return certify_ddf(residue_group(q), blocks, f"cyclotomic_ddf({q},{e})")


# -- registry -------------------------------------------------------------------------


@dataclass(frozen=True)
class FamilyInfo:
    name: str
    params: str
    requires: str
    flags: tuple[str, ...]


FAMILIES: dict[str, FamilyInfo] = {
    f.name: f
    for f in [
        FamilyInfo("singer", "((q^m-1)/(q-1), (q^(m-1)-1)/(q-1), (q^(m-2)-1)/(q-1))",
                   "q prime power, m >= 3, gcd(q-1, m) = 1", ("q", "m")),
        FamilyInfo("paley", "(q, (q-1)/2, (q-3)/4)", "q prime power, q = 3 mod 4", ("q",)),
        FamilyInfo("paley_complement", "(q, (q+1)/2, (q+1)/4)", "q prime power, q = 3 mod 4", ("q",)),
        FamilyInfo("biquadratic", "(q, (q-1)/4, (q-5)/16)", "q = 4t^2+1, t odd", ("q",)),
        FamilyInfo("biquadratic0", "(q, (q+3)/4, (q+3)/16)", "q = 4t^2+9, t odd", ("q",)),
        FamilyInfo("octic", "(q, (q-1)/8, (q-9)/64)", "q = 8t^2+1 = 64s^2+9, t and s odd", ("q",)),
        FamilyInfo("octic0", "(q, (q+7)/8, (q+7)/64)", "q = 8t^2+49 = 64s^2+441, t odd, s even", ("q",)),
        FamilyInfo("twinprime", "(q(q+2), (q^2+2q-1)/2, (q^2+2q-3)/4)", "q and q+2 prime", ("q",)),
        FamilyInfo("qr_ads", "(q, (q-1)/2, (q-5)/4; t = (q-1)/2) almost difference set",
                   "q prime power, q = 1 mod 4", ("q",)),
        FamilyInfo("cyclotomic_ddf", "(q, (q-1)/e, (q-1-e)/e; e) disjoint difference family",
                   "q odd prime power, e | q-1, (q-1)/e >= 2", ("q", "e")),
    ]
}

_DS_BUILDERS: dict[str, Callable[..., DifferenceSet]] = {
    "singer": lambda q, m: singer_ds(q, m),
    "paley": lambda q: paley_qr_ds(q),
    "paley_complement": lambda q: qr_complement_zero_ds(q),
    "biquadratic": lambda q: biquadratic_ds(q, False),
    "biquadratic0": lambda q: biquadratic_ds(q, True),
    "octic": lambda q: octic_ds(q, False),
    "octic0": lambda q: octic_ds(q, True),
    "twinprime": lambda q: twin_prime_ds(q),
}


def build_ds(name: str, **kw) -> DifferenceSet:
    if name not in _DS_BUILDERS:
        raise InputError(f"unknown difference-set family {name!r}; choose from {sorted(_DS_BUILDERS)}")
    info = FAMILIES[name]
    missing = [f for f in info.flags if kw.get(f) is None]
    if missing:
        raise InputError(f"family {name} needs --{' --'.join(missing)}")
    return _DS_BUILDERS[name](**{f: kw[f] for f in info.flags})


def _prime_powers(limit: int) -> Iterator[int]:
    return (q for q in range(2, limit + 1) if prime_power(q))


def all_difference_sets(max_v: int, complements: bool = False) -> list[DifferenceSet]:
    """Every catalog difference set with v <= max_v, in a fixed order."""
    out: list[DifferenceSet] = []
    for q in _prime_powers(max_v):
        for m in range(3, max_v.bit_length() + 1):
            if (q**m - 1) // (q - 1) > max_v:
                break
            if math.gcd(q - 1, m) == 1:
                out.append(singer_ds(q, m))
    for q in _prime_powers(max_v):
        for build in (paley_qr_ds, qr_complement_zero_ds,
                      lambda x: biquadratic_ds(x, False), lambda x: biquadratic_ds(x, True),
                      lambda x: octic_ds(x, False), lambda x: octic_ds(x, True)):
            try:
                out.append(build(q))
            except PreconditionError:
                pass
    q = 3
    while q * (q + 2) <= max_v:
        if isprime(q) and isprime(q + 2):
            out.append(twin_prime_ds(q))
        q += 2
    if complements:
        out += [complement_ds(d) for d in list(out) if d.v - d.k >= 2]
    return out
