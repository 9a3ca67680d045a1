"""The six difference-family constructions and the BIBD helpers they rest on.

Every public constructor returns a :class:`DesignFamily` that has already
passed brute-force verification. Families are block multisets: repeated
blocks are kept and counted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping, Sequence

import numpy as np

from .catalog import AlmostDifferenceSet, DifferenceSet, DisjointDifferenceFamily, qr_ads
from .errors import BudgetExceeded, ConstructionRejected, InputError, PreconditionError, VerificationFailed
from .group import Group, Halving, canonical_halving, subgroup
from .verify import VerificationReport, verify_difference_family

DEFAULT_BUDGET = 10**6


def binom(n: int, k: int) -> int:
    """C(n, k), zero whenever k < 0, n < 0 or k > n."""
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


@dataclass
class DesignFamily:
    group: Group
    blocks: list[np.ndarray]
    gamma: int
    method: str
    params: dict = field(default_factory=dict)
    report: VerificationReport | None = field(default=None, repr=False)

    @property
    def v(self) -> int:
        return self.group.order

    @property
    def u(self) -> int:
        return len(self.blocks)

    @property
    def K(self) -> list[int]:
        return sorted({int(b.size) for b in self.blocks})

    def sizes(self) -> list[int]:
        return [int(b.size) for b in self.blocks]

    def block_sets(self) -> list[frozenset[int]]:
        return [frozenset(b.tolist()) for b in self.blocks]

    def block_lists(self) -> list[list[int]]:
        return [b.tolist() for b in self.blocks]

    def signature(self) -> tuple:
        """(v, K, gamma, u) in the usual notation."""
        K = self.K
        return self.v, K[0] if len(K) == 1 else K, self.gamma, self.u


@dataclass(frozen=True)
class AugmentSpec:
    s: int
    direction: str  # "plus" or "minus"

    def check(self, ds: DifferenceSet) -> None:
        hi = ds.v - ds.k - 1 if self.direction == "plus" else ds.k - 1
        if self.direction not in ("plus", "minus"):
            raise InputError(f"direction must be plus or minus, got {self.direction!r}")
        if not 1 <= self.s <= hi:
            raise InputError(f"s = {self.s} outside [1, {hi}] for the {self.direction} construction")


@dataclass(frozen=True)
class AdsProfile:
    ads: AlmostDifferenceSet
    delta: Mapping[int, int]

    def __post_init__(self):
        G, D = self.ads.group, set(self.ads.elements)
        missing = sorted(set(self.ads.T) - set(self.delta))
        if missing:
            raise InputError(f"delta is missing entries for t in {missing[:10]}")
        for t, d in self.delta.items():
            if t not in self.ads.T:
                raise InputError(f"delta given for {t}, which is not in T")
            if d in D or G.add(G.check_code(d), t) not in D:
                raise InputError(f"delta_{t} = {d} is not in Delta_{t}: need delta not in D and delta + t in D")


def _certify(group: Group, blocks, method: str, gamma: int | None = None, **params) -> DesignFamily:
    blocks = [np.asarray(sorted(b), dtype=np.int64) if not isinstance(b, np.ndarray) else b for b in blocks]
    report = verify_difference_family(group, blocks, expected_gamma=gamma)
    if not report.passed:
        raise VerificationFailed(report)
    return DesignFamily(group, blocks, report.params["gamma"], method, params, report)


def _check_budget(count: int, budget: int | None, what: str) -> None:
    budget = DEFAULT_BUDGET if budget is None else budget
    if count > budget:
        raise BudgetExceeded(count, budget, what)


def _subsets(pool: Sequence[int], s: int) -> np.ndarray:
    """All s-subsets of pool in lexicographic order, as an (C(n, s), s) array."""
    count = binom(len(pool), s)
    if s == 0:
        return np.zeros((1, 0), dtype=np.int64)
    flat = np.fromiter(combinations(pool, s), dtype=np.dtype((np.int64, s)), count=count)
    return flat.reshape(count, s)


# -- shared pieces ------------------------------------------------------------------


def intersection_block(group: Group, D: Sequence[int], x: int) -> np.ndarray:
    """D_x = D cap (D + x), sorted."""
    D = np.asarray(D, dtype=np.int64)
    mask = np.zeros(group.order, dtype=bool)
    mask[D] = True
    shifted = group.add_codes(D, x)
    return np.sort(shifted[mask[shifted]])


def half_blocks(group: Group, D: Sequence[int], h1) -> list[np.ndarray]:
    """{D_x : x in h1} in code order, with no precondition check."""
    return [intersection_block(group, D, x) for x in sorted(h1)]


def distinct_blocks(blocks: Sequence[np.ndarray]) -> list[np.ndarray]:
    """Collapse repeated blocks, keeping first occurrences in order."""
    seen, out = set(), []
    for b in blocks:
        key = tuple(b.tolist())
        if key not in seen:
            seen.add(key)
            out.append(b)
    return out


# -- C1, C2 ----------------------------------------------------------------------------


def c1_intersection_family(ds: DifferenceSet) -> DesignFamily:
    if ds.lam < 1:
        raise PreconditionError("the intersection family needs lambda >= 1")
    G = ds.group
    blocks = [intersection_block(G, ds.elements, x) for x in range(1, G.order)]
    return _certify(G, blocks, "c1", ds.lam * (ds.lam - 1), source=ds.name)


def c2_cases(ds: DifferenceSet) -> dict:
    odd_coprime = ds.v % 2 == 1 and math.gcd(ds.v, ds.lam) == 1
    return {"odd_coprime": odd_coprime, "skew": ds.is_skew()}


def c2_check(ds: DifferenceSet) -> dict:
    """The applicable cases; raises PreconditionError naming both failures when none holds."""
    cases = c2_cases(ds)
    if not any(cases.values()):
        raise PreconditionError(
            f"neither case holds: case 1 needs v odd and gcd(v, lambda) = 1 "
            f"(v = {ds.v}, gcd = {math.gcd(ds.v, ds.lam)}); case 2 needs D skew, but D meets -D"
        )
    return cases


def c2_half_family(ds: DifferenceSet, halving: Halving | None = None) -> DesignFamily:
    cases = c2_check(ds)
    G = ds.group
    halving = halving or canonical_halving(G)
    if len(halving.h1) + len(halving.h2) != G.order - 1:
        raise InputError("halving does not belong to this group")
    blocks = half_blocks(G, ds.elements, halving.h1)
    return _certify(G, blocks, "c2", ds.lam * (ds.lam - 1) // 2, source=ds.name,
                    case="skew" if cases["skew"] else "odd_coprime")


def skew_halving(ds: DifferenceSet) -> Halving:
    """h1 = D for a skew difference set."""
    if not ds.is_skew():
        raise PreconditionError(f"{ds.name or 'D'} is not skew")
    return Halving.from_h1(ds.group, ds.elements)


# -- C3 -------------------------------------------------------------------------------


def lambda_plus(v: int, b: int, r: int, k: int, lam: int, s: int) -> int:
    return lam * binom(v - k, s) + 2 * (r - lam) * binom(v - k - 1, s - 1) + (b - 2 * r + lam) * binom(v - k - 2, s - 2)


def lambda_minus(k: int, lam: int, s: int) -> int:
    return lam * binom(k - 2, s)


def lambda_minus_alt(k: int, lam: int, s: int) -> int:
    """The variant exponent C(k-2, s-2); reported for comparison only."""
    return lam * binom(k - 2, s - 2)


def c3_augment(ds: DifferenceSet, s: int, budget: int | None = None) -> DesignFamily:
    AugmentSpec(s, "plus").check(ds)
    outside = sorted(set(range(ds.v)) - set(ds.elements))
    _check_budget(binom(len(outside), s), budget, "blocks")
    X = _subsets(outside, s)
    base = np.broadcast_to(np.asarray(ds.elements, dtype=np.int64), (len(X), ds.k))
    blocks = list(np.sort(np.concatenate([base, X], axis=1), axis=1))
    closed = lambda_plus(ds.v, ds.v, ds.k, ds.k, ds.lam, s)
    fam = _certify(ds.group, blocks, "c3plus", None, source=ds.name, s=s, closed_form=closed)
    fam.params["closed_form_agrees"] = fam.gamma == closed
    return fam


def c3_reduce(ds: DifferenceSet, s: int, budget: int | None = None) -> DesignFamily:
    AugmentSpec(s, "minus").check(ds)
    _check_budget(binom(ds.k, s), budget, "blocks")
    D = np.asarray(ds.elements, dtype=np.int64)
    keep = _subsets(list(range(ds.k)), ds.k - s)  # D \ X, enumerated by what stays
    blocks = list(D[keep])
    closed = lambda_minus(ds.k, ds.lam, s)
    fam = _certify(ds.group, blocks, "c3minus", None, source=ds.name, s=s, closed_form=closed,
                   closed_form_alt=lambda_minus_alt(ds.k, ds.lam, s))
    fam.params["closed_form_agrees"] = fam.gamma == closed
    return fam


# -- BIBD helpers ------------------------------------------------------------------------


def develop(group: Group, blocks: Sequence[Sequence[int]]) -> list[np.ndarray]:
    """All translates B + x, block-major, x in code order."""
    out = []
    for b in blocks:
        b = np.asarray(list(b), dtype=np.int64)
        out.extend(np.sort(group.add_codes(b, x)) for x in range(group.order))
    return out


def bibd_plus(v: int, blocks: Sequence[Sequence[int]], s: int) -> list[np.ndarray]:
    out = []
    for b in blocks:
        b = np.asarray(list(b), dtype=np.int64)
        rest = sorted(set(range(v)) - set(b.tolist()))
        out.extend(np.sort(np.concatenate([b, x])) for x in _subsets(rest, s))
    return out


def bibd_minus(v: int, blocks: Sequence[Sequence[int]], s: int) -> list[np.ndarray]:
    out = []
    for b in blocks:
        b = np.asarray(list(b), dtype=np.int64)
        out.extend(np.setdiff1d(b, x) for x in _subsets(b.tolist(), s))
    return out


def nrb_development(ddf: DisjointDifferenceFamily) -> tuple[list[np.ndarray], list[list[int]]]:
    """Translates of a DDF partitioning G*, grouped into near-parallel classes {D_i + x}_i."""
    G = ddf.group
    blocks, classes = [], []
    for x in range(G.order):
        classes.append(list(range(len(blocks), len(blocks) + len(ddf.blocks))))
        blocks.extend(np.sort(G.add_codes(np.asarray(b, dtype=np.int64), x)) for b in ddf.blocks)
    return blocks, classes


# -- C4 -------------------------------------------------------------------------------------


def c4_subgroup_partition(ds: DifferenceSet, index_spec, drop_trivial: bool = False) -> DesignFamily:
    G = ds.group
    H = subgroup(G, index_spec)
    if H.group is None:
        raise InputError("the subgroup is trivial; choose an index smaller than v")
    D = np.asarray(ds.elements, dtype=np.int64)
    blocks = []
    for g in H.reps:
        shifted = G.sub_codes(D, g)  # D - g_i; members of H come from the coset H + g_i
        inside = shifted[np.isin(shifted, H.members)]
        blocks.append(np.sort(H.to_sub(inside)))
    ks = [int(b.size) for b in blocks]
    gamma = ds.lam
    dropped = []
    if drop_trivial:
        for i, b in enumerate(blocks):
            if b.size <= 1 or b.size == H.order:
                dropped.append(i)
                if b.size == H.order:
                    gamma -= H.order
        blocks = [b for i, b in enumerate(blocks) if i not in dropped]
    return _certify(H.group, blocks, "c4", gamma, source=ds.name, ell=H.index, n=H.order,
                    steps=list(H.steps), ks=ks, dropped=dropped)


# -- C5 -------------------------------------------------------------------------------------


def c5_gamma(v: int, k: int, u: int, s: int) -> int:
    return binom(u - 1, s - 1) * (k - 1) + binom(u - 2, s - 2) * (v - k - 1)


def c5_nrb_union(ddf: DisjointDifferenceFamily, s: int, budget: int | None = None) -> DesignFamily:
    u = len(ddf.blocks)
    if ddf.lam != ddf.k - 1:
        raise PreconditionError(f"need lambda = k - 1, got lambda = {ddf.lam}, k = {ddf.k}")
    covered = sorted(x for b in ddf.blocks for x in b)
    if covered != list(range(1, ddf.v)):
        raise PreconditionError("the blocks do not partition the nonidentity elements")
    if not 1 <= s <= u - 1:
        raise InputError(f"s = {s} outside [1, {u - 1}]")
    _check_budget(binom(u, s), budget, "blocks")
    base = [np.asarray(b, dtype=np.int64) for b in ddf.blocks]
    blocks = [np.sort(np.concatenate([base[i] for i in idx])) for idx in combinations(range(u), s)]
    return _certify(ddf.group, blocks, "c5", c5_gamma(ddf.v, ddf.k, u, s), source=ddf.name, s=s)


# -- C6 -------------------------------------------------------------------------------------


def delta_candidates(ads: AlmostDifferenceSet, t: int) -> list[int]:
    """Delta_t = {d - t : d in D, d - t not in D}."""
    G, D = ads.group, set(ads.elements)
    return sorted({G.sub(d, t) for d in D} - D)


def _augmented_blocks(ads: AlmostDifferenceSet, delta: Mapping[int, int]) -> list[np.ndarray]:
    G = ads.group
    out = []
    for x in range(1, G.order):
        b = intersection_block(G, ads.elements, x)
        if x in delta:
            b = np.sort(np.append(b, delta[x]))
        out.append(b)
    return out


def adsdf_condition(ads: AlmostDifferenceSet, delta: Mapping[int, int]) -> dict[int, int]:
    """For each t in T: #{x in G* : delta_t and delta_t + t both in the augmented D_x}."""
    G = ads.group
    member = np.zeros((G.order - 1, G.order), dtype=bool)
    for i, b in enumerate(_augmented_blocks(ads, delta)):
        member[i, b] = True
    return {t: int(np.sum(member[:, delta[t]] & member[:, G.add(delta[t], t)])) for t in ads.T}


def c6_ads_family(profile: AdsProfile) -> DesignFamily:
    ads, delta = profile.ads, dict(profile.delta)
    counts = adsdf_condition(ads, delta)
    failing = [{"t": t, "count": c, "required": ads.lam} for t, c in counts.items() if c != ads.lam]
    if failing:
        raise ConstructionRejected(
            f"augmented family condition fails for {len(failing)} of {len(counts)} elements of T",
            {"failing": failing[:10], "delta": {str(t): d for t, d in sorted(delta.items())}},
        )
    blocks = _augmented_blocks(ads, delta)
    return _certify(ads.group, blocks, "c6", ads.lam * (ads.lam + 1), source=ads.name,
                    delta={str(t): d for t, d in sorted(delta.items())})


def search_delta(ads: AlmostDifferenceSet, budget: int | None = None) -> dict[int, int]:
    """Depth-first over Delta_t choices in order; first assignment meeting the condition wins."""
    T = list(ads.T)
    options = [delta_candidates(ads, t) for t in T]
    budget = DEFAULT_BUDGET if budget is None else budget
    visited = 0
    choice: dict[int, int] = {}

    def dfs(i: int) -> bool:
        nonlocal visited
        if i == len(T):
            visited += 1
            if visited > budget:
                raise BudgetExceeded(visited, budget, "delta assignments")
            return all(c == ads.lam for c in adsdf_condition(ads, choice).values())
        for d in options[i]:
            choice[T[i]] = d
            if dfs(i + 1):
                return True
        del choice[T[i]]
        return False

    if not dfs(0):
        raise ConstructionRejected("no delta assignment satisfies the condition", {"searched": visited})
    return dict(choice)


def c6_qr_family(q: int) -> DesignFamily:
    """Quadratic-residue ADS with delta = 0 on every square."""
    ads = qr_ads(q)
    return c6_ads_family(AdsProfile(ads, {t: 0 for t in ads.T}))
