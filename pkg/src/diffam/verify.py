"""Brute-force certification of difference sets, families and block designs.

Everything here counts; nothing trusts a claimed parameter. Two exact
counting engines share the work:

* explicit differences: every ordered pair inside every block, binned into a
  length-v integer accumulator;
* pair incidence: P = M^T M for the block/point incidence matrix M, from which
  the multiplicity of g is sum_x P[x, x+g]. M is 0/1 and processed in row
  chunks below 2^24, so the float32 GEMM never rounds.

The engine is picked per call by estimated cost; both give identical counts.
"""

from __future__ import annotations

import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError
from .group import Group

_DIRECT_CHUNK = 1 << 22  # differences per bincount call
_GRAM_CHUNK = 4096  # incidence rows per GEMM; must stay below 2**24
_GRAM_MAX_V = 4096
_GEMM_SPEEDUP = 60  # rough throughput ratio of GEMM flops to bincount entries


def worker_count() -> int:
    env = os.environ.get("DIFFAM_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise InputError(f"DIFFAM_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


@dataclass
class VerificationReport:
    kind: str
    passed: bool
    histogram: dict[int, int]
    offenders: list = field(default_factory=list)
    params: dict = field(default_factory=dict)
    failure: str | None = None
    degenerate: bool = False

    def __bool__(self):
        return self.passed

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "pass": self.passed}
        out.update(self.params)
        out["histogram"] = {str(k): v for k, v in sorted(self.histogram.items())}
        out["offenders"] = list(self.offenders)
        if self.failure:
            out["failure"] = self.failure
        if self.degenerate:
            out["degenerate"] = True
        return out


# -- counting engines ------------------------------------------------------------


def normalize_blocks(group: Group, blocks: Iterable[Iterable[int]]) -> list[np.ndarray]:
    """Validate blocks as subsets of the group; returns sorted int64 arrays."""
    v = group.order
    blocks = list(blocks)
    if blocks and all(isinstance(b, np.ndarray) and b.ndim == 1 and b.dtype.kind in "iu" for b in blocks) \
            and len({b.size for b in blocks}) == 1 and blocks[0].size:
        # equal-size integer arrays: validate in one pass, fall through only to report errors
        mat = np.sort(np.stack(blocks).astype(np.int64, copy=False), axis=1)
        if not ((mat[:, 0] < 0) | (mat[:, -1] >= v) | (np.diff(mat, axis=1) == 0).any(axis=1)).any():
            return list(mat)
    out = []
    for i, block in enumerate(blocks):
        arr = np.fromiter((int(x) for x in block), dtype=np.int64)
        if arr.size and (arr.min() < 0 or arr.max() >= v):
            bad = arr[(arr < 0) | (arr >= v)][0]
            raise InputError(f"block {i} contains code {bad} outside [0, {v})")
        uniq = np.unique(arr)
        if uniq.size != arr.size:
            raise InputError(f"block {i} repeats an element")
        out.append(uniq)
    return out


def _by_size(blocks: Sequence[np.ndarray]) -> dict[int, np.ndarray]:
    sizes: dict[int, list[np.ndarray]] = {}
    for b in blocks:
        sizes.setdefault(b.size, []).append(b)
    return {k: np.stack(bs) for k, bs in sizes.items()}


def _direct_counts(group: Group, mats: dict[int, np.ndarray]) -> np.ndarray:
    v = group.order
    jobs = []
    for k, mat in mats.items():
        if k < 2:
            continue
        rows = max(1, _DIRECT_CHUNK // (k * k))
        jobs.extend(mat[i:i + rows] for i in range(0, mat.shape[0], rows))

    def run(chunk):
        diffs = group.sub_codes(chunk[:, :, None], chunk[:, None, :])
        return np.bincount(diffs.ravel(), minlength=v)

    return _merge(run, jobs, v)


def _gram_counts(group: Group, blocks: Sequence[np.ndarray]) -> np.ndarray:
    v = group.order
    jobs = [blocks[i:i + _GRAM_CHUNK] for i in range(0, len(blocks), _GRAM_CHUNK)]

    def run(chunk):
        M = np.zeros((len(chunk), v), dtype=np.float32)
        rows = np.repeat(np.arange(len(chunk)), [b.size for b in chunk])
        M[rows, np.concatenate(chunk)] = 1.0
        return (M.T @ M).astype(np.float64)

    P = _merge(run, jobs, (v, v))
    xs = np.arange(v, dtype=np.int64)
    diff = group.sub_codes(xs[None, :], xs[:, None])  # diff[x, y] = y - x
    counts = np.bincount(diff.ravel(), weights=P.ravel(), minlength=v)
    out = np.rint(counts).astype(np.int64)
    assert np.array_equal(out, counts), "pair-incidence counts lost exactness"
    return out


def _merge(run, jobs, shape):
    acc = np.zeros(shape, dtype=np.int64 if isinstance(shape, int) else np.float64)
    workers = min(worker_count(), len(jobs))
    if workers <= 1:
        for job in jobs:
            acc += run(job)
    else:
        with ThreadPoolExecutor(workers) as pool:
            for part in pool.map(run, jobs):  # ordered merge
                acc += part
    return acc


def difference_counts(group: Group, blocks) -> np.ndarray:
    """counts[g] = #{(x, y, B): x != y in B, x - y = g}; counts[0] is 0."""
    blocks = blocks if _is_normalized(blocks) else normalize_blocks(group, blocks)
    v = group.order
    direct = sum(b.size * b.size for b in blocks)
    gram = len(blocks) * v * v / _GEMM_SPEEDUP + v * v
    if v <= _GRAM_MAX_V and gram < direct:
        counts = _gram_counts(group, blocks)
    else:
        counts = _direct_counts(group, _by_size(blocks))
    counts[0] = 0
    return counts


def _is_normalized(blocks) -> bool:
    return isinstance(blocks, list) and all(isinstance(b, np.ndarray) for b in blocks)


def _histogram(counts: np.ndarray) -> dict[int, int]:
    values, freq = np.unique(counts[1:], return_counts=True)
    return {int(a): int(b) for a, b in zip(values, freq)}


def _offenders(counts: np.ndarray, hist: dict[int, int], limit: int = 10) -> list[int]:
    if len(hist) <= 1:
        return []
    modal = max(hist, key=lambda m: (hist[m], -m))
    bad = np.nonzero(counts[1:] != modal)[0] + 1
    return bad[:limit].tolist()


# -- verifiers --------------------------------------------------------------------


def verify_difference_family(group: Group, blocks, expected_gamma: int | None = None) -> VerificationReport:
    blocks = normalize_blocks(group, blocks)
    counts = difference_counts(group, blocks)
    hist = _histogram(counts)
    sizes = [int(b.size) for b in blocks]
    mass = sum(s * (s - 1) for s in sizes)
    assert sum(m * c for m, c in hist.items()) == mass
    uniform = len(hist) == 1
    gamma = next(iter(hist)) if uniform else None
    params = {"v": group.order, "u": len(blocks), "K": sorted(set(sizes)), "gamma": gamma}
    failure = None
    if not uniform:
        failure = "nonuniform_multiplicity"
    elif expected_gamma is not None and gamma != expected_gamma:
        failure = "claimed_mismatch"
        params["claimed_gamma"] = expected_gamma
    return VerificationReport(
        "df", failure is None, hist, _offenders(counts, hist), params, failure,
        degenerate=not blocks,
    )


def verify_difference_set(group: Group, D) -> VerificationReport:
    (block,) = normalize_blocks(group, [D])
    counts = difference_counts(group, [block])
    hist = _histogram(counts)
    uniform = len(hist) == 1
    params = {"v": group.order, "k": int(block.size), "lambda": next(iter(hist)) if uniform else None}
    return VerificationReport(
        "ds", uniform, hist, _offenders(counts, hist), params,
        None if uniform else "nonuniform_multiplicity",
    )


def verify_ads(group: Group, D) -> VerificationReport:
    (block,) = normalize_blocks(group, [D])
    counts = difference_counts(group, [block])
    hist = _histogram(counts)
    support = sorted(hist)
    params = {"v": group.order, "k": int(block.size), "lambda": None, "t": None, "T": []}
    if len(support) == 1:
        params["lambda"] = support[0]
        return VerificationReport("ads", False, hist, [], params, "degenerate: difference set", degenerate=True)
    if len(support) == 2 and support[1] == support[0] + 1:
        lam = support[0]
        T = (np.nonzero(counts[1:] == lam)[0] + 1).tolist()
        params.update({"lambda": lam, "t": len(T), "T": T})
        return VerificationReport("ads", True, hist, [], params)
    return VerificationReport("ads", False, hist, _offenders(counts, hist), params, "support_not_two_consecutive_values")


def verify_ddf(group: Group, blocks) -> VerificationReport:
    rep = verify_difference_family(group, blocks)
    rep.kind = "ddf"
    seen = Counter(x for b in normalize_blocks(group, blocks) for x in b.tolist())
    shared = sorted(x for x, c in seen.items() if c > 1)
    if shared:
        rep.passed = False
        rep.failure = "blocks_not_disjoint"
        rep.offenders = shared[:10]
    return rep


def _points(points) -> tuple[int, dict | None]:
    if isinstance(points, (int, np.integer)):
        return int(points), None
    pts = list(points)
    return len(pts), {p: i for i, p in enumerate(pts)}


def pair_incidence(v: int, blocks: Sequence[np.ndarray]) -> np.ndarray:
    """P[x, y] = number of blocks containing both x and y (P[x, x] = replication)."""
    P = np.zeros((v, v), dtype=np.int64)
    for i in range(0, len(blocks), _GRAM_CHUNK):
        chunk = blocks[i:i + _GRAM_CHUNK]
        M = np.zeros((len(chunk), v), dtype=np.float32)
        rows = np.repeat(np.arange(len(chunk)), [b.size for b in chunk])
        M[rows, np.concatenate(chunk)] = 1.0
        P += np.rint(M.T @ M).astype(np.int64)
    return P


def _index_blocks(v, index, blocks) -> list[np.ndarray]:
    out = []
    for i, b in enumerate(blocks):
        pts = [index[x] for x in b] if index is not None else [int(x) for x in b]
        arr = np.unique(np.asarray(pts, dtype=np.int64))
        if arr.size != len(pts):
            raise InputError(f"block {i} repeats a point")
        if arr.size and (arr.min() < 0 or arr.max() >= v):
            raise InputError(f"block {i} has a point outside the point set")
        out.append(arr)
    return out


def verify_bibd(points, blocks) -> VerificationReport:
    v, index = _points(points)
    try:
        blocks = _index_blocks(v, index, blocks)
    except KeyError as exc:
        raise InputError(f"block point {exc.args[0]!r} is not in the point set") from None
    P = pair_incidence(v, blocks)
    off = P[~np.eye(v, dtype=bool)]
    pair_hist = Counter(off.tolist())
    hist = {int(a): int(b) // 2 for a, b in pair_hist.items()}  # unordered pairs
    sizes = {int(b.size) for b in blocks}
    reps = set(np.diag(P).tolist())
    b = len(blocks)
    params = {"v": v, "b": b, "r": None, "k": None, "lambda": None}
    failure = None
    if len(sizes) != 1:
        failure = "nonuniform_block_size"
    elif len(hist) != 1:
        failure = "nonuniform_pair_count"
    else:
        k, lam = sizes.pop(), next(iter(hist))
        r = reps.pop() if len(reps) == 1 else None
        params.update({"k": k, "lambda": lam, "r": r})
        if r is None:
            failure = "nonuniform_replication"
        elif k < 2 or b * k * (k - 1) != v * (v - 1) * lam or r * (k - 1) != lam * (v - 1):
            failure = "parameter_identity"
    offenders = []
    if failure == "nonuniform_pair_count":
        modal = max(pair_hist, key=pair_hist.get)
        xs, ys = np.nonzero((P != modal) & ~np.eye(v, dtype=bool))
        offenders = [[int(x), int(y)] for x, y in zip(xs, ys) if x < y][:10]
    return VerificationReport("bibd", failure is None, hist, offenders, params, failure)


def verify_nrb(points, blocks, classes: Sequence[Sequence[int]]) -> VerificationReport:
    """``classes`` lists block indices; each class must be a near parallel class."""
    rep = verify_bibd(points, blocks)
    rep.kind = "nrb"
    v, index = _points(points)
    idx_blocks = _index_blocks(v, index, blocks)
    failure = rep.failure
    if failure is None and rep.params["lambda"] != rep.params["k"] - 1:
        failure = "lambda_not_k_minus_1"
    used = Counter(i for c in classes for i in c)
    if failure is None and (sorted(used) != list(range(len(idx_blocks))) or max(used.values(), default=0) > 1):
        failure = "classes_do_not_partition_blocks"
    missing = []
    if failure is None:
        for ci, c in enumerate(classes):
            cover = np.bincount(np.concatenate([idx_blocks[i] for i in c]) if c else np.zeros(0, np.int64), minlength=v)
            if cover.max(initial=0) > 1:
                failure = "class_covers_point_twice"
                rep.offenders = [ci]
                break
            absent = np.nonzero(cover == 0)[0]
            if absent.size != 1:
                failure = "class_not_near_parallel"
                rep.offenders = [ci]
                break
            missing.append(int(absent[0]))
    if failure is None and (len(classes) != v or len(set(missing)) != v):
        failure = "wrong_number_of_classes"
    rep.params["classes"] = len(classes)
    rep.failure = failure
    rep.passed = failure is None
    return rep


def check_counting_identity(v: int, K, gamma: int, u_or_sizes) -> bool:
    """u k (k-1) = gamma (v-1), or the mixed-size sum over block sizes."""
    K = set(K) if not isinstance(K, int) else {K}
    if isinstance(u_or_sizes, (int, np.integer)):
        if len(K) != 1:
            raise InputError("a bare block count needs a single block size")
        (k,) = K
        return int(u_or_sizes) * k * (k - 1) == gamma * (v - 1)
    sizes = list(u_or_sizes)
    return set(sizes) <= K and sum(s * (s - 1) for s in sizes) == gamma * (v - 1)
