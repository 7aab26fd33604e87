"""Relations, correspondences, distortion, and Gromov-Hausdorff distance.

The Gromov-Hausdorff distance between finite spaces X, Y is half the minimum
distortion over all correspondences R (subsets of X x Y projecting onto both
factors), where

    dis R = max{ | |xx'| - |yy'| | : (x,y), (x',y') in R }.

The exact solver enumerates correspondences as bitmasks over the m*n pairs
(bit i*n + j encodes pair (i, j)) with depth-first branch and bound, and is
capped at m*n <= 25 bits.  A seeded local-search heuristic handles larger
instances and returns an upper bound with a witness.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

import numpy as np

from .errors import (
    InvalidRelation,
    NotSurjective,
    SearchSpaceTooLarge,
    SizeMismatch,
)
from .metric_core import FiniteMetricSpace

# Hard cap on exhaustive search: at most 2^25 candidate bitmasks.
MAX_EXACT_BITS = 25


@dataclass(frozen=True)
class Relation:
    """A nonempty set of index pairs between [0, m) and [0, n)."""

    m: int
    n: int
    pairs: frozenset[tuple[int, int]]

    def __post_init__(self):
        object.__setattr__(
            self, "pairs", frozenset((int(i), int(j)) for i, j in self.pairs)
        )
        if self.m <= 0 or self.n <= 0:
            raise InvalidRelation(f"index ranges must be positive, got {self.m}, {self.n}")
        if not self.pairs:
            raise InvalidRelation("relation has no pairs")
        for i, j in self.pairs:
            if not (0 <= i < self.m and 0 <= j < self.n):
                raise InvalidRelation(f"pair ({i}, {j}) outside [0,{self.m}) x [0,{self.n})")

    def sorted_pairs(self) -> list[tuple[int, int]]:
        return sorted(self.pairs)

    def bitmask(self) -> int:
        mask = 0
        for i, j in self.pairs:
            mask |= 1 << (i * self.n + j)
        return mask

    def is_surjective(self) -> bool:
        return (
            {i for i, _ in self.pairs} == set(range(self.m))
            and {j for _, j in self.pairs} == set(range(self.n))
        )

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class Correspondence(Relation):
    """A relation whose projections cover all of [0, m) and [0, n)."""

    def __post_init__(self):
        super().__post_init__()
        if not self.is_surjective():
            raise NotSurjective("projections of the pair set are not surjective")

    @classmethod
    def from_bitmask(cls, m: int, n: int, mask: int) -> "Correspondence":
        pairs = frozenset(
            (k // n, k % n) for k in range(m * n) if mask >> k & 1
        )
        return cls(m, n, pairs)

    def transpose(self) -> "Correspondence":
        return Correspondence(self.n, self.m, frozenset((j, i) for i, j in self.pairs))

    @property
    def is_bijection(self) -> bool:
        return len(self.pairs) == self.m == self.n

    def to_json_dict(self) -> dict:
        return {"m": self.m, "n": self.n, "pairs": [list(p) for p in self.sorted_pairs()]}


def correspondence_from_json_dict(data: dict) -> Correspondence:
    for key in ("m", "n", "pairs"):
        if key not in data:
            raise ValueError(f"correspondence JSON is missing the {key!r} field")
    return Correspondence(
        int(data["m"]), int(data["n"]),
        frozenset((int(i), int(j)) for i, j in data["pairs"]),
    )


def load_correspondence(path: str | Path) -> Correspondence:
    return correspondence_from_json_dict(json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class GHResult:
    """GH distance value with its witness correspondence.

    ``value`` is always half the distortion of ``witness``; only the exact
    solver certifies optimality.
    """

    value: float
    witness: Correspondence
    method: str  # "exact" | "heuristic"
    is_certified_optimal: bool

    def to_json_dict(self) -> dict:
        return {
            "value": self.value,
            "method": self.method,
            "certified": self.is_certified_optimal,
            "witness": self.witness.to_json_dict(),
        }


# ---------------------------------------------------------------------------
# distortion
# ---------------------------------------------------------------------------

def _check_sizes(rel: Relation, x: FiniteMetricSpace, y: FiniteMetricSpace) -> None:
    if rel.m != len(x) or rel.n != len(y):
        raise SizeMismatch(
            f"relation is {rel.m} x {rel.n} but spaces have {len(x)} and {len(y)} points"
        )


def distortion(rel: Relation, x: FiniteMetricSpace, y: FiniteMetricSpace) -> float:
    """max | |xx'| - |yy'| | over pairs of elements of the relation."""
    _check_sizes(rel, x, y)
    ps = rel.sorted_pairs()
    xi = [i for i, _ in ps]
    yj = [j for _, j in ps]
    dx = x.dist[np.ix_(xi, xi)]
    dy = y.dist[np.ix_(yj, yj)]
    return float(np.abs(dx - dy).max())


def gh_lower_bound(x: FiniteMetricSpace, y: FiniteMetricSpace) -> float:
    """Half the diameter difference; never exceeds the GH distance."""
    return 0.5 * abs(x.diameter() - y.diameter())


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def _require_within_cap(m: int, n: int) -> None:
    if m * n > MAX_EXACT_BITS:
        raise SearchSpaceTooLarge(
            f"m*n = {m * n} exceeds the exhaustive-search cap of {MAX_EXACT_BITS}"
        )


def enumerate_correspondences(m: int, n: int) -> Iterator[Correspondence]:
    """Yield every correspondence between [0, m) and [0, n) exactly once.

    Order is ascending by bitmask (pair (i, j) occupies bit i*n + j), which
    is deterministic across runs and platforms.
    """
    _require_within_cap(m, n)
    mn = m * n
    full_rows = (1 << m) - 1
    full_cols = (1 << n) - 1
    for mask in range(1, 1 << mn):
        rows = cols = 0
        k = mask
        while k:
            b = (k & -k).bit_length() - 1
            rows |= 1 << (b // n)
            cols |= 1 << (b % n)
            k &= k - 1
        if rows == full_rows and cols == full_cols:
            yield Correspondence.from_bitmask(m, n, mask)


# ---------------------------------------------------------------------------
# exact solver
# ---------------------------------------------------------------------------

def _delta_table(x: FiniteMetricSpace, y: FiniteMetricSpace) -> list[list[float]]:
    """delta[i*n+j][k*n+l] = | dX[i][k] - dY[j][l] | as plain Python lists."""
    m, n = len(x), len(y)
    d = np.abs(
        x.dist[:, None, :, None] - y.dist[None, :, None, :]
    ).reshape(m * n, m * n)
    return d.tolist()


def _dis_codes(delta: list[list[float]], codes) -> float:
    best = 0.0
    cs = list(codes)
    for a in range(len(cs)):
        row = delta[cs[a]]
        for b in range(a + 1, len(cs)):
            v = row[cs[b]]
            if v > best:
                best = v
    return best


def _coverage_tables(m: int, n: int):
    mn = m * n
    row_bit = [1 << (k // n) for k in range(mn)]
    col_bit = [1 << (k % n) for k in range(mn)]
    # pref_*[b] = index bits coverable by codes < b
    pref_rows = [0] * (mn + 1)
    pref_cols = [0] * (mn + 1)
    for b in range(mn):
        pref_rows[b + 1] = pref_rows[b] | row_bit[b]
        pref_cols[b + 1] = pref_cols[b] | col_bit[b]
    return row_bit, col_bit, pref_rows, pref_cols


def _greedy_codes(x: FiniteMetricSpace, y: FiniteMetricSpace, delta) -> list[int]:
    """Deterministic starting correspondence: zip points sorted by eccentricity,
    then attach leftover points of the larger side greedily."""
    m, n = len(x), len(y)
    order_x = sorted(range(m), key=lambda i: (-float(x.dist[i].max()), i))
    order_y = sorted(range(n), key=lambda j: (-float(y.dist[j].max()), j))
    k = min(m, n)
    codes = [order_x[a] * n + order_y[a] for a in range(k)]

    def attach(candidates: list[int]) -> int:
        best_code, best_val = -1, None
        for code in candidates:
            row = delta[code]
            val = max((row[q] for q in codes), default=0.0)
            if best_val is None or val < best_val:
                best_code, best_val = code, val
        return best_code

    if m > n:
        for a in range(n, m):
            i = order_x[a]
            codes.append(attach([i * n + j for j in range(n)]))
    elif n > m:
        for a in range(m, n):
            j = order_y[a]
            codes.append(attach([i * n + j for i in range(m)]))
    return codes


def _min_distortion_value(delta, m: int, n: int, incumbent: float) -> float:
    """Branch-and-bound minimum distortion over all correspondences.

    ``incumbent`` must be attained by some correspondence; partial sets whose
    distortion already reaches the best value are pruned (distortion is
    monotone under adding pairs).
    """
    mn = m * n
    row_bit, col_bit, pref_rows, pref_cols = _coverage_tables(m, n)
    full_rows = (1 << m) - 1
    full_cols = (1 << n) - 1
    best = incumbent
    chosen: list[int] = []

    def go(b: int, rows: int, cols: int, cur: float) -> None:
        nonlocal best
        if cur >= best:
            return
        if b < 0:
            if rows == full_rows and cols == full_cols:
                best = cur
            return
        if (full_rows & ~rows) & ~pref_rows[b + 1]:
            return
        if (full_cols & ~cols) & ~pref_cols[b + 1]:
            return
        nd = cur
        row = delta[b]
        for q in chosen:
            v = row[q]
            if v > nd:
                nd = v
        if nd < best:
            chosen.append(b)
            go(b - 1, rows | row_bit[b], cols | col_bit[b], nd)
            chosen.pop()
        go(b - 1, rows, cols, cur)

    if best > 0.0:
        go(mn - 1, 0, 0, 0.0)
    return best


def _canonical_witness_mask(delta, m: int, n: int, d_star: float) -> int:
    """Smallest-cardinality, then smallest-bitmask correspondence with
    distortion d_star.

    Any optimal correspondence contains a covering subset of at most
    m + n - 1 pairs whose distortion cannot exceed (hence equals) d_star,
    so the cardinality loop always terminates.
    """
    mn = m * n
    row_bit, col_bit, pref_rows, pref_cols = _coverage_tables(m, n)
    full_rows = (1 << m) - 1
    full_cols = (1 << n) - 1
    chosen: list[int] = []

    def go(b: int, rows: int, cols: int, cur: float, count: int, mask: int, budget: int):
        need_r = full_rows & ~rows
        need_c = full_cols & ~cols
        if count + max(need_r.bit_count(), need_c.bit_count()) > budget:
            return None
        if b < 0:
            if count == budget and not need_r and not need_c:
                return mask
            return None
        if count + b + 1 < budget:
            return None
        if need_r & ~pref_rows[b + 1] or need_c & ~pref_cols[b + 1]:
            return None
        # exclude-first keeps masks in ascending numeric order
        res = go(b - 1, rows, cols, cur, count, mask, budget)
        if res is not None:
            return res
        nd = cur
        row = delta[b]
        for q in chosen:
            v = row[q]
            if v > nd:
                nd = v
        if nd <= d_star:
            chosen.append(b)
            res = go(
                b - 1, rows | row_bit[b], cols | col_bit[b], nd,
                count + 1, mask | 1 << b, budget,
            )
            chosen.pop()
            if res is not None:
                return res
        return None

    for budget in range(max(m, n), m + n):
        mask = go(mn - 1, 0, 0, 0.0, 0, 0, budget)
        if mask is not None:
            return mask
    raise AssertionError("no witness within m+n-1 pairs; unreachable")


def gh_distance_exact(x: FiniteMetricSpace, y: FiniteMetricSpace) -> GHResult:
    """Exact GH distance: half the minimum distortion over all correspondences.

    The witness is canonical: among all minimizers it has the fewest pairs,
    with remaining ties broken by the smallest bitmask.  Requires
    len(x) * len(y) <= 25.
    """
    m, n = len(x), len(y)
    _require_within_cap(m, n)
    delta = _delta_table(x, y)
    start = _greedy_codes(x, y, delta)
    d_star = _min_distortion_value(delta, m, n, _dis_codes(delta, start))
    mask = _canonical_witness_mask(delta, m, n, d_star)
    witness = Correspondence.from_bitmask(m, n, mask)
    return GHResult(0.5 * d_star, witness, "exact", True)


# ---------------------------------------------------------------------------
# heuristic solver
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HeuristicConfig:
    iterations: int = 1000
    seed: int = 0
    restarts: int = 4

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")


def _descend(delta, m: int, n: int, codes: set[int], max_steps: int) -> tuple[float, set[int]]:
    """First-improvement hill climbing on distortion.

    Moves are scanned in a fixed order: remove a pair (surjectivity
    permitting), swap a pair for an absent one, add a pair.  Distortion is
    monotone under inclusion, so adds never strictly improve; they are kept
    for completeness of the move set and as documentation of the neighborhood.
    """
    mn = m * n
    row_of = [k // n for k in range(mn)]
    col_of = [k % n for k in range(mn)]
    row_count = [0] * m
    col_count = [0] * n
    for p in codes:
        row_count[row_of[p]] += 1
        col_count[col_of[p]] += 1
    cur = _dis_codes(delta, codes)
    steps = 0

    def apply(removed: int | None, added: int | None) -> None:
        if removed is not None:
            codes.discard(removed)
            row_count[row_of[removed]] -= 1
            col_count[col_of[removed]] -= 1
        if added is not None:
            codes.add(added)
            row_count[row_of[added]] += 1
            col_count[col_of[added]] += 1

    while steps < max_steps:
        improved = False
        members = sorted(codes)
        # removals
        for p in members:
            if row_count[row_of[p]] < 2 or col_count[col_of[p]] < 2:
                continue
            d2 = _dis_codes(delta, codes - {p})
            if d2 < cur:
                apply(p, None)
                cur = d2
                improved = True
                break
        if not improved:
            # swaps
            for p in members:
                rest = codes - {p}
                base = _dis_codes(delta, rest)
                if base >= cur:
                    continue
                for q in range(mn):
                    if q in codes:
                        continue
                    keeps_rows = row_count[row_of[p]] >= 2 or row_of[q] == row_of[p]
                    keeps_cols = col_count[col_of[p]] >= 2 or col_of[q] == col_of[p]
                    if not (keeps_rows and keeps_cols):
                        continue
                    row = delta[q]
                    d2 = max(base, max((row[u] for u in rest), default=0.0))
                    if d2 < cur:
                        apply(p, q)
                        cur = d2
                        improved = True
                        break
                if improved:
                    break
        if not improved:
            # adds (never fire: see docstring)
            for q in range(mn):
                if q in codes:
                    continue
                row = delta[q]
                d2 = max(cur, max((row[u] for u in codes), default=0.0))
                if d2 < cur:
                    apply(None, q)
                    cur = d2
                    improved = True
                    break
        if not improved:
            break
        steps += 1
    return cur, codes


def _random_codes(rng, m: int, n: int) -> set[int]:
    xs = list(range(m))
    ys = list(range(n))
    rng.shuffle(xs)
    rng.shuffle(ys)
    k = min(m, n)
    codes = {xs[a] * n + ys[a] for a in range(k)}
    for a in range(k, m):
        codes.add(xs[a] * n + rng.randrange(n))
    for a in range(k, n):
        codes.add(rng.randrange(m) * n + ys[a])
    return codes


def gh_distance_heuristic(
    x: FiniteMetricSpace,
    y: FiniteMetricSpace,
    config: HeuristicConfig | None = None,
) -> GHResult:
    """Seeded local-search upper bound for the GH distance.

    Starts from the eccentricity-greedy correspondence, then runs
    first-improvement hill climbing with random restarts.  The result is
    deterministic for a fixed seed and always an upper bound (its witness is
    a genuine correspondence).
    """
    import random

    cfg = config or HeuristicConfig()
    m, n = len(x), len(y)
    delta = _delta_table(x, y)
    rng = random.Random(cfg.seed)

    best_dis = None
    best_codes: set[int] = set()
    for restart in range(cfg.restarts):
        if restart == 0:
            codes = set(_greedy_codes(x, y, delta))
        else:
            codes = _random_codes(rng, m, n)
        dis_val, codes = _descend(delta, m, n, codes, cfg.iterations)
        if best_dis is None or dis_val < best_dis:
            best_dis = dis_val
            best_codes = set(codes)
        if best_dis == 0.0:
            break

    pairs = frozenset((c // n, c % n) for c in best_codes)
    witness = Correspondence(m, n, pairs)
    return GHResult(0.5 * best_dis, witness, "heuristic", False)
