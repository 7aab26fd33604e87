"""Product metrics on Z x [a,b] realizing interpolation families of metrics.

Given a one-parameter family of (pseudo)metrics rho_t on a finite ground set
Z and a constant c > 0, the product distance between (z1, t) and (z2, s) is

    min over z in Z of ( |z1 z|_t + |z z2|_s )  +  c|t - s|.

Its restriction to each slice Z x {t} reproduces rho_t, every vertical fiber
{z} x [a,b] carries the distance c|t - s|, and the minimum set distance
between two slices is c|t - s|.  Two sufficient conditions make it a metric:

  1. monotonicity: t -> |zz'|_t is monotone for every pair z, z';
  2. a two-sided Lipschitz bound: | |zz'|_t - |zz'|_s | <= 2c|t - s|.

For the rectilinear family of a correspondence R between metric spaces X and
Y, every pairwise distance is affine in t with slope dy - dx, so condition 1
holds identically and condition 2 holds exactly when max|dy - dx| <= 2c,
i.e. for any c >= half the distortion of R.  With c = dis(R)/2 and R optimal,
the Hausdorff distance between slices equals d_GH(X, Y) * |t - s|: the
geodesic is realized as a shortest curve in Hausdorff distance.

All verification here is numeric and grid-based: the continuum statement is
certified on the chosen parameter grid only.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .correspondence import Correspondence, distortion
from .errors import (
    ConditionFailed,
    DegenerateGeodesic,
    NonpositiveC,
    ParameterOutOfRange,
)
from .geodesic import pullback_matrices
from .metric_core import (
    DEFAULT_TOL,
    FiniteMetricSpace,
    max_triangle_deficit,
    validate_metric,
)

# restriction / fiber identities hold by construction; they are checked at
# a much tighter tolerance than the triangle and Hausdorff certificates
IDENTITY_TOL = 1e-12


# ---------------------------------------------------------------------------
# interpolation families
# ---------------------------------------------------------------------------

class InterpolationFamily:
    """A one-parameter family of pseudometric matrices on a fixed ground set."""

    def __init__(self, ground_size: int, a: float, b: float, labels: Sequence[str] | None = None):
        if ground_size <= 0:
            raise ValueError("ground set must be nonempty")
        if not a < b:
            raise ValueError(f"need a < b, got [{a!r}, {b!r}]")
        self.a = float(a)
        self.b = float(b)
        self._ground_size = int(ground_size)
        self.labels: tuple[str, ...] = tuple(
            labels if labels is not None else (f"z{i}" for i in range(ground_size))
        )
        if len(self.labels) != ground_size:
            raise ValueError("one label per ground point required")

    @property
    def ground_size(self) -> int:
        return self._ground_size

    def _check_param(self, t: float) -> float:
        if not self.a <= t <= self.b:
            raise ParameterOutOfRange(f"t = {t!r} outside [{self.a}, {self.b}]")
        return float(t)

    def dist_at(self, t: float) -> np.ndarray:
        raise NotImplementedError


class RectilinearFamily(InterpolationFamily):
    """Affine interpolation (1-t)*dx + t*dy on [0, 1].

    dx and dy are the distance matrices of the two endpoint spaces pulled
    back to a common ground set, e.g. the elements of a correspondence.
    """

    def __init__(self, dx, dy, labels: Sequence[str] | None = None):
        dx = np.array(dx, dtype=float)
        dy = np.array(dy, dtype=float)
        if dx.shape != dy.shape or dx.ndim != 2 or dx.shape[0] != dx.shape[1]:
            raise ValueError("dx and dy must be square matrices of equal shape")
        super().__init__(dx.shape[0], 0.0, 1.0, labels)
        dx.setflags(write=False)
        dy.setflags(write=False)
        self.dx = dx
        self.dy = dy

    @classmethod
    def from_correspondence(
        cls, R: Correspondence, x: FiniteMetricSpace, y: FiniteMetricSpace
    ) -> "RectilinearFamily":
        dx, dy, labels = pullback_matrices(R, x, y)
        return cls(dx, dy, labels)

    def dist_at(self, t: float) -> np.ndarray:
        t = self._check_param(t)
        return (1.0 - t) * self.dx + t * self.dy

    @property
    def slopes(self) -> np.ndarray:
        return self.dy - self.dx

    def max_abs_slope(self) -> float:
        return float(np.abs(self.slopes).max())


class CallableFamily(InterpolationFamily):
    """Family backed by an arbitrary matrix-valued function of t."""

    def __init__(
        self,
        ground_size: int,
        a: float,
        b: float,
        fn: Callable[[float], np.ndarray],
        labels: Sequence[str] | None = None,
    ):
        super().__init__(ground_size, a, b, labels)
        self._fn = fn

    def dist_at(self, t: float) -> np.ndarray:
        t = self._check_param(t)
        m = np.asarray(self._fn(t), dtype=float)
        if m.shape != (self.ground_size, self.ground_size):
            raise ValueError(f"family evaluator returned shape {m.shape}")
        return m


class GridSampledFamily(InterpolationFamily):
    """Family known only at finitely many parameter values (loaded products)."""

    def __init__(
        self,
        values: Sequence[float],
        matrices: Sequence[np.ndarray],
        labels: Sequence[str] | None = None,
    ):
        if len(values) != len(matrices) or len(values) < 2:
            raise ValueError("need one matrix per parameter value, at least two")
        size = np.asarray(matrices[0]).shape[0]
        super().__init__(size, values[0], values[-1], labels)
        self._table = {float(t): np.array(m, dtype=float) for t, m in zip(values, matrices)}

    def dist_at(self, t: float) -> np.ndarray:
        try:
            return self._table[float(t)]
        except KeyError:
            raise ParameterOutOfRange(
                f"t = {t!r} is not one of the sampled parameter values"
            ) from None


# ---------------------------------------------------------------------------
# parameter grids
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ParamGrid:
    """Strictly increasing parameter values spanning [values[0], values[-1]]."""

    values: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if len(vals) < 2:
            raise ValueError("a grid needs at least two values")
        if any(vals[i] >= vals[i + 1] for i in range(len(vals) - 1)):
            raise ValueError("grid values must be strictly increasing")
        object.__setattr__(self, "values", vals)

    @classmethod
    def uniform(cls, count: int = 11, a: float = 0.0, b: float = 1.0) -> "ParamGrid":
        if count < 2:
            raise ValueError("a grid needs at least two values")
        return cls(tuple(np.linspace(a, b, count).tolist()))

    @property
    def a(self) -> float:
        return self.values[0]

    @property
    def b(self) -> float:
        return self.values[-1]

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)


# ---------------------------------------------------------------------------
# condition checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConditionWitness:
    """Ground pair (z1, z2) and parameters (t, s) where a check is worst."""

    z1: int
    z2: int
    t: float
    s: float

    def to_json_dict(self) -> dict:
        return {"z1": self.z1, "z2": self.z2, "t": self.t, "s": self.s}


@dataclass(frozen=True)
class ConditionCheck:
    """Outcome of one sufficient-condition check.

    ``worst`` is the violation magnitude (0 when clean); ``max_slope`` is the
    largest observed |d/dt| of a pairwise distance, exact for the closed-form
    method and a grid difference quotient otherwise.
    """

    condition: str  # "monotone" | "lipschitz"
    method: str  # "grid" | "closed_form"
    ok: bool
    worst: float
    witness: ConditionWitness | None
    tol: float
    max_slope: float | None = None

    def to_json_dict(self) -> dict:
        return {
            "condition": self.condition,
            "method": self.method,
            "ok": self.ok,
            "worst": self.worst,
            "witness": None if self.witness is None else self.witness.to_json_dict(),
            "tol": self.tol,
            "max_slope": self.max_slope,
        }


def check_monotone_condition(
    family: InterpolationFamily, grid: ParamGrid, tol: float = DEFAULT_TOL
) -> ConditionCheck:
    """Grid check: every pairwise distance is monotone in t within tol.

    For each pair the violation is min(worst drop, worst rise) over grid
    parameter pairs: the smaller residual of the two monotone readings.
    """
    ts = grid.values
    k = len(ts)
    f = np.stack([family.dist_at(t) for t in ts])
    z = family.ground_size
    drop = np.zeros((z, z))
    rise = np.zeros((z, z))
    for a in range(k):
        for b in range(a + 1, k):
            d = f[a] - f[b]
            np.maximum(drop, d, out=drop)
            np.maximum(rise, -d, out=rise)
    viol = np.minimum(drop, rise)
    worst = max(0.0, float(viol.max()))
    witness = None
    if worst > 0.0:
        z1, z2 = np.unravel_index(int(np.argmax(viol)), viol.shape)
        z1, z2 = int(z1), int(z2)
        want_drop = drop[z1, z2] <= rise[z1, z2]
        best = -math.inf
        at = (0, 1)
        for a in range(k):
            for b in range(a + 1, k):
                d = f[a, z1, z2] - f[b, z1, z2]
                v = d if want_drop else -d
                if v > best:
                    best = v
                    at = (a, b)
        witness = ConditionWitness(z1, z2, ts[at[0]], ts[at[1]])
    return ConditionCheck("monotone", "grid", worst <= tol, worst, witness, tol)


def check_lipschitz_condition(
    family: InterpolationFamily, c: float, grid: ParamGrid, tol: float = DEFAULT_TOL
) -> ConditionCheck:
    """Grid check of | |zz'|_t - |zz'|_s | <= 2c|t-s| + tol over grid pairs."""
    if c <= 0:
        raise NonpositiveC(f"c = {c!r} must be positive")
    ts = grid.values
    k = len(ts)
    f = np.stack([family.dist_at(t) for t in ts])
    raw = -math.inf
    slope_max = 0.0
    at = None
    for a in range(k):
        for b in range(a + 1, k):
            dt = ts[b] - ts[a]
            g = np.abs(f[a] - f[b])
            slope_max = max(slope_max, float(g.max()) / dt)
            deficit = g - 2.0 * c * dt
            m = float(deficit.max())
            if m > raw:
                raw = m
                z1, z2 = np.unravel_index(int(np.argmax(deficit)), deficit.shape)
                at = (int(z1), int(z2), a, b)
    witness = None
    if raw > 0.0 and at is not None:
        z1, z2, a, b = at
        if f[a, z1, z2] >= f[b, z1, z2]:
            t, s = ts[a], ts[b]
        else:
            t, s = ts[b], ts[a]
        witness = ConditionWitness(z1, z2, t, s)
    return ConditionCheck(
        "lipschitz", "grid", raw <= tol, max(0.0, raw), witness, tol, slope_max
    )


def check_monotone_exact(family: RectilinearFamily) -> ConditionCheck:
    """Closed form for affine families: always monotone."""
    return ConditionCheck("monotone", "closed_form", True, 0.0, None, 0.0)


def check_lipschitz_exact(family: RectilinearFamily, c: float) -> ConditionCheck:
    """Closed form for affine families: max|dy - dx| <= 2c, exactly.

    The reported violation is the worst total deficit over the segment,
    (max|slope| - 2c) * (b - a), which a grid containing both endpoints
    measures identically.
    """
    if c <= 0:
        raise NonpositiveC(f"c = {c!r} must be positive")
    slopes = family.slopes
    a = np.abs(slopes)
    smax = float(a.max())
    ok = smax <= 2.0 * c
    worst = max(0.0, (smax - 2.0 * c) * (family.b - family.a))
    witness = None
    if not ok:
        z1, z2 = np.unravel_index(int(np.argmax(a)), a.shape)
        z1, z2 = int(z1), int(z2)
        if slopes[z1, z2] > 0:
            t, s = family.b, family.a
        else:
            t, s = family.a, family.b
        witness = ConditionWitness(z1, z2, t, s)
    return ConditionCheck("lipschitz", "closed_form", ok, worst, witness, 0.0, smax)


def run_condition_checks(
    family: InterpolationFamily, c: float, grid: ParamGrid, tol: float = DEFAULT_TOL
) -> tuple[ConditionCheck, ConditionCheck]:
    """Both sufficient conditions, closed-form when the family is affine."""
    if isinstance(family, RectilinearFamily):
        return check_monotone_exact(family), check_lipschitz_exact(family, c)
    return (
        check_monotone_condition(family, grid, tol),
        check_lipschitz_condition(family, c, grid, tol),
    )


# ---------------------------------------------------------------------------
# the product space
# ---------------------------------------------------------------------------

def product_distance(
    family: InterpolationFamily,
    c: float,
    p1: tuple[int, float],
    p2: tuple[int, float],
) -> float:
    """Distance between (z1, t) and (z2, s): shortcut minimum plus c|t - s|."""
    if c <= 0:
        raise NonpositiveC(f"c = {c!r} must be positive")
    z1, t = p1
    z2, s = p2
    for z in (z1, z2):
        if not 0 <= z < family.ground_size:
            raise ValueError(f"ground index {z} out of range")
    a = family.dist_at(t)
    b = family.dist_at(s)
    return float((a[z1, :] + b[:, z2]).min() + c * abs(t - s))


@dataclass(frozen=True, eq=False)
class ProductSpace:
    """The finite product Z x grid with the shortcut-plus-vertical metric.

    Points are ordered slice-major: index k * |Z| + z is ground point z at
    grid value number k.
    """

    family: InterpolationFamily
    c: float
    grid: ParamGrid
    points: tuple[tuple[int, float], ...]
    dist: np.ndarray
    checks: tuple[ConditionCheck, ConditionCheck] | None = None
    forced: bool = False

    @property
    def ground_size(self) -> int:
        return self.family.ground_size

    def point_index(self, z: int, grid_pos: int) -> int:
        return grid_pos * self.ground_size + z

    def slice_indices(self, grid_pos: int) -> range:
        z = self.ground_size
        return range(grid_pos * z, (grid_pos + 1) * z)

    def slice_matrix(self, grid_pos: int) -> np.ndarray:
        idx = self.slice_indices(grid_pos)
        return self.dist[idx.start : idx.stop, idx.start : idx.stop]

    def to_json_dict(self) -> dict:
        labels = self.family.labels
        return {
            "c": self.c,
            "grid": list(self.grid.values),
            "points": [
                {"z": z, "label": labels[z], "t": t} for z, t in self.points
            ],
            "matrix": self.dist.tolist(),
        }


def build_product(
    family: InterpolationFamily,
    c: float,
    grid: ParamGrid,
    tol: float = DEFAULT_TOL,
    force: bool = False,
) -> ProductSpace:
    """Materialize the full product distance matrix over Z x grid.

    Each slice of the family is validated as a pseudometric first.  The two
    sufficient conditions are checked (closed-form for affine families) and
    failure raises ConditionFailed unless ``force`` is set, in which case the
    product is built anyway and verification will report the violations.
    """
    if c <= 0:
        raise NonpositiveC(f"c = {c!r} must be positive")
    if grid.a != family.a or grid.b != family.b:
        raise ParameterOutOfRange(
            f"grid spans [{grid.a}, {grid.b}] but the family is defined on "
            f"[{family.a}, {family.b}]"
        )
    slices = [np.asarray(family.dist_at(t), dtype=float) for t in grid.values]
    for t, mat in zip(grid.values, slices):
        validate_metric(mat, kind="pseudometric", tol=tol, name=f"slice(t={t})")

    mono, lips = run_condition_checks(family, c, grid, tol)
    if not (mono.ok and lips.ok) and not force:
        raise ConditionFailed(mono, lips)

    z = family.ground_size
    k = len(grid)
    n = z * k
    d = np.zeros((n, n))
    for i in range(k):
        for j in range(i, k):
            gap = c * abs(grid.values[j] - grid.values[i])
            block = (slices[i][:, :, None] + slices[j][None, :, :]).min(axis=1) + gap
            d[i * z : (i + 1) * z, j * z : (j + 1) * z] = block
            if j != i:
                d[j * z : (j + 1) * z, i * z : (i + 1) * z] = block.T
    d.setflags(write=False)
    points = tuple((zz, t) for t in grid.values for zz in range(z))
    return ProductSpace(
        family=family,
        c=float(c),
        grid=grid,
        points=points,
        dist=d,
        checks=(mono, lips),
        forced=force and not (mono.ok and lips.ok),
    )


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VerificationReport:
    """Numeric certificate for one product space.

    Deviations are absolute.  ``passed`` requires the sufficient conditions
    to hold, the triangle scan and both slice-distance identities to stay
    within ``tol``, the restriction and fiber identities within the stricter
    IDENTITY_TOL, and exact symmetry and zero diagonal.
    """

    monotone: ConditionCheck
    lipschitz: ConditionCheck
    max_triangle_violation: float
    triangle_witness: tuple[int, int, int] | None
    slice_hausdorff_max_error: float
    slice_min_distance_max_error: float
    restriction_max_error: float
    fiber_max_error: float
    symmetry_error: float
    diagonal_error: float
    tol: float

    @property
    def monotone_ok(self) -> bool:
        return self.monotone.ok

    @property
    def lipschitz_ok(self) -> bool:
        return self.lipschitz.ok

    @property
    def passed(self) -> bool:
        return (
            self.monotone.ok
            and self.lipschitz.ok
            and self.max_triangle_violation <= self.tol
            and self.slice_hausdorff_max_error <= self.tol
            and self.slice_min_distance_max_error <= self.tol
            and self.restriction_max_error <= IDENTITY_TOL
            and self.fiber_max_error <= IDENTITY_TOL
            and self.symmetry_error == 0.0
            and self.diagonal_error == 0.0
        )

    def to_json_dict(self) -> dict:
        return {
            "monotone": self.monotone.to_json_dict(),
            "lipschitz": self.lipschitz.to_json_dict(),
            "max_triangle_violation": self.max_triangle_violation,
            "triangle_witness": (
                None if self.triangle_witness is None else list(self.triangle_witness)
            ),
            "slice_hausdorff_max_error": self.slice_hausdorff_max_error,
            "slice_min_distance_max_error": self.slice_min_distance_max_error,
            "restriction_max_error": self.restriction_max_error,
            "fiber_max_error": self.fiber_max_error,
            "symmetry_error": self.symmetry_error,
            "diagonal_error": self.diagonal_error,
            "tol": self.tol,
            "passed": self.passed,
        }


def verify_product(prod: ProductSpace, tol: float = DEFAULT_TOL) -> VerificationReport:
    """Re-derive every certificate of a product from its distance matrix.

    Scans all point triples for triangle violations, compares slice-to-slice
    Hausdorff and minimum distances against c|t - s|, and checks the
    restriction and vertical-fiber identities.  Never raises on failures;
    everything is reported.
    """
    d = prod.dist
    z = prod.ground_size
    ts = prod.grid.values
    k = len(ts)
    c = prod.c

    mono, lips = run_condition_checks(prod.family, c, prod.grid, tol)

    tri, tri_wit = max_triangle_deficit(d)
    tri = max(0.0, tri)

    sym = float(np.abs(d - d.T).max())
    diag = float(np.abs(np.diag(d)).max())

    restr = 0.0
    for i in range(k):
        restr = max(
            restr,
            float(np.abs(prod.slice_matrix(i) - prod.family.dist_at(ts[i])).max()),
        )

    fiber = 0.0
    dh_err = 0.0
    md_err = 0.0
    for i in range(k):
        for j in range(i, k):
            target = c * abs(ts[j] - ts[i])
            block = d[i * z : (i + 1) * z, j * z : (j + 1) * z]
            fiber = max(fiber, float(np.abs(np.diag(block) - target).max()))
            dh = max(float(block.min(axis=1).max()), float(block.min(axis=0).max()))
            dh_err = max(dh_err, abs(dh - target))
            md_err = max(md_err, abs(float(block.min()) - target))

    return VerificationReport(
        monotone=mono,
        lipschitz=lips,
        max_triangle_violation=tri,
        triangle_witness=tri_wit if tri > 0.0 else None,
        slice_hausdorff_max_error=dh_err,
        slice_min_distance_max_error=md_err,
        restriction_max_error=restr,
        fiber_max_error=fiber,
        symmetry_error=sym,
        diagonal_error=diag,
        tol=tol,
    )


# ---------------------------------------------------------------------------
# geodesic realization
# ---------------------------------------------------------------------------

def realize_geodesic(
    x: FiniteMetricSpace,
    y: FiniteMetricSpace,
    R: Correspondence,
    grid: ParamGrid | None = None,
    c_override: float | None = None,
    tol: float = DEFAULT_TOL,
    force: bool = False,
) -> tuple[ProductSpace, VerificationReport]:
    """Realize the rectilinear geodesic of R inside a product space.

    The vertical scale defaults to c = dis(R)/2, the smallest value for
    which the Lipschitz condition holds; isometric inputs (distortion zero)
    have no such c and require an explicit override.  When R is optimal this
    c equals d_GH(X, Y), so the certified slice Hausdorff distances read
    d_H(R_t, R_s) = d_GH(X, Y) * |t - s|.
    """
    dis = distortion(R, x, y)
    if c_override is None:
        if dis == 0.0:
            raise DegenerateGeodesic(
                "distortion is zero (isometric inputs); pass an explicit c"
            )
        c = 0.5 * dis
    else:
        if c_override <= 0:
            raise NonpositiveC(f"c = {c_override!r} must be positive")
        c = float(c_override)
    family = RectilinearFamily.from_correspondence(R, x, y)
    if grid is None:
        grid = ParamGrid.uniform(11)
    prod = build_product(family, c, grid, tol=tol, force=force)
    report = verify_product(prod, tol=tol)
    return prod, report


# ---------------------------------------------------------------------------
# product file format
# ---------------------------------------------------------------------------

def product_from_json_dict(data: dict) -> ProductSpace:
    """Rebuild a product from its JSON export.

    The family is reconstructed from the slice submatrices (it is only known
    at the grid values), points are permuted into canonical slice-major
    order, and nothing is verified here; run verify_product afterwards.
    """
    if "product" in data:
        data = data["product"]
    for key in ("c", "grid", "points", "matrix"):
        if key not in data:
            raise ValueError(f"product JSON is missing the {key!r} field")
    c = float(data["c"])
    if c <= 0:
        raise NonpositiveC(f"c = {c!r} must be positive")
    grid = ParamGrid(tuple(float(t) for t in data["grid"]))
    pts = data["points"]
    mat = np.array(data["matrix"], dtype=float)
    n = len(pts)
    if mat.shape != (n, n):
        raise ValueError(f"matrix shape {mat.shape} does not match {n} points")
    k = len(grid)
    if n % k != 0:
        raise ValueError(f"{n} points cannot split into {k} equal slices")
    z = n // k

    pos_of = {t: i for i, t in enumerate(grid.values)}
    labels: list[str | None] = [None] * z
    where: dict[tuple[int, int], int] = {}
    for file_idx, p in enumerate(pts):
        zi, t, label = int(p["z"]), float(p["t"]), str(p["label"])
        if not 0 <= zi < z:
            raise ValueError(f"point z index {zi} out of range")
        if t not in pos_of:
            raise ValueError(f"point parameter {t!r} is not a grid value")
        key = (zi, pos_of[t])
        if key in where:
            raise ValueError(f"duplicate point (z={zi}, t={t!r})")
        where[key] = file_idx
        if labels[zi] is None:
            labels[zi] = label
        elif labels[zi] != label:
            raise ValueError(f"inconsistent labels for ground point {zi}")
    if len(where) != n:
        raise ValueError("points do not cover the full Z x grid product")

    perm = [where[(zz, pos)] for pos in range(k) for zz in range(z)]
    d = mat[np.ix_(perm, perm)]
    d.setflags(write=False)
    slices = [d[i * z : (i + 1) * z, i * z : (i + 1) * z] for i in range(k)]
    family = GridSampledFamily(grid.values, slices, [str(s) for s in labels])
    points = tuple((zz, t) for t in grid.values for zz in range(z))
    return ProductSpace(family=family, c=c, grid=grid, points=points, dist=d)


def load_product(path: str | Path) -> ProductSpace:
    return product_from_json_dict(json.loads(Path(path).read_text()))
