"""Discretized linear maps on the integer grid.

A linear map followed by coordinatewise nearest-integer rounding sends
Z^n to Z^n but loses injectivity; the surviving fraction of a large
ball measures the loss. Composing independent random rotations drives
that fraction down, which is also visible on raster images pushed
through the same pipeline.
"""

import math
from dataclasses import dataclass

import numpy as np

from .convex import unit_ball_volume
from .frequency import FrequencyTable
from .pointset import PointSample


@dataclass(frozen=True, eq=False)
class LinearMapSpec:
    """2x2 (or nxn) invertible map with provenance metadata."""

    matrix: np.ndarray
    kind: str = "general"
    angle: float = None

    def __post_init__(self):
        M = np.asarray(self.matrix, dtype=np.float64)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ValueError("matrix must be square")
        if abs(np.linalg.det(M)) < 1e-12:
            raise ValueError("matrix must be invertible")
        object.__setattr__(self, "matrix", M)

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def det(self) -> float:
        return float(np.linalg.det(self.matrix))

    def opnorm(self) -> float:
        return float(np.linalg.norm(self.matrix, 2))

    def inv_opnorm(self) -> float:
        return float(np.linalg.norm(np.linalg.inv(self.matrix), 2))


def rotation(angle: float) -> LinearMapSpec:
    c, s = math.cos(angle), math.sin(angle)
    return LinearMapSpec(np.array([[c, -s], [s, c]]), kind="rotation", angle=float(angle))


@dataclass(frozen=True, eq=False)
class DiscretizedSequence:
    maps: tuple
    seed: int = None

    def __post_init__(self):
        object.__setattr__(self, "maps", tuple(self.maps))
        if not self.maps:
            raise ValueError("need at least one map")
        d = self.maps[0].dimension
        if any(m.dimension != d for m in self.maps):
            raise ValueError("all maps must share a dimension")

    @property
    def dimension(self) -> int:
        return self.maps[0].dimension


def random_rotation_sequence(seed: int, k: int) -> DiscretizedSequence:
    """k iid rotations with angles uniform on [0, 2pi).

    Uses numpy's default PCG64 generator; the seed fully determines the
    angles on any platform.
    """
    rng = np.random.default_rng(seed)
    angles = rng.uniform(0.0, 2.0 * math.pi, size=int(k))
    return DiscretizedSequence(tuple(rotation(a) for a in angles), seed=int(seed))


def project(x) -> np.ndarray:
    """Coordinatewise nearest integer; half-integer ties round up."""
    return np.floor(np.asarray(x, dtype=np.float64) + 0.5).astype(np.int64)


def grid_ball(R: float, dimension: int = 2) -> np.ndarray:
    """Integer points of Z^n in the closed ball B(0, R), lexicographic."""
    h = int(math.floor(R + 1e-9))
    ax = np.arange(-h, h + 1, dtype=np.int64)
    grid = np.stack(np.meshgrid(*([ax] * dimension), indexing="ij"), axis=-1)
    grid = grid.reshape(-1, dimension)
    keep = (grid.astype(np.float64) ** 2).sum(axis=1) <= R * R + 1e-9
    return grid[keep]


def _unique_rows(pts: np.ndarray) -> np.ndarray:
    """Fast unique for planar integer rows via packed int64 keys."""
    span = np.int64(1) << np.int64(21)
    if pts.shape[1] != 2 or (len(pts) and np.abs(pts).max() >= span):
        return np.unique(pts, axis=0)
    base = 2 * span + 1
    keys = (pts[:, 0] + span) * base + (pts[:, 1] + span)
    keys = np.unique(keys)
    out = np.empty((len(keys), 2), dtype=np.int64)
    out[:, 0] = keys // base - span
    out[:, 1] = keys % base - span
    return out


def _apply(seq: DiscretizedSequence, k: int, pts: np.ndarray, collect=None) -> np.ndarray:
    if not (1 <= k <= len(seq.maps)):
        raise ValueError(f"k must lie in 1..{len(seq.maps)}")
    cur = pts
    for j in range(k):
        cur = _unique_rows(project(cur.astype(np.float64) @ seq.maps[j].matrix.T))
        if collect is not None:
            collect.append(cur)
    return cur


def discretized_image(seq: DiscretizedSequence, k: int, R: float,
                      label: str = "") -> PointSample:
    """Image of B(0,R) cap Z^n under k rounded maps, as a sample.

    The declared region radius inflates through operator norms plus the
    sqrt(n)/2 rounding budget per step.
    """
    pts = grid_ball(R, seq.dimension)
    img = _apply(seq, k, pts)
    rr = float(R)
    half_diag = math.sqrt(seq.dimension) / 2.0
    for j in range(k):
        rr = rr * seq.maps[j].opnorm() + half_diag
    return PointSample(
        dimension=seq.dimension,
        points=img,
        region_radius=rr + 1e-6,
        label=label or f"image(k={k},R={R})",
    )


@dataclass(frozen=True)
class InjectivityTrace:
    """Survival ratios per composition depth and radius.

    taus[i][j] is the surviving fraction after maps 1..(i+1) at
    radii[j]; counts carries the raw cardinalities. density_estimates
    holds the census-based density of the deepest image per radius
    (unit-determinant sequences only), comparable to the ratio up to
    boundary terms.
    """

    radii: tuple
    taus: tuple
    counts: tuple
    input_counts: tuple
    density_estimates: tuple
    note: str = ""


def rate_of_injectivity(seq: DiscretizedSequence, k: int, radii) -> InjectivityTrace:
    """Surviving-fraction trace tau^j(R) for j = 1..k over a radius schedule."""
    radii = tuple(sorted(float(r) for r in radii))
    all_taus = []
    all_counts = []
    input_counts = []
    dens = []
    unit_det = all(abs(abs(m.det()) - 1.0) < 1e-9 for m in seq.maps[:k])
    for R in radii:
        pts = grid_ball(R, seq.dimension)
        input_counts.append(len(pts))
        stages = []
        _apply(seq, k, pts, collect=stages)
        all_counts.append(tuple(len(s) for s in stages))
        all_taus.append(tuple(len(s) / len(pts) for s in stages))
        if unit_det:
            # census of the deepest image on a backward-eroded ball: a
            # point there certainly has a source inside the input ball
            rho = R
            for j in range(k - 1, -1, -1):
                rho = rho / seq.maps[j].inv_opnorm() - math.sqrt(seq.dimension) / 2.0
            rho = max(rho, 0.0)
            img = stages[-1]
            if rho > 1:
                inside = (img.astype(np.float64) ** 2).sum(axis=1) <= rho * rho
                vol = unit_ball_volume(seq.dimension) * rho ** seq.dimension
                dens.append(float(inside.sum()) / vol)
            else:
                dens.append(float("nan"))
        else:
            dens.append(float("nan"))
    taus = tuple(tuple(all_taus[j][i] for j in range(len(radii))) for i in range(k))
    counts = tuple(tuple(all_counts[j][i] for j in range(len(radii))) for i in range(k))
    note = "census density applies at the deepest stage" if unit_det else \
        "determinant not unimodular; census density skipped"
    return InjectivityTrace(
        radii=radii,
        taus=taus,
        counts=counts,
        input_counts=tuple(input_counts),
        density_estimates=tuple(dens),
        note=note,
    )


@dataclass(frozen=True)
class SeedDifferenceReport:
    u0: tuple
    rho0: float
    radius: float
    density: float
    sum_nonzero: float
    sum_floor: float
    rho_floor: float
    uncertainty_budget: float
    sum_ok: bool
    rho_ok: bool


def seed_difference(table: FrequencyTable, density: float = None) -> SeedDifferenceReport:
    """High-frequency nonzero difference guaranteed by the ball inequality.

    With r = max(3, sqrt(8/(pi D))) the frequency mass of B(0, r) is at
    least 2, so the mass off the origin is at least 1 and some nonzero
    integer difference u0 carries rho(u0) >= 1/(pi (r+1)^2) >= D/16.
    Only meaningful for planar integral samples.
    """
    if table.dimension != 2:
        raise ValueError("seed difference argument lives in the plane")
    if not table.sample_integral:
        raise ValueError("requires a table over an integral sample")
    D = float(density) if density is not None else float(table.density.value)
    if D <= 0:
        raise ValueError("density must be positive")
    r = max(3.0, math.sqrt(8.0 / (math.pi * D)))
    if r > table.cutoff + 1e-9:
        raise ValueError(
            f"table cutoff {table.cutoff} smaller than required radius {r:.4g}"
        )
    s_u_sum = table.density.uncertainty() * (math.pi * (r / 2.0) ** 2)
    total = 0.0
    best = None
    for key, rho in table.sorted_entries():
        if all(c == 0 for c in key):
            continue
        if sum(float(c) ** 2 for c in key) <= r * r + 1e-9:
            total += float(rho)
            cand = (-float(rho), key)
            if best is None or cand < best:
                best = cand
    if best is None:
        raise ValueError("no nonzero differences inside the seed radius")
    rho0 = -best[0]
    u0 = tuple(float(c) for c in best[1])
    candidates = math.pi * (r + 1.0) ** 2
    rho_floor = 1.0 / candidates - s_u_sum / candidates
    sum_floor = 1.0 - s_u_sum
    return SeedDifferenceReport(
        u0=u0,
        rho0=rho0,
        radius=r,
        density=D,
        sum_nonzero=total,
        sum_floor=sum_floor,
        rho_floor=rho_floor,
        uncertainty_budget=s_u_sum,
        sum_ok=total >= sum_floor - 1e-12,
        rho_ok=rho0 >= rho_floor - 1e-12,
    )


def degrade_image(image: np.ndarray, seq: DiscretizedSequence, k: int = None):
    """Push a grayscale raster through the rounded maps, frame fixed.

    Pixel (row i, col j) is treated as the integer point
    (j - W//2, H//2 - i); unreached destination pixels are white (255).
    Returns (final_image, per_step_lost_fractions).
    """
    img = np.asarray(image)
    if img.ndim != 2 or img.dtype != np.uint8:
        raise ValueError("expected a 2d uint8 grayscale raster")
    if seq.dimension != 2:
        raise ValueError("raster degradation needs planar maps")
    k = len(seq.maps) if k is None else int(k)
    H, W = img.shape
    cx, cy = W // 2, H // 2
    jj, ii = np.meshgrid(np.arange(W), np.arange(H))
    coords = np.stack([jj.ravel() - cx, cy - ii.ravel()], axis=1).astype(np.int64)
    values = img.ravel()
    total = float(H * W)
    lost = []
    cur = coords
    for step in range(k):
        cur = project(cur.astype(np.float64) @ seq.maps[step].matrix.T)
        # merged trajectories never split, so this fraction cannot drop
        lost.append(1.0 - len(_unique_rows(cur)) / total)
    out = np.full((H, W), 255, dtype=np.uint8)
    xs = cur[:, 0] + cx
    ys = cy - cur[:, 1]
    inside = (xs >= 0) & (xs < W) & (ys >= 0) & (ys < H)
    # write in reverse source order so the first source pixel wins
    idx = np.nonzero(inside)[0][::-1]
    out[ys[idx], xs[idx]] = values[idx]
    return out, tuple(lost)
