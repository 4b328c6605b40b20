"""Finite samples of discrete point sets and their statistics.

A PointSample is a finite window Gamma cap B(0, region_radius) of an
ideally infinite set. Every statistic erodes: it only reads balls that
lie entirely inside the sampled region, so no estimate silently touches
the unsampled exterior.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .convex import unit_ball_volume

MERGE_TOL = 1e-9
GAP_THRESHOLD = 1e-6


@dataclass(frozen=True, eq=False)
class PointSample:
    """Finite point configuration inside the ball B(0, region_radius).

    points: (N, dimension) array, int64 when every coordinate is
    integral (exact membership tests), float64 otherwise.
    periods: optional lattice basis (construction metadata set by the
    generators; periodic structure is never inferred from coordinates).
    """

    dimension: int
    points: np.ndarray
    region_radius: float
    label: str = ""
    periods: np.ndarray = None

    def __post_init__(self):
        pts = np.asarray(self.points)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2 or (pts.size and pts.shape[1] != self.dimension):
            raise ValueError(
                f"points must have shape (N, {self.dimension}), got {pts.shape}"
            )
        if pts.size == 0:
            pts = pts.reshape(0, self.dimension)
        if not np.issubdtype(pts.dtype, np.integer):
            pts = pts.astype(np.float64)
            if pts.size and np.all(pts == np.round(pts)) and np.abs(pts).max() < 2**53:
                pts = pts.astype(np.int64)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "region_radius", float(self.region_radius))
        if self.region_radius <= 0:
            raise ValueError("region_radius must be positive")
        if pts.size:
            norms = np.sqrt((pts.astype(np.float64) ** 2).sum(axis=1))
            if norms.max() > self.region_radius + 1e-9:
                raise ValueError(
                    f"point at norm {norms.max():.6g} lies outside the declared "
                    f"region of radius {self.region_radius:.6g}"
                )
            if len(np.unique(pts, axis=0)) != len(pts):
                raise ValueError("duplicate points (exact coordinate equality)")

    @property
    def size(self) -> int:
        return len(self.points)

    def is_integral(self) -> bool:
        return np.issubdtype(self.points.dtype, np.integer)


@dataclass(frozen=True)
class DeloneParams:
    r_packing: float
    R_covering: float
    probe_spacing: float


@dataclass(frozen=True)
class DensityEstimate:
    """Density value plus the provenance needed to judge it.

    trace holds (radius, value) pairs on a growing schedule; the
    documented sampling-uncertainty heuristic is the absolute change
    across the last two trace radii.
    """

    value: object
    radius_used: float
    erosion_margin: float
    center_count: int
    sup_over_centers: bool
    trace: tuple = ()

    def uncertainty(self) -> float:
        if len(self.trace) < 2:
            return 0.0
        return abs(float(self.trace[-1][1]) - float(self.trace[-2][1]))


@dataclass(frozen=True)
class MeyerReport:
    is_uniformly_discrete: bool
    min_gap: float
    difference_count: int


def _tree(sample: PointSample) -> cKDTree:
    return cKDTree(sample.points.astype(np.float64))


def _int_keys(pts: np.ndarray, span: int) -> np.ndarray:
    """Injective int64 encoding of integer rows with |coord| < span."""
    base = np.int64(2 * span + 1)
    keys = np.zeros(len(pts), dtype=np.int64)
    for j in range(pts.shape[1]):
        keys = keys * base + (pts[:, j].astype(np.int64) + span)
    return keys


def membership_mask(sample: PointSample, queries: np.ndarray, tol: float = MERGE_TOL) -> np.ndarray:
    """Boolean mask: which query rows occur in the sample.

    Integer samples match exactly; float samples match within tol.
    """
    queries = np.asarray(queries)
    if queries.ndim == 1:
        queries = queries.reshape(-1, sample.dimension)
    if sample.size == 0 or len(queries) == 0:
        return np.zeros(len(queries), dtype=bool)
    if sample.is_integral() and np.issubdtype(queries.dtype, np.integer):
        span = int(max(np.abs(sample.points).max(initial=0),
                       np.abs(queries).max(initial=0))) + 2
        sk = np.sort(_int_keys(sample.points, span))
        qk = _int_keys(queries, span)
        idx = np.searchsorted(sk, qk)
        idx = np.minimum(idx, len(sk) - 1)
        return sk[idx] == qk
    tree = _tree(sample)
    d, _ = tree.query(queries.astype(np.float64), k=1)
    return d <= tol


def dedupe_points(pts: np.ndarray, tol: float = MERGE_TOL) -> np.ndarray:
    """Deduplicate rows; float rows within tol of each other are merged.

    Grid rounding first, then a union-find pass over residual close
    pairs so clusters straddling a rounding boundary still merge.
    """
    if len(pts) == 0:
        return pts
    if np.issubdtype(pts.dtype, np.integer):
        return np.unique(pts, axis=0)
    scale = 1.0 / tol
    snapped = np.round(pts * scale) / scale
    uniq, first = np.unique(snapped, axis=0, return_index=True)
    reps = pts[np.sort(first)]
    tree = cKDTree(reps)
    pairs = tree.query_pairs(2.0 * tol, output_type="ndarray")
    if len(pairs) == 0:
        order = np.lexsort(reps.T[::-1])
        return reps[order]
    parent = np.arange(len(reps))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    roots = np.array([find(i) for i in range(len(reps))])
    keep = reps[np.unique(roots)]
    order = np.lexsort(keep.T[::-1])
    return keep[order]


def delone_parameters(sample: PointSample, probe_spacing: float = None) -> DeloneParams:
    """Measure packing radius and (eroded) covering radius.

    r_packing is half the minimum pairwise distance. R_covering is the
    worst distance from a probe grid on the eroded region B(0, R_s/2)
    to the sample; probe resolution bounds the error by spacing*sqrt(n)/2.
    """
    if sample.size < 2:
        raise ValueError("need at least two points")
    tree = _tree(sample)
    d, _ = tree.query(sample.points.astype(np.float64), k=2)
    r_packing = float(d[:, 1].min()) / 2.0
    if probe_spacing is None:
        probe_spacing = max(r_packing / 10.0, sample.region_radius / 4000.0)
    half = sample.region_radius / 2.0
    n = sample.dimension
    steps = int(math.floor(half / probe_spacing))
    if (2 * steps + 1) ** n > 5e7:
        raise ValueError("probe grid too fine for this region; raise probe_spacing")
    ax = np.arange(-steps, steps + 1, dtype=np.float64) * probe_spacing
    grid = np.stack(np.meshgrid(*([ax] * n), indexing="ij"), axis=-1).reshape(-1, n)
    grid = grid[(grid ** 2).sum(axis=1) <= half * half]
    R_cov = 0.0
    for i in range(0, len(grid), 500_000):
        dd, _ = tree.query(grid[i:i + 500_000], k=1)
        R_cov = max(R_cov, float(dd.max()))
    return DeloneParams(r_packing=r_packing, R_covering=R_cov, probe_spacing=probe_spacing)


def _ball_counts(sample: PointSample, centers: np.ndarray, R: float) -> np.ndarray:
    tree = _tree(sample)
    return np.asarray(
        tree.query_ball_point(centers.astype(np.float64), R + 1e-9, return_length=True)
    )


def density_at(sample: PointSample, R: float, centers) -> DensityEstimate:
    """Point count per unit volume in balls B(c, R), eroded.

    Every requested ball must lie inside the sampled region. With
    several centers the supremum is reported (sup_over_centers=True).
    """
    centers = np.atleast_2d(np.asarray(centers, dtype=np.float64))
    if centers.shape[1] != sample.dimension:
        raise ValueError("center dimension mismatch")
    reach = np.sqrt((centers ** 2).sum(axis=1)).max() + R
    if reach > sample.region_radius + 1e-9:
        raise ValueError(
            f"ball of radius {R} at requested center leaves the sampled region "
            f"(reach {reach:.6g} > {sample.region_radius:.6g})"
        )
    vol = unit_ball_volume(sample.dimension) * R ** sample.dimension
    counts = _ball_counts(sample, centers, R)
    value = counts.max() / vol
    return DensityEstimate(
        value=float(value),
        radius_used=float(R),
        erosion_margin=float(sample.region_radius - reach),
        center_count=len(centers),
        sup_over_centers=len(centers) > 1,
        trace=((float(R), float(value)),),
    )


def upper_density(sample: PointSample, radii, center_grid_spacing: float) -> DensityEstimate:
    """Supremum density over a center grid, on a growing radius schedule.

    The same grid (admissible for the largest radius) is used for every
    radius so the trace is comparable across radii.
    """
    radii = sorted(float(r) for r in radii)
    if not radii:
        raise ValueError("need at least one radius")
    Rmax = radii[-1]
    if Rmax + center_grid_spacing > sample.region_radius + 1e-9:
        raise ValueError("largest radius plus grid spacing exceeds the sampled region")
    room = sample.region_radius - Rmax
    steps = int(math.floor(room / center_grid_spacing))
    n = sample.dimension
    if (2 * steps + 1) ** n > 1e6:
        raise ValueError("center grid too fine; raise center_grid_spacing")
    ax = np.arange(-steps, steps + 1, dtype=np.float64) * center_grid_spacing
    grid = np.stack(np.meshgrid(*([ax] * n), indexing="ij"), axis=-1).reshape(-1, n)
    grid = grid[(grid ** 2).sum(axis=1) <= room * room]
    if len(grid) == 0:
        grid = np.zeros((1, n))
    far = float(np.sqrt((grid ** 2).sum(axis=1)).max())
    trace = []
    for R in radii:
        vol = unit_ball_volume(n) * R ** n
        counts = _ball_counts(sample, grid, R)
        trace.append((R, float(counts.max() / vol)))
    return DensityEstimate(
        value=trace[-1][1],
        radius_used=Rmax,
        erosion_margin=float(sample.region_radius - Rmax - far),
        center_count=len(grid),
        sup_over_centers=len(grid) > 1,
        trace=tuple(trace),
    )


def difference_set(sample: PointSample, cutoff: float) -> PointSample:
    """All pairwise differences p - q with |p - q| <= cutoff, as a sample.

    Contains 0 and is symmetric under negation. Integer coordinates
    dedupe exactly; float coordinates merge within 1e-9 so that float
    fuzz cannot masquerade as distinct difference vectors.
    """
    if sample.size == 0:
        raise ValueError("empty sample has no differences")
    tree = _tree(sample)
    pairs = tree.query_pairs(cutoff + 1e-9, output_type="ndarray")
    pts = sample.points
    if len(pairs):
        d = pts[pairs[:, 0]] - pts[pairs[:, 1]]
        diffs = np.concatenate([d, -d, np.zeros((1, sample.dimension), dtype=pts.dtype)])
    else:
        diffs = np.zeros((1, sample.dimension), dtype=pts.dtype)
    diffs = dedupe_points(diffs)
    return PointSample(
        dimension=sample.dimension,
        points=diffs,
        region_radius=float(cutoff),
        label=f"diff({sample.label})" if sample.label else "diff",
    )


def meyer_check(sample: PointSample, cutoff: float) -> MeyerReport:
    """Uniform discreteness of the difference set, the Meyer diagnostic.

    min_gap is the smallest pairwise distance among difference vectors
    within the cutoff; a genuinely Meyer set keeps it bounded away from
    zero while perturbed sets see differences accumulate.
    """
    ds = difference_set(sample, cutoff)
    if ds.size < 2:
        return MeyerReport(True, math.inf, ds.size)
    tree = _tree(ds)
    d, _ = tree.query(ds.points.astype(np.float64), k=2)
    min_gap = float(d[:, 1].min())
    return MeyerReport(min_gap > GAP_THRESHOLD, min_gap, ds.size)


def patch_defect(sample: PointSample, x, y, R: float,
                 candidate_radius: float = None, min_candidates: int = 32):
    """Best-alignment defect between the patches at x and y.

    Searches translations v drawn from differences between points near
    y and points near x, and reports min_v #(P_x symdiff (P_y - v)) /
    Vol(B_R) together with the minimizing v (lexicographic tie-break).
    The value is an upper bound on the true alignment defect; empty
    patches use the convention symdiff = size of the other patch.
    """
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    n = sample.dimension
    if len(x) != n or len(y) != n:
        raise ValueError("center dimension mismatch")
    for c in (x, y):
        if np.linalg.norm(c) + R > sample.region_radius + 1e-9:
            raise ValueError("patch ball leaves the sampled region")
    vol = unit_ball_volume(n) * R ** n
    tree = _tree(sample)
    fpts = sample.points.astype(np.float64)
    ix = tree.query_ball_point(x, R + 1e-9)
    iy = tree.query_ball_point(y, R + 1e-9)
    Px, Py = fpts[ix], fpts[iy]
    zero = np.zeros(n)
    if len(Px) == 0 and len(Py) == 0:
        return zero, 0.0
    if len(Px) == 0 or len(Py) == 0:
        return zero, max(len(Px), len(Py)) / vol
    if candidate_radius is None:
        mean_spacing = (vol / max(len(Px), len(Py))) ** (1.0 / n)
        rc = max(2.0 * mean_spacing, 1.0)
    else:
        rc = float(candidate_radius)
    while True:
        ax = fpts[tree.query_ball_point(x, rc)]
        ay = fpts[tree.query_ball_point(y, rc)]
        cands = None
        if len(ax) and len(ay):
            cands = (ay[:, None, :] - ax[None, :, :]).reshape(-1, n)
            cands = dedupe_points(cands)
        if candidate_radius is not None:
            break
        if cands is not None and len(cands) >= min_candidates:
            break
        if rc >= R:
            break
        rc = min(2.0 * rc, R)
    if cands is None or len(cands) == 0:
        cands = zero.reshape(1, n)
    px_tree = cKDTree(Px)
    best_defect, best_v = None, None
    for v in cands:
        shifted = Py - v
        d, _ = px_tree.query(shifted, k=1)
        matches = int((d <= MERGE_TOL).sum())
        defect = (len(Px) + len(Py) - 2 * matches) / vol
        key = (defect, tuple(v))
        if best_defect is None or key < (best_defect, tuple(best_v)):
            best_defect, best_v = defect, v
    return best_v, float(best_defect)


def write_point_file(sample: PointSample, path: str) -> None:
    """Text interchange: 'dim n', 'region R', one point per line."""
    with open(path, "w") as fh:
        fh.write(f"dim {sample.dimension}\n")
        fh.write(f"region {sample.region_radius!r}\n")
        for row in sample.points:
            fh.write(" ".join(repr(v) for v in row.tolist()) + "\n")


def read_point_file(path: str) -> PointSample:
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if len(lines) < 2 or not lines[0].startswith("dim ") or not lines[1].startswith("region "):
        raise ValueError(f"{path}: expected 'dim <n>' and 'region <R>' header lines")
    dim = int(lines[0].split()[1])
    region = float(lines[1].split()[1])
    rows = []
    for ln in lines[2:]:
        vals = ln.split()
        if len(vals) != dim:
            raise ValueError(f"{path}: point line {ln!r} does not have {dim} coordinates")
        rows.append([float(v) for v in vals])
    pts = np.array(rows, dtype=np.float64).reshape(-1, dim)
    return PointSample(dimension=dim, points=pts, region_radius=region)
