"""Frequency of difference vectors in a point sample.

The frequency of v in Gamma is the density of Gamma cap (Gamma - v)
relative to the density of Gamma; it is 1 at v = 0, supported on the
difference set, and symmetric under v -> -v. The estimator here is the
mean of the forward and backward one-sided ratio estimators over an
eroded ball, which keeps the symmetry exact and the values in [0, 1].
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.spatial import cKDTree

from .convex import unit_ball_volume
from .pointset import (DensityEstimate, PointSample, difference_set,
                       membership_mask)


@dataclass(frozen=True, eq=False)
class FrequencyTable:
    """Estimated difference frequencies rho(v) for |v| <= cutoff.

    entries maps coordinate tuples to frequencies (floats, or Fractions
    on the exact lattice path). sample_integral records at construction
    whether every sample coordinate was integral; integer-mode counting
    requires it.
    """

    dimension: int
    entries: dict
    density: DensityEstimate
    cutoff: float
    erosion_margin: float
    source_label: str = ""
    sample_integral: bool = False

    def __post_init__(self):
        has_zero = False
        for key, rho in self.entries.items():
            if len(key) != self.dimension:
                raise ValueError(f"entry {key} has wrong dimension")
            if not (0 <= float(rho) <= 1 + 1e-12):
                raise ValueError(f"frequency {rho} for {key} outside [0, 1]")
            if all(float(c) == 0.0 for c in key):
                has_zero = True
        if not has_zero:
            raise ValueError("table must contain the zero vector")

    def sorted_entries(self):
        return sorted(self.entries.items())

    def rho(self, v) -> float:
        key = tuple(np.asarray(v).reshape(-1).tolist())
        if key in self.entries:
            return self.entries[key]
        return 0.0


@dataclass(frozen=True)
class MeanFrequencyResult:
    value: float
    max_deviation: float
    per_center: tuple


def _eroded_indices(sample: PointSample, R: float) -> np.ndarray:
    pts = sample.points.astype(np.float64)
    return np.nonzero((pts ** 2).sum(axis=1) <= (R + 1e-9) ** 2)[0]


def difference_frequency(sample: PointSample, v, R: float) -> float:
    """Symmetrized ratio estimate of the frequency of difference v.

    Counts x in Gamma cap B(0,R) with x+v in the sample, and likewise
    x-v, normalized by twice the eroded-ball count. Requires
    R + |v| <= region_radius so both translates stay inside the sample.
    """
    v = np.asarray(v)
    if v.ndim == 0:
        v = v.reshape(1)
    if len(v) != sample.dimension:
        raise ValueError("difference vector dimension mismatch")
    if R + float(np.linalg.norm(v.astype(np.float64))) > sample.region_radius + 1e-9:
        raise ValueError(
            f"need R + |v| <= region_radius, got {R} + {np.linalg.norm(v):.6g} "
            f"> {sample.region_radius}"
        )
    idx = _eroded_indices(sample, R)
    if len(idx) == 0:
        raise ValueError("eroded ball contains no sample points")
    base = sample.points[idx]
    if sample.is_integral() and np.issubdtype(np.asarray(v).dtype, np.integer):
        fwd = int(membership_mask(sample, base + v).sum())
        bwd = int(membership_mask(sample, base - v).sum())
    else:
        fwd = int(membership_mask(sample, base.astype(np.float64) + v.astype(np.float64)).sum())
        bwd = int(membership_mask(sample, base.astype(np.float64) - v.astype(np.float64)).sum())
    return (fwd + bwd) / (2.0 * len(idx))


def density_trace(sample: PointSample, R: float, steps: int = 4) -> DensityEstimate:
    """Centered density estimates on a growing radius schedule up to R."""
    radii = [R * (i + 1) / steps for i in range(steps)]
    vol_n = unit_ball_volume(sample.dimension)
    pts = sample.points.astype(np.float64)
    norms2 = (pts ** 2).sum(axis=1)
    trace = []
    for r in radii:
        count = int((norms2 <= (r + 1e-9) ** 2).sum())
        trace.append((float(r), count / (vol_n * r ** sample.dimension)))
    return DensityEstimate(
        value=trace[-1][1],
        radius_used=float(R),
        erosion_margin=float(sample.region_radius - R),
        center_count=1,
        sup_over_centers=False,
        trace=tuple(trace),
    )


def frequency_table(sample: PointSample, cutoff: float, R: float,
                    label: str = "") -> FrequencyTable:
    """Frequencies of every realized difference within the cutoff.

    The support is difference_set(sample, cutoff); the density estimate
    shares the eroded ball B(0, R) with the ratio denominators.
    """
    if R + cutoff > sample.region_radius + 1e-9:
        raise ValueError(
            f"need R + cutoff <= region_radius ({R} + {cutoff} > {sample.region_radius})"
        )
    support = difference_set(sample, cutoff)
    idx = _eroded_indices(sample, R)
    if len(idx) == 0:
        raise ValueError("eroded ball contains no sample points")
    base = sample.points[idx]
    entries = {}
    if sample.is_integral():
        vs = support.points.astype(np.int64)
        span = int(max(np.abs(sample.points).max(initial=0),
                       np.abs(base).max(initial=0) + np.abs(vs).max(initial=0))) + 2
        basekeys = np.sort(_int_keys_local(sample.points, span))
        for v in vs:
            fwd = _count_members(basekeys, _int_keys_local(base + v, span))
            bwd = _count_members(basekeys, _int_keys_local(base - v, span))
            entries[tuple(v.tolist())] = (fwd + bwd) / (2.0 * len(base))
    else:
        tree = cKDTree(sample.points.astype(np.float64))
        basef = base.astype(np.float64)
        for v in support.points.astype(np.float64):
            dfwd, _ = tree.query(basef + v, k=1)
            dbwd, _ = tree.query(basef - v, k=1)
            fwd = int((dfwd <= 1e-9).sum())
            bwd = int((dbwd <= 1e-9).sum())
            entries[tuple(v.tolist())] = (fwd + bwd) / (2.0 * len(base))
    dens = density_trace(sample, R)
    return FrequencyTable(
        dimension=sample.dimension,
        entries=entries,
        density=dens,
        cutoff=float(cutoff),
        erosion_margin=float(sample.region_radius - R - cutoff),
        source_label=label or sample.label,
        sample_integral=sample.is_integral(),
    )


def _int_keys_local(pts: np.ndarray, span: int) -> np.ndarray:
    base = np.int64(2 * span + 1)
    keys = np.zeros(len(pts), dtype=np.int64)
    for j in range(pts.shape[1]):
        keys = keys * base + (pts[:, j].astype(np.int64) + span)
    return keys


def _count_members(sorted_keys: np.ndarray, queries: np.ndarray) -> int:
    idx = np.searchsorted(sorted_keys, queries)
    idx = np.minimum(idx, len(sorted_keys) - 1)
    return int((sorted_keys[idx] == queries).sum())


def lattice_frequency_table(basis, cutoff: float) -> FrequencyTable:
    """Exact table for a full lattice: rho = 1 on lattice points.

    The periodic fast path: frequencies and density on one fundamental
    domain, as Fractions when the basis is integral so downstream
    margins are exact.
    """
    from .modelset import lattice_sample

    sample = lattice_sample(basis, cutoff)
    B = np.asarray(basis, dtype=np.float64)
    integral = bool(np.all(B == np.round(B)))
    det = abs(np.linalg.det(B))
    if integral:
        deti = abs(int(round(np.linalg.det(np.round(B).astype(np.int64).astype(np.float64)))))
        dens_value = Fraction(1, deti)
        one = Fraction(1)
    else:
        dens_value = 1.0 / det
        one = 1.0
    entries = {tuple(p.tolist()): one for p in sample.points}
    dens = DensityEstimate(
        value=dens_value,
        radius_used=float(cutoff),
        erosion_margin=0.0,
        center_count=1,
        sup_over_centers=False,
        trace=(),
    )
    return FrequencyTable(
        dimension=sample.dimension,
        entries=entries,
        density=dens,
        cutoff=float(cutoff),
        erosion_margin=0.0,
        source_label="lattice",
        sample_integral=integral,
    )


def mean_frequency(table: FrequencyTable, ball_radius: float, centers) -> MeanFrequencyResult:
    """Ball averages of the frequency table around the given centers.

    Each center's value is sum of rho over table entries in B(c, r)
    divided by Vol(B_r); for weakly almost periodic sets these averages
    approximate the density. Centers must keep the ball inside the
    table's cutoff region.
    """
    centers = np.atleast_2d(np.asarray(centers, dtype=np.float64))
    if centers.shape[1] != table.dimension:
        raise ValueError("center dimension mismatch")
    vol = unit_ball_volume(table.dimension) * ball_radius ** table.dimension
    keys = np.array(sorted(table.entries), dtype=np.float64).reshape(-1, table.dimension)
    vals = np.array([float(table.entries[tuple(k)]) for k in
                     sorted(table.entries)], dtype=np.float64)
    per = []
    for c in centers:
        if np.linalg.norm(c) + ball_radius > table.cutoff + 1e-9:
            raise ValueError("averaging ball leaves the table cutoff region")
        mask = ((keys - c) ** 2).sum(axis=1) <= (ball_radius + 1e-9) ** 2
        per.append(float(vals[mask].sum()) / vol)
    value = float(np.mean(per))
    dev = float(max(abs(p - value) for p in per)) if per else 0.0
    return MeanFrequencyResult(value=value, max_deviation=dev, per_center=tuple(per))


def write_table_file(table: FrequencyTable, path: str) -> None:
    """Text interchange: dim/cutoff/density header then 'v... rho' lines
    sorted lexicographically."""
    with open(path, "w") as fh:
        fh.write(f"dim {table.dimension}\n")
        fh.write(f"cutoff {table.cutoff!r}\n")
        fh.write(f"density {float(table.density.value)!r}\n")
        for key, rho in sorted(table.entries.items()):
            coords = " ".join(repr(c) if isinstance(c, float) else str(c) for c in key)
            fh.write(f"{coords} {float(rho)!r}\n")


def read_table_file(path: str) -> FrequencyTable:
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if len(lines) < 3:
        raise ValueError(f"{path}: truncated table file")
    head = {}
    for ln in lines[:3]:
        k, _, v = ln.partition(" ")
        head[k] = v
    if set(head) != {"dim", "cutoff", "density"}:
        raise ValueError(f"{path}: expected dim/cutoff/density header")
    dim = int(head["dim"])
    entries = {}
    integral = True
    for ln in lines[3:]:
        vals = ln.split()
        if len(vals) != dim + 1:
            raise ValueError(f"{path}: bad entry line {ln!r}")
        coords = []
        for t in vals[:-1]:
            f = float(t)
            coords.append(int(f) if float(f).is_integer() and "." not in t else f)
            if not float(f).is_integer() or "." in t:
                integral = False
        entries[tuple(coords)] = float(vals[-1])
    dens = DensityEstimate(
        value=float(head["density"]),
        radius_used=float(head["cutoff"]),
        erosion_margin=0.0,
        center_count=1,
        sup_over_centers=False,
        trace=(),
    )
    return FrequencyTable(
        dimension=dim,
        entries=entries,
        density=dens,
        cutoff=float(head["cutoff"]),
        erosion_margin=0.0,
        source_label=path,
        sample_integral=integral,
    )
