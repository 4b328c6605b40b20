"""Simultaneous approximation witnesses from difference frequencies.

For target slopes alpha_1..alpha_n and a parameter Q > 1, the slab body
{|x_i - alpha_i y| <= Q^(-1/n), |y| <= 2Q/D} has guaranteed frequency
mass >= 1 off the origin whenever the sample has uniform density D, so
a pair of sample points with difference in the slab always exists; any
such pair certifies |alpha_i - dx_i/dy| <= 2^(1/n) D^(-1/n) |dy|^(-1-1/n).
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .convex import SlabIntersection
from .frequency import FrequencyTable
from .minkowski import verify_inequality
from .pointset import PointSample


@dataclass(frozen=True, eq=False)
class ApproximationQuery:
    """Targets alpha (length n), quality Q, sample in R^(n+1), density.

    alpha entries may be Fractions (exact decimal text) or floats; the
    last sample coordinate is the denominator axis y.
    """

    alpha: tuple
    Q: object
    gamma: PointSample
    density: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(self.alpha))
        if float(self.Q) <= 1:
            raise ValueError("Q must exceed 1")
        if self.gamma.dimension != len(self.alpha) + 1:
            raise ValueError(
                f"sample dimension {self.gamma.dimension} != n+1 = {len(self.alpha) + 1}"
            )
        if not (self.density > 0):
            raise ValueError("density must be positive")

    @property
    def n(self) -> int:
        return len(self.alpha)

    def x_bound(self):
        if self.n == 1:
            if isinstance(self.Q, (int, Fraction)):
                return Fraction(1) / Fraction(self.Q)
            return 1.0 / float(self.Q)
        return float(self.Q) ** (-1.0 / self.n)

    def y_bound(self) -> float:
        return 2.0 * float(self.Q) / self.density


@dataclass(frozen=True)
class SlopeWitness:
    """Sample pair v, w whose difference u = v - w proves approximation
    quality; errors are |alpha_i - u_i/u_y| with their certified bounds."""

    v: tuple
    w: tuple
    u: tuple
    dy: object
    errors: tuple
    bounds: tuple
    q_form_bounds: tuple  # informational alternative bound, not asserted

    def __post_init__(self):
        if float(self.dy) == 0:
            raise ValueError("witness denominator must be nonzero")
        for e, b in zip(self.errors, self.bounds):
            if float(e) > float(b) + 1e-12:
                raise AssertionError(
                    f"witness error {e} violates its certified bound {b}"
                )


class WitnessNotFound(ValueError):
    pass


def slab_body(query: ApproximationQuery) -> SlabIntersection:
    """Approximation slab: forms x_i - alpha_i y (unit determinant) and y."""
    n = query.n
    forms = []
    for i in range(n):
        row = [0] * (n + 1)
        row[i] = 1
        row[n] = -query.alpha[i]
        forms.append(tuple(row))
    last = [0] * (n + 1)
    last[n] = 1
    forms.append(tuple(last))
    bounds = tuple([query.x_bound()] * n + [query.y_bound()])
    return SlabIntersection(tuple(forms), bounds)


@dataclass(frozen=True)
class MassReport:
    empirical_sum: float
    theoretical_floor: float
    rhs: float
    sampling_uncertainty: float
    passed: bool


def guaranteed_mass(query: ApproximationQuery, table: FrequencyTable) -> MassReport:
    """Frequency mass of the slab, origin removed, against its floor.

    The floor is density * prod(bounds) * 2^(n+1) / (2^(n+1) covol) - 1
    = D * A_1...A_{n+1} - 1 = 1 for the canonical bounds.
    """
    body = slab_body(query)
    report = verify_inequality(table, body)
    rho0 = float(table.rho((0,) * table.dimension))
    empirical = float(report.lhs) - rho0
    floor = query.density * float(query.x_bound()) ** query.n * query.y_bound() - 1.0
    s_u = report.sampling_uncertainty
    return MassReport(
        empirical_sum=empirical,
        theoretical_floor=floor,
        rhs=float(report.rhs) - rho0,
        sampling_uncertainty=s_u,
        passed=empirical >= floor - 3.0 * s_u,
    )


def _witness_bounds(query: ApproximationQuery, dy):
    n = query.n
    contract = tuple(
        2.0 ** (1.0 / n) * query.density ** (-1.0 / n) * abs(float(dy)) ** (-1.0 - 1.0 / n)
        for _ in range(n)
    )
    q_form = tuple(
        query.density * 2.0 ** (1.0 / n) / (4.0 * float(query.Q)) ** (1.0 + 1.0 / n)
        for _ in range(n)
    )
    return contract, q_form


def find_witness(query: ApproximationQuery) -> SlopeWitness:
    """First admissible pair by ascending |dy|, then lexicographic u, w.

    Scans realized y-differences shell by shell; inside a shell the
    x-coordinates of the two y-groups are matched with a two-pointer
    sweep against the slab's x-window. Membership is re-decided in exact
    rational arithmetic when alpha and Q are rational and the sample is
    integral.
    """
    sample = query.gamma
    n = query.n
    if n != 1:
        raise NotImplementedError("witness scan implemented for one slope (n = 1)")
    y_extent = 2.0 * sample.region_radius
    if y_extent + 1e-9 < query.y_bound():
        raise ValueError(
            f"sample extent {y_extent:.6g} cannot contain the denominator range "
            f"{query.y_bound():.6g}; enlarge the sample"
        )
    pts = sample.points
    xs = pts[:, 0].astype(np.float64)
    ys = pts[:, 1].astype(np.float64)
    order = np.lexsort((xs, ys))
    xs, ys = xs[order], ys[order]
    ykeys = np.round(ys, 9)
    uniq_y, starts = np.unique(ykeys, return_index=True)
    ends = np.append(starts[1:], len(ys))
    groups = {float(y): (int(s), int(e)) for y, s, e in zip(uniq_y, starts, ends)}
    alpha = query.alpha[0]
    alpha_f = float(alpha)
    A1 = query.x_bound()
    A1f = float(A1)
    ymax = query.y_bound()
    exact = (
        isinstance(alpha, (int, Fraction))
        and isinstance(A1, (int, Fraction))
        and sample.is_integral()
    )
    dys = []
    for i in range(len(uniq_y)):
        d = uniq_y[i + 1:] - uniq_y[i]
        d = d[(d > 1e-12) & (d <= ymax + 1e-9)]
        dys.extend(np.round(d, 9).tolist())
    shells = np.unique(np.asarray(dys, dtype=np.float64))
    for dy in shells:
        best = None
        for ylow in uniq_y:
            key = round(float(ylow + dy), 9)
            if key not in groups:
                continue
            s0, e0 = groups[float(ylow)]
            s1, e1 = groups[key]
            x0 = xs[s0:e0]
            x1 = xs[s1:e1]
            lo_idx = np.searchsorted(x1, x0 + (alpha_f * dy - A1f - 1e-9), side="left")
            hi_idx = np.searchsorted(x1, x0 + (alpha_f * dy + A1f + 1e-9), side="right")
            for i0 in np.nonzero(lo_idx < hi_idx)[0]:
                for j in range(lo_idx[i0], hi_idx[i0]):
                    ux = float(x1[j] - x0[i0])
                    if exact:
                        val = Fraction(int(round(ux))) - Fraction(alpha) * Fraction(int(round(dy)))
                        ok = abs(val) <= Fraction(A1)
                    else:
                        ok = abs(ux - alpha_f * dy) <= A1f + 1e-9
                    if not ok:
                        continue
                    w = (float(x0[i0]), float(ylow))
                    v = (float(x1[j]), float(ylow) + float(dy))
                    cand = ((ux, float(dy)), w, v)
                    if best is None or cand < best:
                        best = cand
        if best is not None:
            (uxv, dyv), w, v = best
            if exact:
                err = abs(Fraction(alpha) - Fraction(int(round(uxv)), int(round(dyv))))
            else:
                err = abs(alpha_f - uxv / dyv)
            contract, q_form = _witness_bounds(query, dyv)
            return SlopeWitness(
                v=v, w=w, u=(uxv, dyv), dy=dyv,
                errors=(err,), bounds=contract, q_form_bounds=q_form,
            )
    raise WitnessNotFound(
        f"no admissible pair with |dy| <= {ymax:.6g} in the sample; "
        "the guaranteed mass argument requires a denser or larger sample"
    )
