"""Counting inequalities for symmetric convex bodies against point sets.

Three checks live here: the classical lattice point-count bound, the
frequency-sum inequality sum_{u in S} rho(u) >= density * Vol(S/2) for
general samples, and its integer-mode variant with Vol(S/2) replaced by
#(S/2 cap Z^n). A constructed lattice-plus-hexagon family realizes the
integer-mode bound with equality, exactly, in rational arithmetic.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .convex import ConvexBody, SymmetricPolygon, integer_points_in
from .frequency import FrequencyTable, lattice_frequency_table
from .modelset import lattice_sample
from .pointset import PointSample


@dataclass(frozen=True)
class ClassicalReport:
    count: int
    bound: int
    k_max: int
    passed: bool
    volume_half: float
    covolume: float


@dataclass(frozen=True)
class MinkowskiReport:
    lhs: object
    rhs: object
    margin: object
    passed: bool
    sampling_uncertainty: float
    mode: str

    def ratio(self):
        if float(self.rhs) > 0:
            return float(self.lhs) / float(self.rhs)
        return math.inf


def lattice_points_in(basis, body: ConvexBody) -> np.ndarray:
    """Exact enumeration of lattice points inside the body."""
    sample = lattice_sample(basis, body.circumradius() + 1e-9)
    pts = sample.points
    if len(pts) == 0:
        return pts
    if body.is_rational() and sample.is_integral():
        keep = np.array([body.contains(p) for p in pts], dtype=bool)
    else:
        keep = body.contains_many(pts.astype(np.float64))
    return pts[keep]


def classical_bound_check(basis, body: ConvexBody) -> ClassicalReport:
    """Point-count form of the classical convex body theorem.

    count is #(S cap Lambda \\ {0}); the theorem demands count >= 2k for
    every integer k with Vol(S/2) > k covol (closed bodies also carry
    the equality case). The summarized bound 2 ceil(D Vol(S/2)) - 1
    refers to the count including the origin.
    """
    B = np.asarray(basis, dtype=np.float64)
    n = B.shape[0]
    if body.dimension != n:
        raise ValueError("body and lattice dimension mismatch")
    covol = abs(float(np.linalg.det(B)))
    vol_half = float(body.scale(Fraction(1, 2)).volume())
    V = vol_half / covol
    k_max = max(0, math.ceil(V) - 1)
    bound = 2 * math.ceil(V) - 1
    inside = lattice_points_in(basis, body)
    count = len(inside) - 1  # the origin is always present
    passed = count >= 2 * k_max
    return ClassicalReport(
        count=count,
        bound=bound,
        k_max=k_max,
        passed=passed,
        volume_half=vol_half,
        covolume=covol,
    )


def _support_sum(table: FrequencyTable, body: ConvexBody):
    """Sum of table frequencies over entries inside the body."""
    if body.circumradius() > table.cutoff + 1e-9:
        raise ValueError(
            f"body circumradius {body.circumradius():.6g} exceeds table cutoff "
            f"{table.cutoff:.6g}; rebuild the table with a larger cutoff"
        )
    total = None
    for key, rho in table.sorted_entries():
        if body.contains(key):
            total = rho if total is None else total + rho
    if total is None:
        total = 0 if table.sample_integral else 0.0
    return total


def verify_inequality(table: FrequencyTable, body: ConvexBody,
                      probe_factor2: bool = False) -> MinkowskiReport:
    """Frequency-sum inequality in continuous mode.

    lhs sums the table over S (support outside the difference set
    carries frequency 0); rhs is density * Vol(S/2). Sampling
    uncertainty scales the density-trace oscillation by Vol(S/2); exact
    lattice tables have uncertainty 0 and exact margins.
    """
    if body.dimension != table.dimension:
        raise ValueError("body and table dimension mismatch")
    lhs = _support_sum(table, body)
    vol_half = body.scale(Fraction(1, 2)).volume()
    rhs = table.density.value * vol_half
    margin = lhs - rhs
    s_u = table.density.uncertainty() * float(vol_half)
    report = MinkowskiReport(
        lhs=lhs,
        rhs=rhs,
        margin=margin,
        passed=bool(margin >= -s_u),
        sampling_uncertainty=s_u,
        mode="continuous",
    )
    return report


def verify_integer_inequality(table: FrequencyTable, body: ConvexBody) -> MinkowskiReport:
    """Frequency-sum inequality in integer mode.

    For samples inside Z^n the volume is replaced by the integer point
    count of S/2. Requires the table to certify sample integrality.
    """
    if body.dimension != table.dimension:
        raise ValueError("body and table dimension mismatch")
    if not table.sample_integral:
        raise ValueError("integer mode requires a table built from an integral sample")
    lhs = _support_sum(table, body)
    half = body.scale(Fraction(1, 2))
    half_count = len(integer_points_in(half))
    rhs = table.density.value * half_count
    margin = lhs - rhs
    s_u = table.density.uncertainty() * float(half_count)
    return MinkowskiReport(
        lhs=lhs,
        rhs=rhs,
        margin=margin,
        passed=bool(margin >= -s_u),
        sampling_uncertainty=s_u,
        mode="integer",
    )


def equality_hexagon(k: int) -> SymmetricPolygon:
    """Hexagon whose integer-mode inequality against kZ x Z is tight.

    Rational vertices (+-(k - 4/5), +-1/10), (+-(k - 4/5), +-6/5),
    (+-(2k + 3)/9, +-6/5), chosen so that S cap Z^2 is exactly the rows
    {(i, 0): |i| <= k-1} and {+-(i, 1): 1 <= i <= k-1}, S/2 cap Z^2 has
    exactly k points, and S meets kZ x Z only at the origin. All three
    facts are re-validated by exact enumeration before returning.
    """
    if k < 3 or k % 2 == 0:
        raise ValueError("k must be an odd integer >= 3")
    c = Fraction(k) - Fraction(4, 5)
    Y = Fraction(6, 5)
    e = Fraction(1, 10)
    f = Fraction(2 * k + 3, 9)
    hexagon = SymmetricPolygon((
        (-c, e), (-c, -Y), (-f, -Y), (c, -e), (c, Y), (f, Y),
    ))
    inside = {tuple(p) for p in integer_points_in(hexagon).tolist()}
    expected = {(i, 0) for i in range(-(k - 1), k)}
    expected |= {(i, 1) for i in range(1, k)} | {(-i, -1) for i in range(1, k)}
    if inside != expected:
        raise AssertionError(f"hexagon integer points wrong for k={k}")
    half_inside = {tuple(p) for p in integer_points_in(hexagon.scale(Fraction(1, 2))).tolist()}
    if half_inside != {(i, 0) for i in range(-(k - 1) // 2, (k - 1) // 2 + 1)}:
        raise AssertionError(f"half-hexagon integer points wrong for k={k}")
    lat = {tuple(p) for p in inside if p[0] % k == 0}
    if lat != {(0, 0)}:
        raise AssertionError(f"hexagon must meet kZ x Z only at the origin (k={k})")
    return hexagon


def equality_instance(k: int, sample_radius: float = None):
    """Lattice kZ x Z plus the matching hexagon; integer mode is tight.

    Returns (sample, body). The frequency sum over S is exactly 1, the
    density is exactly 1/k, and #(S/2 cap Z^2) = k, so lhs = rhs = 1.
    """
    body = equality_hexagon(k)
    R = sample_radius if sample_radius is not None else 3.0 * k + 10.0
    basis = np.array([[k, 0], [0, 1]], dtype=np.int64)
    sample = lattice_sample(basis, R, label=f"lattice({k}Z x Z)")
    return sample, body


def equality_report(k: int) -> MinkowskiReport:
    """Exact integer-mode report for the equality instance (margin 0)."""
    body = equality_hexagon(k)
    basis = np.array([[k, 0], [0, 1]], dtype=np.int64)
    table = lattice_frequency_table(basis, body.circumradius() + 1.0)
    return verify_integer_inequality(table, body)
