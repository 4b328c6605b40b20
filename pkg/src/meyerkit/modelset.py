"""Cut-and-project generation of Meyer-type point sets.

A scheme holds a full-rank lattice in R^(m+n) (columns of `basis`) and
a bounded window in the first m coordinates; generation keeps the last
n coordinates of every lattice vector whose first m coordinates fall
in the window.
"""

import math
from dataclasses import dataclass

import numpy as np

from .pointset import PointSample


@dataclass(frozen=True, eq=False)
class Box:
    """Half-open axis box prod [lo_i, hi_i), the default window type."""

    lo: tuple
    hi: tuple

    def __post_init__(self):
        lo = tuple(float(v) for v in self.lo)
        hi = tuple(float(v) for v in self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if len(lo) != len(hi) or not lo:
            raise ValueError("window bounds must be nonempty and of equal length")
        if any(h <= l for l, h in zip(lo, hi)):
            raise ValueError("window must have positive volume")

    @property
    def dimension(self) -> int:
        return len(self.lo)

    def volume(self) -> float:
        v = 1.0
        for l, h in zip(self.lo, self.hi):
            v *= h - l
        return v

    def circumradius(self) -> float:
        return math.sqrt(sum(max(abs(l), abs(h)) ** 2 for l, h in zip(self.lo, self.hi)))

    def contains_many(self, pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, dtype=np.float64)
        lo = np.array(self.lo)
        hi = np.array(self.hi)
        return ((pts >= lo) & (pts < hi)).all(axis=1)


@dataclass(frozen=True, eq=False)
class CutAndProjectScheme:
    internal_dim: int
    physical_dim: int
    basis: np.ndarray
    window: object  # Box or ConvexBody

    def __post_init__(self):
        B = np.asarray(self.basis, dtype=np.float64)
        d = self.internal_dim + self.physical_dim
        if B.shape != (d, d):
            raise ValueError(f"basis must be {d}x{d}, got {B.shape}")
        if abs(np.linalg.det(B)) < 1e-12:
            raise ValueError("basis is singular")
        object.__setattr__(self, "basis", B)
        if self.window.dimension != self.internal_dim:
            raise ValueError("window dimension must equal the internal dimension")

    def covolume(self) -> float:
        return abs(float(np.linalg.det(self.basis)))

    def window_volume(self) -> float:
        return float(self.window.volume())

    def window_circumradius(self) -> float:
        return float(self.window.circumradius())

    def window_mask(self, pts: np.ndarray) -> np.ndarray:
        return self.window.contains_many(pts)


def _opnorm_inf(M: np.ndarray) -> float:
    return float(np.abs(M).sum(axis=1).max())


def _coeff_grid_blocks(half_widths, block: int = 200_000):
    """Yield integer coefficient blocks covering the box prod [-h_i, h_i]."""
    axes = [np.arange(-h, h + 1, dtype=np.int64) for h in half_widths]
    n = len(axes)
    if n == 1:
        a = axes[0]
        for i in range(0, len(a), block):
            yield a[i:i + block].reshape(-1, 1)
        return
    tail = axes[1:]
    tail_grid = np.stack(np.meshgrid(*tail, indexing="ij"), axis=-1).reshape(-1, n - 1)
    rows_per = max(1, block // max(1, len(tail_grid)))
    a0 = axes[0]
    for i in range(0, len(a0), rows_per):
        chunk = a0[i:i + rows_per]
        c0 = np.repeat(chunk, len(tail_grid)).reshape(-1, 1)
        ct = np.tile(tail_grid, (len(chunk), 1))
        yield np.concatenate([c0, ct], axis=1)


def lattice_sample(basis, R: float, label: str = "") -> PointSample:
    """All lattice points (integer combinations of basis columns) in B(0, R).

    Integer bases enumerate exactly in int64; the sample carries the
    basis as periodicity metadata.
    """
    B = np.asarray(basis, dtype=np.float64)
    n = B.shape[0]
    if B.shape != (n, n) or abs(np.linalg.det(B)) < 1e-12:
        raise ValueError("basis must be square and nonsingular")
    integral = bool(np.all(B == np.round(B)))
    h = int(math.ceil(_opnorm_inf(np.linalg.inv(B)) * R)) + 1
    if (2 * h + 1) ** n > 5e8:
        raise ValueError("enumeration box too large for this radius")
    out = []
    if integral:
        Bi = np.round(B).astype(np.int64)
        r2 = int(math.floor((R + 1e-12) ** 2)) if R == int(R) else (R + 1e-9) ** 2
        for coeffs in _coeff_grid_blocks([h] * n):
            pts = coeffs @ Bi.T
            mask = (pts.astype(np.float64) ** 2).sum(axis=1) <= r2
            if mask.any():
                out.append(pts[mask])
        pts = np.concatenate(out) if out else np.zeros((0, n), dtype=np.int64)
    else:
        for coeffs in _coeff_grid_blocks([h] * n):
            p = coeffs.astype(np.float64) @ B.T
            mask = (p ** 2).sum(axis=1) <= (R + 1e-9) ** 2
            if mask.any():
                out.append(p[mask])
        pts = np.concatenate(out) if out else np.zeros((0, n))
    order = np.lexsort(pts.T[::-1])
    return PointSample(
        dimension=n,
        points=pts[order],
        region_radius=float(R),
        label=label or "lattice",
        periods=B,
    )


def generate(scheme: CutAndProjectScheme, R: float, label: str = "") -> PointSample:
    """Model set points: physical parts of lattice vectors whose internal
    parts land in the window, restricted to B(0, R).

    Collision of two lattice vectors on the same physical point is an
    error (the projection must be injective on the strip); the offending
    pair of integer coefficient vectors is named in the message.
    """
    m, n = scheme.internal_dim, scheme.physical_dim
    d = m + n
    B = scheme.basis
    reach = R + scheme.window_circumradius()
    h = int(math.ceil(_opnorm_inf(np.linalg.inv(B)) * reach)) + 1
    if (2 * h + 1) ** d > 2e9:
        raise ValueError("enumeration box too large for this radius")
    phys_list, coeff_list = [], []
    for coeffs in _coeff_grid_blocks([h] * d):
        lam = coeffs.astype(np.float64) @ B.T
        internal = lam[:, :m]
        physical = lam[:, m:]
        mask = scheme.window_mask(internal)
        mask &= (physical ** 2).sum(axis=1) <= (R + 1e-9) ** 2
        if mask.any():
            phys_list.append(physical[mask])
            coeff_list.append(coeffs[mask])
    if phys_list:
        phys = np.concatenate(phys_list)
        coeff = np.concatenate(coeff_list)
    else:
        phys = np.zeros((0, n))
        coeff = np.zeros((0, d), dtype=np.int64)
    if len(phys) > 1:
        order = np.lexsort(phys.T[::-1])
        phys, coeff = phys[order], coeff[order]
        close = np.sqrt(((phys[1:] - phys[:-1]) ** 2).sum(axis=1)) <= 1e-9
        if close.any():
            i = int(np.argmax(close))
            raise ValueError(
                "physical projection collision: lattice coefficients "
                f"{coeff[i].tolist()} and {coeff[i + 1].tolist()} both map to "
                f"{phys[i].tolist()}"
            )
    return PointSample(
        dimension=n,
        points=phys,
        region_radius=float(R),
        label=label or "modelset",
    )


def expected_density(scheme: CutAndProjectScheme, verify_radii=None, rel_tol: float = 0.05) -> float:
    """Window volume over lattice covolume.

    With verify_radii, regenerates at each radius and insists the
    empirical density converges to the formula within rel_tol at the
    largest radius.
    """
    value = scheme.window_volume() / scheme.covolume()
    if verify_radii:
        from .convex import unit_ball_volume
        emp, R = None, None
        for R in sorted(verify_radii):
            sample = generate(scheme, R)
            emp = sample.size / (unit_ball_volume(scheme.physical_dim) * R ** scheme.physical_dim)
        if abs(emp - value) > rel_tol * value:
            raise ValueError(
                f"empirical density {emp:.6g} at R={R} disagrees with formula {value:.6g}"
            )
    return value


def e_alpha_scheme(alpha, eps: float) -> CutAndProjectScheme:
    """Cut-and-project scheme whose model set is e_alpha_epsilon(alpha, eps).

    Lattice in R^(n+1): columns are -e_1 ... -e_n (internal) and
    (alpha_1 ... alpha_n, 1); window is the half-open box [-eps, eps)^n.
    """
    alpha = np.atleast_1d(np.asarray(alpha, dtype=np.float64))
    n = len(alpha)
    B = np.zeros((n + 1, n + 1))
    B[:n, :n] = -np.eye(n)
    B[:n, n] = alpha
    B[n, n] = 1.0
    window = Box(lo=(-eps,) * n, hi=(eps,) * n)
    return CutAndProjectScheme(internal_dim=n, physical_dim=1, basis=B, window=window)


def e_alpha_epsilon(alpha, eps: float, Y: int, label: str = "") -> PointSample:
    """Integers y with |y| <= Y whose multiples y*alpha_i all sit within
    eps of an integer (distance strictly below eps).

    Direct evaluation; equals the cut-and-project generation for the
    e_alpha_scheme lattice on the shared range.
    """
    alpha = np.atleast_1d(np.asarray(alpha, dtype=np.float64))
    if not (0 < eps < 0.5):
        raise ValueError("eps must lie in (0, 1/2) so the window misses integer translates")
    Y = int(Y)
    if Y < 1:
        raise ValueError("Y must be a positive integer")
    ys = np.arange(-Y, Y + 1, dtype=np.int64)
    frac = np.mod(ys[:, None].astype(np.float64) * alpha[None, :], 1.0)
    dist = np.minimum(frac, 1.0 - frac)
    mask = (dist < eps).all(axis=1)
    pts = ys[mask].reshape(-1, 1)
    return PointSample(
        dimension=1,
        points=pts,
        region_radius=float(Y),
        label=label or f"ealpha(eps={eps})",
    )


def jittered_lattice_sample(seed: int, extent: float, amplitude: float = 0.3,
                            dimension: int = 1) -> PointSample:
    """Integer lattice points jittered by iid uniform noise, a generic
    non-Meyer perturbed set used as a negative control."""
    rng = np.random.default_rng(seed)
    k = int(math.floor(extent))
    if dimension == 1:
        base = np.arange(-k, k + 1, dtype=np.float64).reshape(-1, 1)
    else:
        ax = np.arange(-k, k + 1, dtype=np.float64)
        base = np.stack(np.meshgrid(*([ax] * dimension), indexing="ij"), axis=-1).reshape(-1, dimension)
        base = base[(base ** 2).sum(axis=1) <= extent * extent]
    pts = base + rng.uniform(-amplitude, amplitude, size=base.shape)
    return PointSample(
        dimension=dimension,
        points=pts,
        region_radius=float(extent + amplitude + 0.5),
        label=f"jittered(seed={seed})",
    )
