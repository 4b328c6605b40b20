"""Centrally symmetric convex bodies: membership, volume, scaling.

Three body families are supported: Euclidean balls, intersections of
symmetric slabs |L_i . x| <= A_i, and symmetric polygons in the plane.
All bodies are closed (boundary points belong to the body). Membership
uses exact rational arithmetic whenever every defining datum and every
query coordinate is rational (int or Fraction); otherwise floating
point with an absolute tolerance of 1e-9 on each defining inequality.
"""

import math
import numbers
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

HALFSPACE_TOL = 1e-9


def unit_ball_volume(n: int):
    """Volume of the Euclidean unit ball in dimension n.

    Uses the two-step recurrence mu_n = 2 pi mu_{n-2} / n with mu_1 = 2
    and mu_2 = pi. The n = 1 value is returned as an exact integer so
    that interval volumes stay rational for rational radii.
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError(f"dimension must be a positive integer, got {n!r}")
    if n == 1:
        return 2
    if n == 2:
        return math.pi
    return 2.0 * math.pi * unit_ball_volume(n - 2) / n


def _is_rational(x) -> bool:
    return isinstance(x, numbers.Rational)


def _coords(x):
    """Flatten a point (sequence or 0/1-d array) into a list of scalars."""
    if isinstance(x, np.ndarray):
        x = x.tolist()
    if isinstance(x, (int, float, Fraction, np.integer, np.floating)):
        return [x]
    return list(x)


def _exact(values) -> bool:
    return all(_is_rational(v) for v in values)


def _frac(x) -> Fraction:
    if isinstance(x, np.integer):
        return Fraction(int(x))
    return Fraction(x)


def _det(rows):
    """Determinant by Laplace expansion; exact when entries are rational."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = None
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * _det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total


class ConvexBody:
    """Base class; concrete bodies implement the contract below."""

    dimension: int

    def contains(self, x) -> bool:
        raise NotImplementedError

    def contains_many(self, pts: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def volume(self):
        raise NotImplementedError

    def scale(self, t) -> "ConvexBody":
        raise NotImplementedError

    def circumradius(self) -> float:
        raise NotImplementedError

    def is_rational(self) -> bool:
        raise NotImplementedError

    def _check_dim(self, xs):
        if len(xs) != self.dimension:
            raise ValueError(
                f"point has dimension {len(xs)}, body has dimension {self.dimension}"
            )


@dataclass(frozen=True)
class Ball(ConvexBody):
    """Closed Euclidean ball of given radius centered at the origin."""

    radius: object
    dimension: int = 2

    def __post_init__(self):
        if not (float(self.radius) > 0):
            raise ValueError(f"radius must be positive, got {self.radius!r}")
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")

    def is_rational(self) -> bool:
        return _is_rational(self.radius)

    def contains(self, x) -> bool:
        xs = _coords(x)
        self._check_dim(xs)
        if self.is_rational() and _exact(xs):
            r = _frac(self.radius)
            return sum(_frac(c) * _frac(c) for c in xs) <= r * r
        s = math.sqrt(sum(float(c) ** 2 for c in xs))
        return s <= float(self.radius) + HALFSPACE_TOL

    def contains_many(self, pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        r = float(self.radius) + HALFSPACE_TOL
        return (pts * pts).sum(axis=1) <= r * r

    def volume(self):
        return unit_ball_volume(self.dimension) * self.radius ** self.dimension

    def scale(self, t) -> "Ball":
        return Ball(self.radius * t, self.dimension)

    def circumradius(self) -> float:
        return float(self.radius)

    def __str__(self):
        return f"ball:r={self.radius}"


@dataclass(frozen=True, eq=False)
class SlabIntersection(ConvexBody):
    """Intersection of symmetric slabs {x : |L_i . x| <= A_i}.

    `forms` is a tuple of n linear forms on R^n (rows); the form matrix
    must be invertible so the body is bounded.
    """

    forms: tuple
    bounds: tuple

    def __post_init__(self):
        forms = tuple(tuple(row) for row in self.forms)
        object.__setattr__(self, "forms", forms)
        object.__setattr__(self, "bounds", tuple(self.bounds))
        n = len(forms)
        if n == 0 or any(len(row) != n for row in forms):
            raise ValueError("need n forms of length n for a bounded slab body")
        if len(self.bounds) != n:
            raise ValueError("one bound per form required")
        if any(not (float(a) > 0) for a in self.bounds):
            raise ValueError("slab bounds must be positive")
        if abs(float(self._det())) < 1e-12:
            raise ValueError("form matrix is singular; slab body unbounded")

    @property
    def dimension(self) -> int:
        return len(self.forms)

    def _det(self):
        return _det([list(r) for r in self.forms])

    def is_rational(self) -> bool:
        return _exact([v for row in self.forms for v in row]) and _exact(self.bounds)

    def contains(self, x) -> bool:
        xs = _coords(x)
        self._check_dim(xs)
        if self.is_rational() and _exact(xs):
            for row, a in zip(self.forms, self.bounds):
                val = sum(_frac(l) * _frac(c) for l, c in zip(row, xs))
                if abs(val) > _frac(a):
                    return False
            return True
        for row, a in zip(self.forms, self.bounds):
            val = sum(float(l) * float(c) for l, c in zip(row, xs))
            if abs(val) > float(a) + HALFSPACE_TOL:
                return False
        return True

    def contains_many(self, pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        L = np.array([[float(v) for v in row] for row in self.forms])
        A = np.array([float(a) for a in self.bounds]) + HALFSPACE_TOL
        return (np.abs(pts @ L.T) <= A).all(axis=1)

    def volume(self):
        n = self.dimension
        prod = self.bounds[0]
        for a in self.bounds[1:]:
            prod = prod * a
        det = self._det()
        det = abs(det)
        return (2 ** n) * prod / det

    def scale(self, t) -> "SlabIntersection":
        return SlabIntersection(self.forms, tuple(a * t for a in self.bounds))

    def circumradius(self) -> float:
        # The body is the image of the box [-A, A]^n under the inverse
        # form matrix; the norm maximum over a polytope sits at a vertex.
        L = np.array([[float(v) for v in row] for row in self.forms])
        Linv = np.linalg.inv(L)
        A = np.array([float(a) for a in self.bounds])
        best = 0.0
        n = self.dimension
        for mask in range(1 << n):
            signs = np.array([1.0 if mask & (1 << i) else -1.0 for i in range(n)])
            v = Linv @ (signs * A)
            best = max(best, float(np.linalg.norm(v)))
        return best

    def __str__(self):
        lf = ";".join(",".join(str(v) for v in row) for row in self.forms)
        return f"slab:L={lf}:A={','.join(str(a) for a in self.bounds)}"


@dataclass(frozen=True, eq=False)
class SymmetricPolygon(ConvexBody):
    """Convex polygon in the plane, centrally symmetric about the origin.

    Vertices must be supplied in counterclockwise order; the vertex set
    must be closed under negation.
    """

    vertices: tuple

    dimension = 2

    def __post_init__(self):
        vs = tuple(tuple(v) for v in self.vertices)
        object.__setattr__(self, "vertices", vs)
        if len(vs) < 4 or len(vs) % 2:
            raise ValueError("a symmetric polygon needs an even number >= 4 of vertices")
        if any(len(v) != 2 for v in vs):
            raise ValueError("vertices must be planar")
        m = len(vs) // 2
        exact = self.is_rational()
        for i, (x, y) in enumerate(vs):
            ox, oy = vs[(i + m) % len(vs)]
            if exact:
                ok = (_frac(ox) == -_frac(x)) and (_frac(oy) == -_frac(y))
            else:
                ok = abs(float(ox) + float(x)) <= 1e-9 and abs(float(oy) + float(y)) <= 1e-9
            if not ok:
                raise ValueError("vertex set is not centrally symmetric")
        for i in range(len(vs)):
            x1, y1 = vs[i]
            x2, y2 = vs[(i + 1) % len(vs)]
            x3, y3 = vs[(i + 2) % len(vs)]
            cross = (float(x2) - float(x1)) * (float(y3) - float(y2)) - (
                float(y2) - float(y1)
            ) * (float(x3) - float(x2))
            if cross < -1e-12:
                raise ValueError("vertices are not convex in counterclockwise order")
        if not (float(self.volume()) > 0):
            raise ValueError("polygon is degenerate")

    def is_rational(self) -> bool:
        return _exact([c for v in self.vertices for c in v])

    def contains(self, x) -> bool:
        xs = _coords(x)
        self._check_dim(xs)
        if self.is_rational() and _exact(xs):
            px, py = _frac(xs[0]), _frac(xs[1])
            for i in range(len(self.vertices)):
                x1, y1 = (_frac(c) for c in self.vertices[i])
                x2, y2 = (_frac(c) for c in self.vertices[(i + 1) % len(self.vertices)])
                if (x2 - x1) * (py - y1) - (y2 - y1) * (px - x1) < 0:
                    return False
            return True
        px, py = float(xs[0]), float(xs[1])
        for i in range(len(self.vertices)):
            x1, y1 = (float(c) for c in self.vertices[i])
            x2, y2 = (float(c) for c in self.vertices[(i + 1) % len(self.vertices)])
            elen = math.hypot(x2 - x1, y2 - y1)
            if (x2 - x1) * (py - y1) - (y2 - y1) * (px - x1) < -HALFSPACE_TOL * max(1.0, elen):
                return False
        return True

    def contains_many(self, pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        vs = np.array([[float(c) for c in v] for v in self.vertices])
        nxt = np.roll(vs, -1, axis=0)
        edge = nxt - vs
        elen = np.maximum(1.0, np.hypot(edge[:, 0], edge[:, 1]))
        ok = np.ones(len(pts), dtype=bool)
        for i in range(len(vs)):
            cross = edge[i, 0] * (pts[:, 1] - vs[i, 1]) - edge[i, 1] * (pts[:, 0] - vs[i, 0])
            ok &= cross >= -HALFSPACE_TOL * elen[i]
        return ok

    def volume(self):
        total = None
        vs = self.vertices
        if self.is_rational():
            vs = tuple((_frac(x), _frac(y)) for x, y in vs)
        for i in range(len(vs)):
            x1, y1 = vs[i]
            x2, y2 = vs[(i + 1) % len(vs)]
            term = x1 * y2 - x2 * y1
            total = term if total is None else total + term
        return total / 2

    def scale(self, t) -> "SymmetricPolygon":
        return SymmetricPolygon(tuple((x * t, y * t) for x, y in self.vertices))

    def circumradius(self) -> float:
        return max(math.hypot(float(x), float(y)) for x, y in self.vertices)

    def __str__(self):
        return "poly:" + ";".join(f"{x},{y}" for x, y in self.vertices)


def contains(body: ConvexBody, x) -> bool:
    return body.contains(x)


def volume(body: ConvexBody):
    return body.volume()


def scale(body: ConvexBody, t) -> ConvexBody:
    return body.scale(t)


def circumradius(body: ConvexBody) -> float:
    return body.circumradius()


def monte_carlo_volume(body: ConvexBody, samples: int = 200_000, seed: int = 0):
    """Estimate the body volume by uniform sampling in its bounding box.

    Returns (estimate, standard_error). Used as an independent oracle
    against the closed-form volumes.
    """
    n = body.dimension
    c = body.circumradius()
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-c, c, size=(samples, n))
    hits = body.contains_many(pts)
    p = hits.mean()
    box = (2.0 * c) ** n
    est = box * p
    se = box * math.sqrt(max(p * (1.0 - p), 1e-12) / samples)
    return est, se


def integer_points_in(body: ConvexBody) -> np.ndarray:
    """All points of Z^n inside the body, by exact enumeration.

    Candidates come from the circumscribed box; membership uses the
    body's own (exact where possible) containment test.
    """
    n = body.dimension
    h = int(math.floor(body.circumradius() + 1e-9)) + 1
    axes = [np.arange(-h, h + 1, dtype=np.int64)] * n
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)
    if body.is_rational():
        keep = [p for p in grid if body.contains(p)]
        out = np.array(keep, dtype=np.int64)
        return out.reshape(-1, n)
    mask = body.contains_many(grid.astype(float))
    return grid[mask]


def parse_body(text: str, default_dimension: int = 2) -> ConvexBody:
    """Parse the body grammar used by the command line.

    Forms: ``ball:r=2.5`` (dimension from context, default 2; use
    ``ball:r=2.5:n=1`` for other dimensions), ``slab:L=1,0;0,1:A=2,1``,
    ``poly:x1,y1;x2,y2;...``. Decimal literals parse exactly (Fraction).
    An explicit ``n=`` in the text overrides default_dimension.
    """
    text = text.strip()
    if ":" not in text:
        raise ValueError(f"cannot parse body {text!r}")
    kind, _, rest = text.partition(":")
    kind = kind.strip().lower()
    if kind == "ball":
        r = None
        n = default_dimension
        for part in rest.split(":"):
            key, _, val = part.partition("=")
            key = key.strip()
            if key == "r":
                r = Fraction(val)
            elif key == "n":
                n = int(val)
            else:
                raise ValueError(f"unknown ball parameter {key!r}")
        if r is None:
            raise ValueError("ball requires r=<radius>")
        return Ball(r, n)
    if kind == "slab":
        forms = None
        bounds = None
        for part in rest.split(":"):
            key, _, val = part.partition("=")
            key = key.strip()
            if key == "L":
                forms = tuple(
                    tuple(Fraction(v) for v in row.split(",")) for row in val.split(";")
                )
            elif key == "A":
                bounds = tuple(Fraction(v) for v in val.split(","))
            else:
                raise ValueError(f"unknown slab parameter {key!r}")
        if forms is None or bounds is None:
            raise ValueError("slab requires L=<rows> and A=<bounds>")
        return SlabIntersection(forms, bounds)
    if kind == "poly":
        verts = tuple(
            tuple(Fraction(v) for v in pair.split(",")) for pair in rest.split(";")
        )
        return SymmetricPolygon(verts)
    raise ValueError(f"unknown body kind {kind!r}")
