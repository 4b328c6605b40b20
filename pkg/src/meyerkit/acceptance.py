"""Batch verification suite.

Eleven numbered checks with frozen parameters and seeds. Each check
returns (passed, details); run_one and run_all wrap them with names and
wall-clock timing. The test suite and the `accept` subcommand both
drive this module, so the checks must stay deterministic.
"""

import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import convex, discretize, frequency, minkowski, modelset, pointset
from .dirichlet import ApproximationQuery, find_witness

SQRT2M1 = math.sqrt(2.0) - 1.0
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class CriterionResult:
    index: int
    name: str
    passed: bool
    details: str
    elapsed: float


def criterion_1():
    """Tight periodic instance: exact equality in integer mode."""
    notes = []
    ok = True
    for k in (3, 5, 7):
        rep = minkowski.equality_report(k)
        exact = isinstance(rep.margin, Fraction)
        good = (rep.mode == "integer" and rep.lhs == 1 and rep.rhs == 1
                and rep.margin == 0 and exact and rep.passed)
        ok = ok and good
        notes.append(f"k={k} lhs={rep.lhs} rhs={rep.rhs} margin={rep.margin} exact={exact}")
    return ok, "; ".join(notes)


def criterion_2():
    """Classical lattice point bound over seeded random instances."""
    rng = np.random.default_rng(20240)
    failures = 0
    min_slack = None
    for _ in range(200):
        target = rng.uniform(0.5, 5.0)
        while True:
            B = rng.uniform(-1.5, 1.5, size=(2, 2))
            d = abs(float(np.linalg.det(B)))
            if d > 0.2:
                B = B * math.sqrt(target / d)
                if np.abs(np.linalg.inv(B)).sum(axis=1).max() <= 8.0:
                    break
        if rng.uniform() < 0.5:
            body = convex.Ball(float(rng.uniform(0.5, 4.0)), 2)
        else:
            while True:
                L = rng.uniform(-1.5, 1.5, size=(2, 2))
                if abs(float(np.linalg.det(L))) > 0.5:
                    break
            A = rng.uniform(0.5, 2.0, size=2)
            body = convex.SlabIntersection(
                tuple(tuple(float(v) for v in row) for row in L),
                tuple(float(a) for a in A),
            )
            if body.circumradius() > 12.0:
                body = convex.Ball(float(rng.uniform(0.5, 4.0)), 2)
        rep = minkowski.classical_bound_check(B, body)
        slack = rep.count + 1 - rep.bound
        if min_slack is None or slack < min_slack:
            min_slack = slack
        if not (rep.passed and rep.count + 1 >= rep.bound):
            failures += 1
    return failures == 0, f"trials=200 failures={failures} min_slack={min_slack}"


def criterion_3():
    """Frequency mass bound across Diophantine point sets and intervals."""
    Y = 100_000
    cutoff = 101.0
    rows = []
    ok = True
    for aname, alpha in (("sqrt2m1", SQRT2M1), ("golden", GOLDEN)):
        for eps in (0.05, 0.1, 0.2):
            sample = modelset.e_alpha_epsilon(alpha, eps, Y)
            table = frequency.frequency_table(sample, cutoff, Y - 102.0)
            for d in (5, 20, 100):
                body = convex.Ball(float(d), 1)
                rep = minkowski.verify_inequality(table, body, probe_factor2=True)
                cell = float(rep.lhs) >= float(rep.rhs) - 3.0 * rep.sampling_uncertainty
                ok = ok and cell
                rows.append(
                    f"{aname},eps={eps},d={d}:ratio={rep.ratio():.3f},ok={cell}"
                )
    return ok, " ".join(rows)


def criterion_4():
    """Diophantine set density equals twice the window half-width."""
    Y = 100_000
    ok = True
    rows = []
    for aname, alpha in (("sqrt2m1", SQRT2M1), ("golden", GOLDEN)):
        for eps in (0.05, 0.1, 0.2):
            sample = modelset.e_alpha_epsilon(alpha, eps, Y)
            est = pointset.density_at(sample, Y - 1.0, [(0.0,)])
            rel = abs(est.value - 2.0 * eps) / (2.0 * eps)
            ok = ok and rel <= 0.02
            rows.append(f"{aname},eps={eps}:density={est.value:.6f},rel={rel:.5f}")
    return ok, " ".join(rows)


def criterion_5():
    """Ball averages of the frequency table approximate the density."""
    Y = 20_000
    sample = modelset.e_alpha_epsilon(SQRT2M1, 0.1, Y)
    table = frequency.frequency_table(sample, 200.0, Y - 201.0)
    centers = [(float(c),) for c in np.linspace(-150.0, 150.0, 10)]
    res = frequency.mean_frequency(table, 50.0, centers)
    dens = float(table.density.value)
    rel = abs(res.value - dens) / dens
    dev = res.max_deviation / dens
    ok = rel <= 0.05 and dev < 0.05
    return ok, (f"mean={res.value:.6f} density={dens:.6f} "
                f"rel={rel:.5f} max_dev={dev:.5f}")


def criterion_6():
    """Patch alignment: small defect on the model set, large on jitter."""
    R = 200.0
    ext = 5_000
    sample = modelset.e_alpha_epsilon(SQRT2M1, 0.1, ext)
    rng = np.random.default_rng(60)
    lim = ext - R - 50.0
    defects = []
    for _ in range(20):
        x = (float(rng.uniform(-lim, lim)),)
        y = (float(rng.uniform(-lim, lim)),)
        _, defect = pointset.patch_defect(sample, x, y, R, candidate_radius=30.0)
        defects.append(defect)
    worst = max(defects)
    jit = modelset.jittered_lattice_sample(3, 3000.0, amplitude=0.3)
    limj = 3000.0 - R - 50.0
    jdef = []
    for _ in range(20):
        x = (float(rng.uniform(-limj, limj)),)
        y = (float(rng.uniform(-limj, limj)),)
        _, defect = pointset.patch_defect(jit, x, y, R, candidate_radius=10.0)
        jdef.append(defect)
    med = float(np.median(jdef))
    ok = worst <= 0.05 and med >= 0.1
    return ok, f"model_worst={worst:.4f} jitter_median={med:.4f}"


def criterion_7():
    """Injectivity rate: exact cases, radius stability, monotonicity."""
    ident = discretize.DiscretizedSequence((discretize.LinearMapSpec(np.eye(2)),))
    t_id = discretize.rate_of_injectivity(ident, 1, [200.0]).taus[0][0]
    quarter = discretize.DiscretizedSequence((discretize.rotation(math.pi / 2),))
    t_q = discretize.rate_of_injectivity(quarter, 1, [200.0]).taus[0][0]
    eighth = discretize.DiscretizedSequence((discretize.rotation(math.pi / 4),))
    tr8 = discretize.rate_of_injectivity(eighth, 1, [500.0, 1000.0])
    a, b = tr8.taus[0]
    census = tr8.density_estimates[0]
    seq = discretize.random_rotation_sequence(0, 10)
    tr = discretize.rate_of_injectivity(seq, 10, [300.0])
    mono = all(tr.taus[i + 1][0] <= tr.taus[i][0] + 1e-12 for i in range(9))
    ok = (t_id == 1.0 and t_q == 1.0
          and abs(a - b) / b <= 0.01
          and abs(census - a) <= 3.0 * (2 * 2 / 500.0)
          and mono)
    return ok, (f"identity={t_id} quarter_turn={t_q} eighth_500={a:.6f} "
                f"eighth_1000={b:.6f} census={census:.6f} monotone={mono}")


def criterion_8():
    """Injectivity decay across 100 seeded ten-rotation pipelines."""
    decayed = 0
    for seed in range(100):
        seq = discretize.random_rotation_sequence(seed, 10)
        tr = discretize.rate_of_injectivity(seq, 10, [500.0])
        if tr.taus[9][0] < tr.taus[0][0]:
            decayed += 1
    return decayed >= 95, f"seeds=100 decayed={decayed}"


def criterion_9():
    """Guaranteed frequent difference on the square lattice and an image set."""
    lat = frequency.lattice_frequency_table(np.eye(2, dtype=np.int64), 4.0)
    rep1 = discretize.seed_difference(lat, density=1.0)
    ok = (rep1.sum_ok and rep1.rho_ok
          and rep1.rho0 >= 1.0 / 16.0 - rep1.uncertainty_budget)
    seq = discretize.random_rotation_sequence(11, 3)
    img = discretize.discretized_image(seq, 3, 200.0)
    table = frequency.frequency_table(img, 3.5, 195.0)
    rep2 = discretize.seed_difference(table)
    ok = (ok and rep2.sum_ok and rep2.rho_ok
          and rep2.rho0 >= rep2.density / 16.0 - rep2.uncertainty_budget
          and rep2.sum_nonzero >= 1.0 - rep2.uncertainty_budget)
    return ok, (f"lattice_u0={rep1.u0} lattice_rho0={rep1.rho0} "
                f"image_u0={rep2.u0} image_rho0={rep2.rho0:.4f} "
                f"image_density={rep2.density:.4f}")


def _abs_dev_from_sqrt2_le(p: int, q: int, bound: Fraction) -> bool:
    """Exact test of |p - sqrt(2) q| <= bound for integers p, q > 0."""
    if q <= 0:
        raise ValueError("q must be positive")
    lo = Fraction(p) - bound
    hi = Fraction(p) + bound
    ge_lo = lo <= 0 or lo * lo <= 2 * q * q
    le_hi = hi >= 0 and 2 * q * q <= hi * hi
    return ge_lo and le_hi


def criterion_10():
    """Approximation witness: exact constraints, slope bound, denominators."""
    ok = True
    rows = []
    convergents = {1, 2, 5, 12, 29, 70, 169}
    for Q in (10, 100):
        gamma = modelset.lattice_sample(np.eye(2, dtype=np.int64), Q + 2.0)
        query = ApproximationQuery((SQRT2M1,), Q, gamma, density=1.0)
        w = find_witness(query)
        dy = int(round(float(w.dy)))
        ux = int(round(float(w.u[0])))
        # alpha = sqrt(2) - 1, so |ux - alpha dy| = |(ux + dy) - sqrt(2) dy|
        slab_ok = _abs_dev_from_sqrt2_le(ux + dy, dy, Fraction(1, Q))
        yrange_ok = 0 < dy <= 2 * Q
        slope_ok = _abs_dev_from_sqrt2_le(ux + dy, dy, Fraction(2, dy))
        pair_ok = (abs(w.u[0] - (w.v[0] - w.w[0])) < 1e-9
                   and abs(w.dy - (w.v[1] - w.w[1])) < 1e-9)
        den_ok = dy == 5 if Q == 10 else dy in convergents
        good = slab_ok and yrange_ok and slope_ok and pair_ok and den_ok
        ok = ok and good
        rows.append(f"Q={Q}:dy={dy},ux={ux},err={w.errors[0]:.3e},"
                    f"exact={slab_ok and slope_ok},denominator_ok={den_ok}")
    return ok, " ".join(rows)


def _test_raster(H: int, W: int) -> np.ndarray:
    """Deterministic synthetic grayscale test pattern."""
    ii, jj = np.indices((H, W))
    img = ((ii * 127) // max(H - 1, 1) + (jj * 127) // max(W - 1, 1)).astype(np.uint8)
    disk = (ii - H // 2) ** 2 + (jj - W // 2) ** 2 < (min(H, W) // 5) ** 2
    img[disk] = 235
    img[(jj // 16) % 2 == 0] ^= 24
    return img


def criterion_11():
    """Raster degradation: exact cases plus monotone pixel loss."""
    img = _test_raster(220, 282)
    ident = discretize.DiscretizedSequence((discretize.LinearMapSpec(np.eye(2)),))
    out_id, _ = discretize.degrade_image(img, ident)
    id_ok = bool(np.array_equal(out_id, img))
    sq = _test_raster(221, 221)
    quarter = discretize.DiscretizedSequence((discretize.rotation(math.pi / 2),))
    out_q, _ = discretize.degrade_image(sq, quarter)
    q_ok = bool(np.array_equal(out_q, np.rot90(sq, 1)))
    seq = discretize.random_rotation_sequence(7, 10)
    _, lost = discretize.degrade_image(img, seq)
    pos = all(l > 0 for l in lost)
    mono = all(lost[i + 1] >= lost[i] for i in range(len(lost) - 1))
    ok = id_ok and q_ok and pos and mono
    return ok, (f"identity_exact={id_ok} quarter_turn_exact={q_ok} "
                f"lost_first={lost[0]:.4f} lost_last={lost[-1]:.4f} "
                f"positive={pos} nondecreasing={mono}")


_CRITERIA = (
    (1, "tight periodic instance", criterion_1),
    (2, "classical lattice point bound", criterion_2),
    (3, "frequency mass bound on Diophantine sets", criterion_3),
    (4, "Diophantine set density", criterion_4),
    (5, "mean of difference frequencies", criterion_5),
    (6, "patch alignment diagnostic", criterion_6),
    (7, "injectivity rate of rounded maps", criterion_7),
    (8, "injectivity decay over random rotations", criterion_8),
    (9, "guaranteed frequent difference", criterion_9),
    (10, "approximation witness search", criterion_10),
    (11, "raster degradation pipeline", criterion_11),
)

CRITERION_INDICES = tuple(i for i, _, _ in _CRITERIA)


def run_one(index: int) -> CriterionResult:
    for i, name, fn in _CRITERIA:
        if i == index:
            t0 = time.perf_counter()
            passed, details = fn()
            return CriterionResult(i, name, bool(passed), details,
                                   time.perf_counter() - t0)
    raise ValueError(f"no criterion numbered {index}")


def run_all(indices=None):
    wanted = tuple(indices) if indices else CRITERION_INDICES
    return [run_one(i) for i in wanted]
