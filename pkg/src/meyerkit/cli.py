"""Command-line entry point.

Subcommand groups: modelset, pointset, freq, minkowski, dirichlet,
discretize, accept. Reports are line-oriented key=value text on stdout
and are byte-identical across runs with the same inputs; timing and
diagnostics go to stderr. Exit codes: 0 success or passing
verification, 1 failed verification, 2 input errors.
"""

import argparse
import math
import sys
from fractions import Fraction

import numpy as np

from . import acceptance, discretize, frequency, minkowski, modelset, pointset
from .convex import parse_body
from .dirichlet import ApproximationQuery, WitnessNotFound, find_witness, guaranteed_mass, slab_body
from .pgm import read_pgm, write_pgm


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (tuple, list, np.ndarray)):
        return ",".join(_fmt(v) for v in list(x))
    return str(x)


def _emit(*pairs):
    print(" ".join(f"{k}={_fmt(v)}" for k, v in pairs))


def _parse_matrix(text: str) -> np.ndarray:
    rows = [[float(v) for v in row.split(",")] for row in text.split(";")]
    M = np.array(rows, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"matrix {text!r} is not square")
    return M


def _parse_window(text: str) -> modelset.Box:
    if ";" in text:
        lo_s, hi_s = text.split(";")
        lo = tuple(float(v) for v in lo_s.split(","))
        hi = tuple(float(v) for v in hi_s.split(","))
    else:
        parts = [float(v) for v in text.split(",")]
        if len(parts) != 2:
            raise ValueError(f"window {text!r} needs 'lo,hi' or 'lo1,lo2;hi1,hi2'")
        lo, hi = (parts[0],), (parts[1],)
    return modelset.Box(lo=lo, hi=hi)


def _parse_alpha(text: str, exact: bool = False) -> tuple:
    vals = [v.strip() for v in text.split(",")]
    if exact:
        return tuple(Fraction(v) for v in vals)
    return tuple(float(v) for v in vals)


def _parse_centers(text: str) -> list:
    return [tuple(float(v) for v in part.split(",")) for part in text.split(";")]


def _cmd_modelset_gen(args) -> int:
    B = _parse_matrix(args.basis)
    window = _parse_window(args.window)
    if B.shape[0] != args.m + args.n:
        raise ValueError(f"basis is {B.shape[0]}x{B.shape[0]} but m+n = {args.m + args.n}")
    scheme = modelset.CutAndProjectScheme(
        internal_dim=args.m, physical_dim=args.n, basis=B, window=window)
    sample = modelset.generate(scheme, args.R)
    pointset.write_point_file(sample, args.out)
    _emit(("count", sample.size))
    _emit(("expected_density", modelset.expected_density(scheme)))
    _emit(("covolume", scheme.covolume()))
    _emit(("window_volume", scheme.window_volume()))
    _emit(("out", args.out))
    return 0


def _cmd_modelset_ealpha(args) -> int:
    alpha = _parse_alpha(args.alpha)
    sample = modelset.e_alpha_epsilon(alpha, args.eps, args.Y)
    pointset.write_point_file(sample, args.out)
    measured = sample.size / (2.0 * args.Y)
    _emit(("count", sample.size))
    _emit(("density", measured))
    _emit(("expected_density", float((2.0 * args.eps) ** len(alpha))))
    _emit(("out", args.out))
    return 0


def _cmd_pointset_density(args) -> int:
    sample = pointset.read_point_file(args.inp)
    radii = [args.R * (i + 1) / 4.0 for i in range(4)]
    est = pointset.upper_density(sample, radii, args.grid)
    _emit(("density", est.value))
    _emit(("radius", est.radius_used))
    _emit(("uncertainty", est.uncertainty()))
    _emit(("erosion_margin", est.erosion_margin))
    _emit(("centers", est.center_count))
    _emit(("sup_over_centers", est.sup_over_centers))
    if args.plot:
        from . import plots
        _emit(("plot", plots.save_density_trace(est, args.plot)))
    return 0


def _cmd_pointset_delone(args) -> int:
    sample = pointset.read_point_file(args.inp)
    params = pointset.delone_parameters(sample, args.probe_spacing)
    _emit(("r_packing", params.r_packing))
    _emit(("R_covering", params.R_covering))
    _emit(("probe_spacing", params.probe_spacing))
    return 0


def _cmd_pointset_wap(args) -> int:
    sample = pointset.read_point_file(args.inp)
    rng = np.random.default_rng(args.seed)
    lim = sample.region_radius - args.R
    if lim <= 0:
        raise ValueError("patch radius exceeds the sampled region")
    defects = []
    for i in range(args.pairs):
        x = rng.uniform(-lim, lim, size=sample.dimension)
        y = rng.uniform(-lim, lim, size=sample.dimension)
        while np.linalg.norm(x) > lim or np.linalg.norm(y) > lim:
            x = rng.uniform(-lim, lim, size=sample.dimension)
            y = rng.uniform(-lim, lim, size=sample.dimension)
        v, defect = pointset.patch_defect(sample, x, y, args.R,
                                          candidate_radius=args.candidate_radius)
        defects.append(defect)
        _emit(("pair", i), ("defect", defect), ("v", tuple(v)))
    _emit(("median_defect", float(np.median(defects))))
    _emit(("max_defect", float(max(defects))))
    return 0


def _cmd_freq_table(args) -> int:
    sample = pointset.read_point_file(args.inp)
    table = frequency.frequency_table(sample, args.cutoff, args.R)
    frequency.write_table_file(table, args.out)
    _emit(("support", len(table.entries)))
    _emit(("density", float(table.density.value)))
    _emit(("uncertainty", table.density.uncertainty()))
    _emit(("erosion_margin", table.erosion_margin))
    _emit(("out", args.out))
    if args.plot:
        from . import plots
        _emit(("plot", plots.save_frequency_stem(table, args.plot)))
    return 0


def _cmd_freq_mean(args) -> int:
    table = frequency.read_table_file(args.inp)
    if args.centers:
        centers = _parse_centers(args.centers)
    else:
        centers = [tuple([0.0] * table.dimension)]
    res = frequency.mean_frequency(table, args.ball, centers)
    _emit(("mean", res.value))
    _emit(("max_deviation", res.max_deviation))
    _emit(("centers", len(res.per_center)))
    _emit(("per_center", res.per_center))
    return 0


def _cmd_minkowski_verify(args) -> int:
    sample = pointset.read_point_file(args.pts)
    body = parse_body(args.body, default_dimension=sample.dimension)
    table = frequency.frequency_table(sample, args.cutoff, args.R)
    if args.integer:
        rep = minkowski.verify_integer_inequality(table, body)
    else:
        rep = minkowski.verify_inequality(table, body,
                                          probe_factor2=args.probe_factor2)
    _emit(("lhs", rep.lhs), ("rhs", rep.rhs), ("margin", rep.margin),
          ("pass", rep.passed))
    _emit(("uncertainty", rep.sampling_uncertainty))
    _emit(("mode", rep.mode))
    if args.probe_factor2:
        _emit(("ratio", rep.ratio()))
    return 0 if rep.passed else 1


def _cmd_minkowski_classical(args) -> int:
    B = _parse_matrix(args.basis)
    body = parse_body(args.body, default_dimension=B.shape[0])
    rep = minkowski.classical_bound_check(B, body)
    _emit(("count", rep.count), ("bound", rep.bound), ("k_max", rep.k_max),
          ("pass", rep.passed))
    _emit(("volume_half", rep.volume_half))
    _emit(("covolume", rep.covolume))
    return 0 if rep.passed else 1


def _cmd_minkowski_equality(args) -> int:
    rep = minkowski.equality_report(args.k)
    _emit(("k", args.k), ("lhs", rep.lhs), ("rhs", rep.rhs),
          ("margin", rep.margin), ("pass", rep.passed))
    _emit(("mode", rep.mode))
    _emit(("exact", isinstance(rep.margin, Fraction)))
    return 0 if rep.passed else 1


def _default_gamma(n: int, Q: float) -> pointset.PointSample:
    basis = np.eye(n + 1, dtype=np.int64)
    return modelset.lattice_sample(basis, float(Q) + 2.0)


def _cmd_dirichlet_find(args) -> int:
    alpha = _parse_alpha(args.alpha, exact=args.exact)
    Q = int(args.Q) if float(args.Q) == int(float(args.Q)) else float(args.Q)
    density = args.density
    if args.pts:
        gamma = pointset.read_point_file(args.pts)
        if density is None:
            density = pointset.density_at(
                gamma, 0.9 * gamma.region_radius,
                [tuple([0.0] * gamma.dimension)]).value
    else:
        gamma = _default_gamma(len(alpha), float(Q) / (args.density or 1.0))
        if density is None:
            density = 1.0
    query = ApproximationQuery(alpha, Q, gamma, density)
    witness = find_witness(query)
    _emit(("v", witness.v), ("w", witness.w), ("u", witness.u),
          ("err", witness.errors), ("bound", witness.bounds))
    _emit(("dy", witness.dy))
    _emit(("q_form_bound", witness.q_form_bounds))
    _emit(("x_bound", float(query.x_bound())))
    _emit(("y_bound", query.y_bound()))
    return 0


def _cmd_dirichlet_mass(args) -> int:
    alpha = _parse_alpha(args.alpha, exact=args.exact)
    Q = int(args.Q) if float(args.Q) == int(float(args.Q)) else float(args.Q)
    gamma = pointset.read_point_file(args.pts)
    density = args.density
    if density is None:
        density = pointset.density_at(
            gamma, 0.9 * gamma.region_radius,
            [tuple([0.0] * gamma.dimension)]).value
    query = ApproximationQuery(alpha, Q, gamma, density)
    slab = slab_body(query)
    cutoff = args.cutoff if args.cutoff else slab.circumradius() + 1.0
    R = args.R if args.R else gamma.region_radius - cutoff - 1.0
    table = frequency.frequency_table(gamma, cutoff, R)
    rep = guaranteed_mass(query, table)
    _emit(("empirical", rep.empirical_sum), ("floor", rep.theoretical_floor),
          ("pass", rep.passed))
    _emit(("rhs", rep.rhs))
    _emit(("uncertainty", rep.sampling_uncertainty))
    return 0 if rep.passed else 1


def _cmd_discretize_tau(args) -> int:
    seq = discretize.random_rotation_sequence(args.seed, args.k)
    radii = [float(v) for v in args.radii.split(",")] if args.radii else [args.R]
    trace = discretize.rate_of_injectivity(seq, args.k, radii)
    _emit(("seed", args.seed), ("k", args.k))
    for j, R in enumerate(trace.radii):
        _emit(("R", R), ("input_count", trace.input_counts[j]))
    for i in range(args.k):
        for j, R in enumerate(trace.radii):
            _emit(("depth", i + 1), ("R", R), ("tau", trace.taus[i][j]),
                  ("count", trace.counts[i][j]))
    for j, R in enumerate(trace.radii):
        d = trace.density_estimates[j]
        if not math.isnan(d):
            _emit(("R", R), ("census_density", d))
    if args.plot:
        from . import plots
        _emit(("plot", plots.save_injectivity_trace(trace, args.plot)))
    return 0


def _cmd_discretize_degrade(args) -> int:
    img = read_pgm(args.inp)
    seq = discretize.random_rotation_sequence(args.seed, args.k)
    out_img, lost = discretize.degrade_image(img, seq)
    write_pgm(args.out, out_img)
    _emit(("height", img.shape[0]), ("width", img.shape[1]))
    for i, frac in enumerate(lost):
        _emit(("step", i + 1), ("lost", frac))
    _emit(("lost_final", lost[-1]))
    _emit(("out", args.out))
    if args.plot:
        from . import plots
        _emit(("plot", plots.save_loss_curve(lost, args.plot)))
    return 0


def _cmd_discretize_seed_diff(args) -> int:
    sample = pointset.read_point_file(args.inp)
    density = args.density
    if density is None:
        density = pointset.density_at(
            sample, 0.8 * sample.region_radius,
            [tuple([0.0] * sample.dimension)]).value
    r = max(3.0, math.sqrt(8.0 / (math.pi * density)))
    cutoff = args.cutoff if args.cutoff else r + 0.5
    R = args.R if args.R else sample.region_radius - cutoff - 1e-6
    table = frequency.frequency_table(sample, cutoff, R)
    rep = discretize.seed_difference(table, density=density)
    _emit(("u0", rep.u0), ("rho0", rep.rho0), ("r", rep.radius))
    _emit(("density", rep.density))
    _emit(("sum_nonzero", rep.sum_nonzero))
    _emit(("sum_floor", rep.sum_floor))
    _emit(("rho_floor", rep.rho_floor))
    _emit(("pass", rep.sum_ok and rep.rho_ok))
    return 0 if (rep.sum_ok and rep.rho_ok) else 1


def _cmd_accept(args) -> int:
    indices = None
    if args.only:
        indices = [int(v) for v in args.only.split(",")]
    results = acceptance.run_all(indices)
    all_pass = True
    for res in results:
        all_pass = all_pass and res.passed
        print(f'criterion={res.index} pass={_fmt(res.passed)} name="{res.name}"')
        print(f'criterion={res.index} info="{res.details}"')
        print(f"# criterion {res.index}: {res.elapsed:.2f}s", file=sys.stderr)
    _emit(("all_pass", all_pass))
    return 0 if all_pass else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="meyerkit",
        description="Point-set geometry toolkit: model sets, difference "
                    "frequencies, counting inequalities, rounded maps.")
    groups = parser.add_subparsers(dest="group", required=True)

    g = groups.add_parser("modelset", help="generate lattices and model sets")
    sub = g.add_subparsers(dest="cmd", required=True)
    p = sub.add_parser("gen", help="cut-and-project generation")
    p.add_argument("--basis", required=True, help="rows 'b11,b12;b21,b22'")
    p.add_argument("--window", required=True, help="'lo,hi' or 'lo1,lo2;hi1,hi2'")
    p.add_argument("--m", type=int, default=1, help="internal dimension")
    p.add_argument("--n", type=int, default=1, help="physical dimension")
    p.add_argument("--R", type=float, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_modelset_gen)
    p = sub.add_parser("ealpha", help="integers whose multiples of alpha sit near Z")
    p.add_argument("--alpha", required=True, help="comma-separated targets")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--Y", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_modelset_ealpha)

    g = groups.add_parser("pointset", help="density and regularity analysis")
    sub = g.add_subparsers(dest="cmd", required=True)
    p = sub.add_parser("density", help="sup density over a center grid")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--R", type=float, required=True)
    p.add_argument("--grid", type=float, required=True)
    p.add_argument("--plot", default=None)
    p.set_defaults(func=_cmd_pointset_density)
    p = sub.add_parser("delone", help="packing and covering radii")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--probe-spacing", type=float, default=None)
    p.set_defaults(func=_cmd_pointset_delone)
    p = sub.add_parser("wap", help="patch alignment defects at random centers")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--R", type=float, required=True)
    p.add_argument("--pairs", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--candidate-radius", type=float, default=None)
    p.set_defaults(func=_cmd_pointset_wap)

    g = groups.add_parser("freq", help="difference frequency tables")
    sub = g.add_subparsers(dest="cmd", required=True)
    p = sub.add_parser("table", help="build and save a frequency table")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--cutoff", type=float, required=True)
    p.add_argument("--R", type=float, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--plot", default=None)
    p.set_defaults(func=_cmd_freq_table)
    p = sub.add_parser("mean", help="ball averages of a saved table")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--ball", type=float, required=True)
    p.add_argument("--centers", default=None, help="'x1,y1;x2,y2;...'")
    p.set_defaults(func=_cmd_freq_mean)

    g = groups.add_parser("minkowski", help="counting inequalities")
    sub = g.add_subparsers(dest="cmd", required=True)
    p = sub.add_parser("verify", help="frequency-sum inequality on a sample")
    p.add_argument("--pts", required=True)
    p.add_argument("--body", required=True)
    p.add_argument("--cutoff", type=float, required=True)
    p.add_argument("--R", type=float, required=True)
    p.add_argument("--integer", action="store_true")
    p.add_argument("--probe-factor2", action="store_true",
                   help="also report the lhs/rhs ratio")
    p.set_defaults(func=_cmd_minkowski_verify)
    p = sub.add_parser("classical", help="lattice point count bound")
    p.add_argument("--basis", required=True)
    p.add_argument("--body", required=True)
    p.set_defaults(func=_cmd_minkowski_classical)
    p = sub.add_parser("equality", help="exact tight instance")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=_cmd_minkowski_equality)

    g = groups.add_parser("dirichlet", help="simultaneous approximation")
    sub = g.add_subparsers(dest="cmd", required=True)
    p = sub.add_parser("find", help="search for an approximation witness")
    p.add_argument("--alpha", required=True)
    p.add_argument("--Q", required=True)
    p.add_argument("--pts", default=None)
    p.add_argument("--density", type=float, default=None)
    p.add_argument("--exact", action="store_true",
                   help="parse alpha exactly (rational from decimal text)")
    p.set_defaults(func=_cmd_dirichlet_find)
    p = sub.add_parser("mass", help="guaranteed frequency mass in the slab")
    p.add_argument("--alpha", required=True)
    p.add_argument("--Q", required=True)
    p.add_argument("--pts", required=True)
    p.add_argument("--density", type=float, default=None)
    p.add_argument("--cutoff", type=float, default=None)
    p.add_argument("--R", type=float, default=None)
    p.add_argument("--exact", action="store_true")
    p.set_defaults(func=_cmd_dirichlet_mass)

    g = groups.add_parser("discretize", help="rounded linear maps on the grid")
    sub = g.add_subparsers(dest="cmd", required=True)
    p = sub.add_parser("tau", help="injectivity rate of seeded rotations")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--R", type=float, default=500.0)
    p.add_argument("--radii", default=None, help="comma-separated radius schedule")
    p.add_argument("--plot", default=None)
    p.set_defaults(func=_cmd_discretize_tau)
    p = sub.add_parser("degrade", help="push a PGM raster through rounded maps")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--plot", default=None)
    p.set_defaults(func=_cmd_discretize_degrade)
    p = sub.add_parser("seed-diff", help="guaranteed frequent difference")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--cutoff", type=float, default=None)
    p.add_argument("--R", type=float, default=None)
    p.add_argument("--density", type=float, default=None)
    p.set_defaults(func=_cmd_discretize_seed_diff)

    p = groups.add_parser("accept", help="run the acceptance suite")
    p.add_argument("--only", default=None, help="comma-separated criterion numbers")
    p.set_defaults(func=_cmd_accept)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except WitnessNotFound as exc:
        _emit(("found", False))
        print(f"error={exc}", file=sys.stderr)
        return 1
    except (ValueError, NotImplementedError, OSError) as exc:
        print(f"error={exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
