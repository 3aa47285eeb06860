"""Command-line interface: ``conesample {sample,cost,validate,baseline}``.

Every run writes a ``#`` metadata header that is enough to repeat it
bit for bit.  Exit status is 0 on success, 2 for usage errors and 3 for
numerical failures such as an underflowing cap fraction.
"""

from __future__ import annotations

import argparse
import contextlib
import math
import os
import sys
from typing import List, Optional

import numpy as np

from . import __version__
from ._errors import NumericalError, UnderflowError
from .anglemap import AngleMap
from .baselines import (
    DEFAULT_SIGMAS,
    ShiftedNormalSpec,
    ShiftedSphereSpec,
    shifted_normal_accepted,
    shifted_normal_sample,
    shifted_sphere_sample,
)
from .io import write_meta, write_records, write_table
from .rng import SEED_ENV_VAR, RandomStream, default_seed
from .sampler import (
    METHODS,
    ConeSpec,
    HollowConeSpec,
    cap_point,
    choose_method,
    hollow_cone_point,
    sample_parallel,
)
from .stats import ThetaDistribution, angles_to_axis, histogram, ks_statistic, weighted_ks_statistic

EXIT_USAGE = 2
EXIT_NUMERIC = 3

COST_KINDS = ("rejection", "planar", "small-angle")
DEFAULT_THETAS = (math.pi / 5, math.pi / 4, math.pi / 3)


class UsageError(Exception):
    pass


def _float_list(text: str) -> List[float]:
    try:
        return [float(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a list of numbers, got {text!r}")


def _int_list(text: str) -> List[int]:
    try:
        return [int(float(t)) for t in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a list of integers, got {text!r}")


def _add_common(p, region=True):
    p.add_argument("--dim", type=int, required=True, help="ambient dimension n")
    if region:
        p.add_argument("--theta0", type=float, help="cap half-angle in radians")
    p.add_argument("--axis-index", type=int, help="use the canonical axis e_k (1-based; default n)")
    p.add_argument("--axis", type=_float_list, help="axis coordinates, comma or space separated")
    p.add_argument("--axis-file", help="file holding the axis coordinates")
    p.add_argument("--seed", type=int, help=f"random seed (default ${SEED_ENV_VAR} or 0)")
    p.add_argument("--method", choices=METHODS, default="auto")
    p.add_argument("--out", help="output file (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="conesample", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"conesample {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="draw directions from a cap or hollow cone")
    _add_common(p)
    p.add_argument("--theta1", type=float, help="inner half-angle of a hollow cone")
    p.add_argument("--theta2", type=float, help="outer half-angle of a hollow cone")
    p.add_argument("--omega1", type=float, help="inner solid angle fraction of a hollow cone")
    p.add_argument("--omega2", type=float, help="outer solid angle fraction of a hollow cone")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--format", choices=("table", "records"), default="table")
    p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("cost", help="tabulate sampling costs against dimension")
    p.add_argument("--kind", choices=COST_KINDS, default="rejection")
    p.add_argument("--theta", type=_float_list, help="half-angles in radians (default pi/5 pi/4 pi/3)")
    p.add_argument("--dim-min", type=int, default=2)
    p.add_argument("--dim-max", type=int, default=100)
    p.add_argument("--dim-step", type=int, default=1)
    p.add_argument("--log10", action="store_true", help="always write log10 of the cost")
    p.add_argument("--out")
    p.add_argument("--out-dir", help="write one file per angle, e.g. rejection-cost-pi-4.dat")

    p = sub.add_parser("validate", help="KS or histogram check of sampled angles")
    _add_common(p)
    p.add_argument("--counts", type=_int_list, help="sample sizes (default 10 log-spaced from 1e2 to 1e4)")
    p.add_argument("--histogram", action="store_true")
    p.add_argument("--bins", type=int, default=100)
    p.add_argument("--count", type=int, default=10000, help="samples for --histogram")

    p = sub.add_parser("baseline", help="compare a re-weighting baseline with the exact sampler")
    p.add_argument("baseline", choices=("shifted-sphere", "normal"))
    _add_common(p)
    p.add_argument("--mu-norm", type=float, default=1.0)
    p.add_argument("--sigma", type=float, default=DEFAULT_SIGMAS[0])
    p.add_argument("--counts", type=_int_list, help="sample sizes (default 1e2 1e3 1e4)")
    p.add_argument("--draws", type=int, default=100000, help="draws used to measure the acceptance fraction")
    return parser


def _seed(args) -> int:
    return default_seed() if args.seed is None else int(args.seed)


def _axis(args) -> np.ndarray:
    n = args.dim
    given = [args.axis_index is not None, args.axis is not None, args.axis_file is not None]
    if sum(given) > 1:
        raise UsageError("give at most one of --axis-index, --axis, --axis-file")
    if args.axis is not None:
        v = np.array(args.axis, dtype=float)
    elif args.axis_file is not None:
        try:
            v = np.loadtxt(args.axis_file, dtype=float).reshape(-1)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read axis file: {exc}")
    else:
        k = n if args.axis_index is None else args.axis_index
        if not 1 <= k <= n:
            raise UsageError(f"--axis-index must be in [1, {n}]")
        v = np.zeros(n)
        v[k - 1] = 1.0
    if v.size != n:
        raise UsageError(f"axis has {v.size} coordinates but --dim is {n}")
    return v


def _axis_label(args) -> str:
    if args.axis is not None:
        return " ".join(format(x, ".17g") for x in args.axis)
    if args.axis_file is not None:
        return f"file {args.axis_file}"
    return f"e_{args.dim if args.axis_index is None else args.axis_index}"


def _region(args):
    """Return a ConeSpec or HollowConeSpec from exactly one region option set."""
    axis = _axis(args)
    cap = args.theta0 is not None
    band = args.theta1 is not None or args.theta2 is not None
    frac = args.omega1 is not None or args.omega2 is not None
    if cap + band + frac != 1:
        raise UsageError("give exactly one of --theta0, --theta1/--theta2, --omega1/--omega2")
    if cap:
        return ConeSpec(axis, args.theta0)
    if band:
        if args.theta1 is None or args.theta2 is None:
            raise UsageError("--theta1 and --theta2 go together")
        return HollowConeSpec(axis, args.theta1, args.theta2)
    if args.omega1 is None or args.omega2 is None:
        raise UsageError("--omega1 and --omega2 go together")
    return HollowConeSpec.from_fractions(axis, args.omega1, args.omega2)


def _check_dim(n):
    if n < 2:
        raise UsageError("--dim must be at least 2")


def _meta(args, **extra):
    meta = {"command": args.command, "version": __version__}
    if hasattr(args, "dim"):
        meta["dimension"] = args.dim
    meta.update(extra)
    return meta


def cmd_sample(args, out) -> None:
    _check_dim(args.dim)
    if args.count < 0:
        raise UsageError("--count must be nonnegative")
    if args.threads < 1:
        raise UsageError("--threads must be at least 1")
    spec = _region(args)
    seed = _seed(args)
    rng = RandomStream(seed)
    if isinstance(spec, ConeSpec):
        method = choose_method(spec.theta0, spec.n) if args.method == "auto" else args.method
        region = {"theta0": format(spec.theta0, ".17g")}

        def draw(stream, k):
            return cap_point(spec, stream, method, size=k)

    else:
        method = "inverse"
        region = {"theta1": format(spec.theta1, ".17g"), "theta2": format(spec.theta2, ".17g")}

        def draw(stream, k):
            return hollow_cone_point(spec, stream, size=k)

    if args.threads == 1:
        x = draw(rng, args.count)
    else:
        x = sample_parallel(draw, args.count, rng, args.threads).reshape(-1, spec.n)
    meta = _meta(args, **region, axis=_axis_label(args), method=method, seed=seed,
                 count=args.count, threads=args.threads)
    if args.format == "records":
        write_records(out, x, meta)
    else:
        write_table(out, x, meta=meta)


COST_FILE_PREFIX = {"rejection": "rejection-cost", "planar": "theta-rejection-cost",
                    "small-angle": "small-angle-cost"}


def cost_file_name(kind: str, theta: float) -> str:
    """Data file name for one cost curve; angles equal to pi/k are written as ``pi-k``."""
    k = math.pi / theta
    tag = f"pi-{round(k)}" if abs(k - round(k)) < 1e-9 else f"theta-{theta:.17g}"
    return f"{COST_FILE_PREFIX[kind]}-{tag}.dat"


def _cost_block(kind, theta, dims, force_log):
    costs = []
    for n in dims:
        m = AngleMap(n)
        if kind == "rejection":
            costs.append(m.rejection_cost(theta))
        elif kind == "planar":
            costs.append(m.planar_rejection_cost(theta))
        else:
            costs.append(m.rejection_cost_small_angle(theta))
    use_log = force_log or any(c.value is None for c in costs)
    rows = [(n, c.log10 if use_log else c.value) for n, c in zip(dims, costs)]
    return use_log, rows


def cmd_cost(args, out) -> None:
    if args.dim_min < 2 or args.dim_max < args.dim_min or args.dim_step < 1:
        raise UsageError("need 2 <= --dim-min <= --dim-max and --dim-step >= 1")
    thetas = args.theta if args.theta else list(DEFAULT_THETAS)
    for t in thetas:
        if not 0.0 < t <= math.pi:
            raise UsageError(f"theta {t!r} is outside (0, pi]")
    dims = range(args.dim_min, args.dim_max + 1, args.dim_step)
    head = {"command": "cost", "kind": args.kind, "version": __version__}
    if args.out_dir:
        os.makedirs(args.out_dir, exist_ok=True)
    else:
        write_meta(out, head)
    for i, t in enumerate(thetas):
        use_log, rows = _cost_block(args.kind, t, dims, args.log10)
        block_meta = {"theta": format(t, ".17g"), "column2": "log10_cost" if use_log else "cost"}
        if args.out_dir:
            path = os.path.join(args.out_dir, cost_file_name(args.kind, t))
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                write_table(fh, rows, meta={**head, **block_meta})
            continue
        if i:
            out.write("\n")
        write_meta(out, block_meta)
        write_table(out, rows)


def _schedule(counts):
    if counts is None:
        return sorted(set(int(round(v)) for v in np.logspace(2, 4, 10)))
    if not counts or min(counts) < 1:
        raise UsageError("sample counts must be positive")
    return sorted(set(counts))


def _ks_rows(angles, dist, schedule, weights=None):
    rows = []
    for m in schedule:
        if weights is None:
            rows.append(ks_statistic(angles[:m], dist).statistic)
        else:
            rows.append(weighted_ks_statistic(angles[:m], weights[:m], dist).statistic)
    return rows


def cmd_validate(args, out) -> None:
    _check_dim(args.dim)
    if args.theta0 is None:
        raise UsageError("--theta0 is required")
    spec = ConeSpec(_axis(args), args.theta0)
    if spec.theta0 == 0.0:
        raise UsageError("--theta0 must be positive")
    seed = _seed(args)
    method = choose_method(spec.theta0, spec.n) if args.method == "auto" else args.method
    dist = ThetaDistribution(spec.n, spec.theta0)
    rng = RandomStream(seed)
    if args.histogram:
        if args.bins < 1 or args.count < 1:
            raise UsageError("--bins and --count must be positive")
        x = cap_point(spec, rng, method, size=args.count)
        left, dens = histogram(angles_to_axis(x, spec.axis), args.bins, (0.0, spec.theta0))
        width = spec.theta0 / args.bins
        edges = np.append(left, spec.theta0)
        exact = np.diff(dist.cdf(edges)) / width
        meta = _meta(args, theta0=format(spec.theta0, ".17g"), axis=_axis_label(args), method=method,
                     seed=seed, count=args.count, bins=args.bins)
        write_table(out, zip(left, dens, exact), columns=("bin", "density", "exact_density"), meta=meta)
        return
    schedule = _schedule(args.counts)
    x = cap_point(spec, rng, method, size=schedule[-1])
    d = _ks_rows(angles_to_axis(x, spec.axis), dist, schedule)
    meta = _meta(args, theta0=format(spec.theta0, ".17g"), axis=_axis_label(args), method=method, seed=seed)
    write_table(out, zip(schedule, d), columns=("N", "D_N"), meta=meta)


def cmd_baseline(args, out) -> None:
    _check_dim(args.dim)
    if args.theta0 is None:
        raise UsageError("--theta0 is required")
    if not args.mu_norm > 0:
        raise UsageError("--mu-norm must be positive")
    axis = ConeSpec(_axis(args), args.theta0).axis
    mu = args.mu_norm * axis
    seed = _seed(args)
    schedule = _schedule(args.counts or [100, 1000, 10000])
    top = schedule[-1]
    base_rng, prop_rng, acc_rng = RandomStream(seed).spawn(3)
    extra = {}
    if args.baseline == "shifted-sphere":
        spec = ShiftedSphereSpec(mu, args.theta0)
        ws = shifted_sphere_sample(spec, base_rng, top)
        extra["clamped"] = ws.clamped
    else:
        spec = ShiftedNormalSpec(mu, args.sigma, args.theta0)
        ws, _ = shifted_normal_accepted(spec, top, base_rng)
        extra["sigma"] = format(args.sigma, ".17g")
        if args.draws > 0:
            extra["acceptance_fraction"] = format(
                shifted_normal_sample(spec, acc_rng, args.draws).acceptance_fraction, ".17g"
            )
            extra["acceptance_draws"] = args.draws
    extra["log_weight_range"] = format(ws.log_weight_range, ".17g")
    dist = ThetaDistribution(args.dim, args.theta0)
    cap = ConeSpec(axis, args.theta0)
    method = choose_method(cap.theta0, cap.n) if args.method == "auto" else args.method
    prop = cap_point(cap, prop_rng, method, size=top)
    d_base = _ks_rows(angles_to_axis(ws.directions, axis), dist, schedule, ws.weights)
    d_prop = _ks_rows(angles_to_axis(prop, axis), dist, schedule)
    meta = _meta(args, baseline=args.baseline, theta0=format(args.theta0, ".17g"),
                 mu_norm=format(args.mu_norm, ".17g"), axis=_axis_label(args), method=method,
                 seed=seed, **extra)
    write_table(out, zip(schedule, d_base, d_prop), columns=("N", "D_N_baseline", "D_N_proposed"), meta=meta)


COMMANDS = {"sample": cmd_sample, "cost": cmd_cost, "validate": cmd_validate, "baseline": cmd_baseline}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        with contextlib.ExitStack() as stack:
            if args.out:
                out = stack.enter_context(open(args.out, "w", encoding="utf-8", newline="\n"))
            else:
                out = sys.stdout
            COMMANDS[args.command](args, out)
    except UnderflowError as exc:
        print(f"conesample: {exc}\nhint: rerun with --method rejection", file=sys.stderr)
        return EXIT_NUMERIC
    except NumericalError as exc:
        print(f"conesample: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (UsageError, ValueError) as exc:
        print(f"conesample: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"conesample: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())
