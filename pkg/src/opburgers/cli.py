"""Command-line front end.

Subcommands: list, describe, verify, transform, special, sweep. Exit codes:
0 all checks passed, 1 a verification failed, 2 usage or configuration error.
All numbers print with 12 significant digits and reports are byte-stable for
a fixed configuration and seed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import invariant, kernels, residual, transform
from .errors import DomainError, OperatorBurgersError
from .operators import check_A_ode, check_commutator, check_factorization, check_leibniz
from .sampling import sample_box
from .scenarios import catalog, get
from .specialfn import HermiteArgs, MLParams, hermite_gen, hermite_value, mittag_leffler

USAGE_ERROR = 2
CHECK_FAILED = 1


def _fmt(x) -> str:
    return f"{float(x):.12g}"


def _jsonify(obj):
    if isinstance(obj, dict):
        return {k: _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (float, np.floating)):
        return float(_fmt(obj))
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    return obj


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _smooth_u(sc):
    weights = [1.0 / (1.0 + d) for d in range(len(sc.dims))]

    def u(*point):
        # carries time dependence so the commutator check sees both sides move
        return float(np.exp(0.2 * sum(w * x for w, x in zip(weights, point[:-1])))) * (
            1.0 + 0.5 * float(np.sin(point[-1]))
        )

    return u


def _smooth_v(sc):
    weights = [1.0 / (2.0 + d) for d in range(len(sc.dims))]

    def v(*point):
        return 1.5 + float(np.sin(0.5 * sum(w * x for w, x in zip(weights, point[:-1]))))

    return v


def cmd_list(args) -> int:
    rows = [(sc.id, sc.equation, len(sc.dims), sc.time_op.kind) for sc in catalog()]
    if args.format == "json":
        payload = [sc.describe() for sc in catalog()]
        _emit(json.dumps(_jsonify(payload), indent=2, sort_keys=True) + "\n", args.out)
        return 0
    widths = [max(len(str(r[i])) for r in rows + [("id", "equation", "dims", "time")]) for i in range(4)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(("id", "equation", "dims", "time"), widths))]
    for r in rows:
        lines.append("  ".join(str(v).ljust(w) for v, w in zip(r, widths)))
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_describe(args) -> int:
    sc = get(args.scenario)
    _emit(json.dumps(_jsonify(sc.describe()), indent=2, sort_keys=True) + "\n", args.out)
    return 0


def _parse_grid(spec: str, sc) -> residual.GridSpec:
    try:
        counts = tuple(int(p) for p in spec.lower().split("x"))
    except ValueError:
        raise DomainError(f"cannot parse grid spec {spec!r}")
    if len(counts) != len(sc.dims) + 1:
        raise DomainError(
            f"grid spec {spec!r} needs {len(sc.dims)} spatial counts plus a time count"
        )
    base = residual.default_grid(sc)
    from dataclasses import replace

    return replace(base, space_counts=counts[:-1], time_count=counts[-1])


def _verify_checks(sc, seed: int, tol_scale: float, samples_n: int = 100):
    """Hypothesis and generator checks; returns check rows."""
    checks = []
    pts = sample_box(sc.point_bounds(), samples_n, seed=seed)
    samples = [tuple(p) for p in pts]
    steps = [1e-4 * ax.extent for ax in sc.dims]

    def add(name, dev, tol, passed=None):
        tol = tol * tol_scale
        checks.append(
            {
                "name": name,
                "max_dev": float(dev),
                "tol": float(tol),
                "pass": bool(dev <= tol) if passed is None else bool(passed),
            }
        )

    if any(ops.generators for ops in sc.per_dim):
        rep = invariant.check_invariant_space(sc, samples, step=min(steps))
        add("generators:unit", rep.worst("unit"), 1e-6)
        add("generators:kernel", rep.worst("kernel"), 1e-6)
        add("generators:annihilation", rep.worst("annihilation"), 1e-5)
        add("generators:eigen", rep.worst("eigen"), 1e-8)

    u, v = _smooth_u(sc), _smooth_v(sc)
    dev = 0.0
    for ops, h in zip(sc.per_dim, steps):
        dev = max(dev, check_leibniz(ops.N, u, v, samples, step=h))
        dev = max(dev, check_leibniz(ops.M, u, v, samples, step=h))
    add("leibniz", dev, 1e-5)

    if sc.time_op.is_classical:
        dev = 0.0
        for ops, h in zip(sc.per_dim, steps):
            dev = max(dev, check_commutator(sc.time_op, ops.N, u, samples, step=h))
            dev = max(dev, check_commutator(sc.time_op, ops.M, u, samples, step=h))
        add("commutator", dev, 1e-5)

    if sc.transform_route:
        ops = sc.per_dim[0]
        dev = check_factorization(ops.M, ops.L, ops.N, u, samples, step=steps[0])
        add("factorization", dev, 1e-8)
        t_lo, t_hi = sc.time_axis.interval()
        t_samples = np.linspace(t_lo, t_hi, 20)
        add("riccati-coefficient", check_A_ode(sc.time_op, ops.A, t_samples), 1e-6)

    if not sc.time_op.is_classical:
        target = sc.params.get("C", sc.params.get("A"))
        spec = invariant.solve_constraint(sc, float(target))
        add("constraint", spec.certified_dev, 1e-9)
    return checks


def cmd_verify(args) -> int:
    sc = get(args.scenario)
    grid = _parse_grid(args.grid, sc) if args.grid else residual.default_grid(sc)
    u = sc.exact_solution
    if args.perturb:
        u = residual.perturbed(u, eps=args.perturb)

    checks = _verify_checks(sc, seed=args.seed, tol_scale=args.tol)
    sweep = residual.convergence_sweep(sc, u, grid, levels=args.levels)

    if sc.time_op.is_classical:
        lo_band, hi_band = 1.8, float("inf")
    else:
        beta = sc.time_op.frac.beta
        lo_band, hi_band = 2.0 - beta - 0.3, 2.0 - beta + 0.5
    order_ok = lo_band <= sweep.order <= hi_band
    checks.append(
        {"name": "residual-order", "max_dev": float(sweep.order), "tol": float(lo_band), "pass": bool(order_ok)}
    )
    es = [r.max_abs for r in sweep.reports]
    ratios = [es[i + 1] / max(es[i], 1e-300) for i in range(len(es) - 1)]
    checks.append(
        {
            "name": "residual-decrease",
            "max_dev": float(max(ratios)),
            "tol": 1.1,
            "pass": bool(sweep.monotone()),
        }
    )

    finest = sweep.reports[-1]
    report = {
        "scenario": sc.id,
        "checks": checks,
        "residual": {
            "max_abs": finest.max_abs,
            "l2": finest.l2,
            "per_term": finest.per_term,
            "order": sweep.order,
            "levels": [{"h": h, "max_abs": r.max_abs} for h, r in zip(sweep.hs, sweep.reports)],
        },
        "excluded_points": finest.excluded,
    }
    if args.format == "json":
        text = json.dumps(_jsonify(report), indent=2, sort_keys=True) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["section", "name", "value", "tol", "pass"])
        for c in checks:
            writer.writerow(["check", c["name"], _fmt(c["max_dev"]), _fmt(c["tol"]), c["pass"]])
        writer.writerow(["residual", "max_abs", _fmt(finest.max_abs), "", ""])
        writer.writerow(["residual", "l2", _fmt(finest.l2), "", ""])
        writer.writerow(["residual", "order", _fmt(sweep.order), "", ""])
        for key in sorted(finest.per_term):
            writer.writerow(["residual", f"per_term:{key}", _fmt(finest.per_term[key]), "", ""])
        writer.writerow(["residual", "excluded_points", str(finest.excluded), "", ""])
        text = buf.getvalue()
    _emit(text, args.out)

    if args.dump_points:
        rep = residual.evaluate(sc, u, sweep_grid_last(sc, grid, args.levels), collect=True)
        with open(args.dump_points, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(rep.columns)
            for row in rep.samples:
                writer.writerow([_fmt(v) for v in row])
    return 0 if all(c["pass"] for c in checks) else CHECK_FAILED


def sweep_grid_last(sc, base_grid, levels):
    return residual._refined(base_grid, sc, levels - 1)


def cmd_transform(args) -> int:
    sc = get(args.scenario)
    if not sc.transform_route or len(sc.dims) != 1:
        raise DomainError(f"scenario {sc.id!r} does not carry the transform route")
    ctx = transform.context_for(sc, nodes=128)
    ax = sc.dims[0]
    nx, nt = (9, 7)
    if args.grid:
        parts = args.grid.lower().split("x")
        if len(parts) != 2:
            raise DomainError(f"transform grids are NxM, got {args.grid!r}")
        nx, nt = int(parts[0]), int(parts[1])
    xs = np.linspace(ax.lo + 0.05 * ax.extent, ax.hi - 0.05 * ax.extent, nx)
    ts = np.linspace(
        sc.time_axis.lo + 0.05 * sc.time_axis.extent,
        sc.time_axis.hi - 0.05 * sc.time_axis.extent,
        nt,
    )

    if args.direction == "forward":
        if sc.hermite_profile is not None:
            psi = transform_hermite_companion(sc, args.hermite)
        elif sc.linear_companion is not None:
            psi = sc.linear_companion
        else:
            raise DomainError(f"scenario {sc.id!r} has no companion field to transform")

        def u_out(x, t):
            return transform.forward(ctx, psi, (x, t))

        rows = []
        for t in ts:
            for x in xs:
                try:
                    val_in = float(psi(x, t))
                    val_out = u_out(x, t)
                    dev = abs(
                        transform.forward(
                            ctx, lambda xx, tt: transform.backward(ctx, u_out, (xx, tt)), (x, t)
                        )
                        - val_out
                    )
                    rows.append((x, t, val_in, val_out, dev, "ok"))
                except OperatorBurgersError:
                    rows.append((x, t, float("nan"), float("nan"), float("nan"), "excluded"))
    else:
        u = sc.exact_solution

        def psi_out(x, t):
            return transform.backward(ctx, u, (x, t))

        rows = []
        for t in ts:
            for x in xs:
                try:
                    val_in = float(u(x, t))
                    val_out = psi_out(x, t)
                    dev = abs(transform.forward(ctx, psi_out, (x, t)) - val_in)
                    rows.append((x, t, val_in, val_out, dev, "ok"))
                except OperatorBurgersError:
                    rows.append((x, t, float("nan"), float("nan"), float("nan"), "excluded"))

    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow([ax.name, sc.time_axis.name, "input", "output", "roundtrip_dev", "status"])
    for x, t, vin, vout, dev, status in rows:
        writer.writerow([_fmt(x), _fmt(t), _fmt(vin), _fmt(vout), _fmt(dev), status])
    _emit(buf.getvalue(), args.out)
    return 0


def transform_hermite_companion(sc, n):
    from .scenarios import hermite_companion

    return hermite_companion(sc.hermite_profile, n)


def cmd_special(args) -> int:
    if args.function == "ml":
        val = mittag_leffler(MLParams(beta=args.beta, arg=args.z))
        _emit(_fmt(val) + "\n", args.out)
    elif args.function == "hermite":
        val = hermite_gen(HermiteArgs(n=args.n, fval=args.f, hval=args.h))
        _emit(_fmt(val) + "\n", args.out)
    else:  # kernel
        p = kernels.KernelPoint(eta=args.eta, t=args.t)
        phi = kernels.hyperbolic_heat_density(p, rel_tol=args.rel_tol)
        u = kernels.brownian_burgers_solution(p, t0=args.t0, rel_tol=args.rel_tol)
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["eta", "t", "phi", "u"])
        writer.writerow([_fmt(args.eta), _fmt(args.t), _fmt(phi), _fmt(u)])
        _emit(buf.getvalue(), args.out)
    return 0


def cmd_sweep(args) -> int:
    sc = get(args.scenario)
    sols = sc.solutions()
    label = args.solution or sc.solution_label
    if label not in sols:
        raise DomainError(f"scenario {sc.id!r} has no solution {label!r}; pick from {sorted(sols)}")
    sweep = residual.convergence_sweep(sc, sols[label], residual.default_grid(sc), levels=args.levels)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["h", "max_abs"])
    for h, r in zip(sweep.hs, sweep.reports):
        writer.writerow([_fmt(h), _fmt(r.max_abs)])
    writer.writerow(["order", _fmt(sweep.order)])
    _emit(buf.getvalue(), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="opburgers",
        description="catalog, transforms, special functions and residual verification "
        "for operator Burgers equations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("list", help="one row per catalog entry")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--out")
    p.set_defaults(func=cmd_list)

    p = sub.add_parser("describe", help="JSON descriptor of one entry")
    p.add_argument("scenario")
    p.add_argument("--out")
    p.set_defaults(func=cmd_describe)

    p = sub.add_parser("verify", help="generator/hypothesis checks plus a residual sweep")
    p.add_argument("scenario")
    p.add_argument("--grid", help="counts like 17x13 (spatial...xtime)")
    p.add_argument("--levels", type=int, default=3)
    p.add_argument("--tol", type=float, default=1.0, help="scale factor on check tolerances")
    p.add_argument("--perturb", type=float, default=0.0, help="add E*x^2 to the exact solution (control)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out")
    p.add_argument("--seed", type=int, default=2023)
    p.add_argument("--dump-points", help="write per-point terms of the finest level to CSV")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("transform", help="tabulate the exponential bridge over a grid")
    p.add_argument("scenario")
    p.add_argument("direction", choices=("forward", "backward"))
    p.add_argument("--grid", help="counts like 9x7")
    p.add_argument("--hermite", type=int, default=2, help="companion polynomial degree for forward")
    p.add_argument("--out")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("special", help="evaluate a special function")
    fsub = p.add_subparsers(dest="function", required=True)
    q = fsub.add_parser("ml")
    q.add_argument("--beta", type=float, required=True)
    q.add_argument("--z", type=float, required=True)
    q.add_argument("--out")
    q.set_defaults(func=cmd_special)
    q = fsub.add_parser("hermite")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--f", type=float, required=True)
    q.add_argument("--h", type=float, required=True)
    q.add_argument("--out")
    q.set_defaults(func=cmd_special)
    q = fsub.add_parser("kernel")
    q.add_argument("--eta", type=float, required=True)
    q.add_argument("--t", type=float, required=True)
    q.add_argument("--t0", type=float, default=-1.0)
    q.add_argument("--rel-tol", type=float, default=1e-8, dest="rel_tol")
    q.add_argument("--out")
    q.set_defaults(func=cmd_special)

    p = sub.add_parser("sweep", help="refinement study for a named solution")
    p.add_argument("scenario")
    p.add_argument("--levels", type=int, default=3)
    p.add_argument("--solution", help="solution label (default: the headline one)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except OperatorBurgersError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CHECK_FAILED


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
