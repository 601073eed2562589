"""Command-line entry point ``groupcs``.

Every subcommand writes JSON (or CSV) through :mod:`groupcs.formats`, so the
same inputs and seed always produce byte-identical files. Exit status is 0 on
success, 1 when an experiment records a bound violation, 2 for usage or
input errors.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from . import formats
from .bounds import bound_coefficients, conventional_constants, with_bounds
from .constants import NormConstants, closed_form_constants, estimate_c_d
from .decomposition import optimal_decomposition
from .errors import GroupCSError, UnsupportedNormForClosedForm
from .grip import grip_constant, rip_constant
from .group_model import DEFAULT_ENUMERATION_CAP, load_partition
from .harness import COLUMNS, REPORT_VERSION, ExperimentConfig, reproduce_section6_table, run_experiment
from .norms import parse_norm
from .sampling import GAUSSIAN, RADEMACHER, generate_matrix, sampling_plan
from .solver import RecoveryProblem, SolverOptions, recover

PROFILES = {"gaussian": GAUSSIAN, "rademacher": RADEMACHER}


def _emit(obj, out) -> None:
    text = formats.dumps(obj)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _partition_and_norm(args):
    return load_partition(args.partition), parse_norm(args.norm)


def cmd_index(args) -> int:
    p, spec = _partition_and_norm(args)
    x = formats.read_vector_csv(args.x)
    dec = optimal_decomposition(x, spec, p, args.cap)
    _emit(dec.to_dict(), args.out)
    return 0


def _constants_for(spec, p, estimate: bool, samples: int, seed: int) -> tuple[NormConstants, str]:
    try:
        if not estimate:
            return closed_form_constants(spec, p), "closed_form"
    except UnsupportedNormForClosedForm:
        pass
    c, d = estimate_c_d(spec, p, samples=samples, seed=seed)
    # Sampled ratios only bracket c and d from inside; f is taken as 1.
    return NormConstants(1.0, 1.0, c, d, 1.0), "estimated"


def cmd_constants(args) -> int:
    p, spec = _partition_and_norm(args)
    consts, how = _constants_for(spec, p, args.estimate, args.samples, args.seed)
    _emit({"norm": spec.label, "source": how, **consts.to_dict()}, args.out)
    return 0


def cmd_grip(args) -> int:
    A = formats.read_matrix_csv(args.matrix)
    p = load_partition(args.partition)
    order = p.k if args.order == "k" else 2 * p.k
    rep = grip_constant(A, p, order, args.cap, keep_bounds=args.per_set)
    out = rep.to_dict()
    if args.rip:
        out["rip_delta"] = rip_constant(A, order, args.cap).delta
    _emit(out, args.out)
    return 0


def cmd_bounds(args) -> int:
    if args.conventional_k is not None:
        consts, label = conventional_constants(args.conventional_k), "l1"
    else:
        if not args.partition:
            raise SystemExit("bounds needs --partition or --conventional-k")
        p, spec = _partition_and_norm(args)
        consts, _ = _constants_for(spec, p, False, 0, 0)
        label = spec.label
    if args.gamma != 1.0:
        consts = replace(consts, gamma=args.gamma)
    rep = bound_coefficients(consts, args.delta2k)
    if rep.compressible and (args.sigma is not None or args.eps is not None):
        rep = with_bounds(rep, args.sigma or 0.0, args.eps or 0.0)
    _emit({"norm": label, **rep.to_dict()}, args.out)
    return 0


def cmd_samplesize(args) -> int:
    if args.partition:
        p = load_partition(args.partition)
        n, k, g, s_max = p.n, p.k, p.g, p.s_max
    else:
        if None in (args.n, args.k, args.g, args.s_max):
            raise SystemExit("samplesize needs --partition or all of --n --k --g --s-max")
        n, k, g, s_max = args.n, args.k, args.g, args.s_max
    plan = sampling_plan(n, k, g, s_max, args.delta, args.zeta, PROFILES[args.profile])
    _emit({"profile": args.profile, **plan.to_dict()}, args.out)
    return 0


def cmd_genmat(args) -> int:
    A = generate_matrix(args.m, args.n, args.seed, args.distribution)
    if args.out:
        formats.write_matrix_csv(args.out, A, header=not args.no_header)
    else:
        sys.stdout.write(f"{args.m},{args.n}\n" if not args.no_header else "")
        sys.stdout.write("".join(",".join(formats.fmt(v) for v in row) + "\n" for row in A))
    return 0


def cmd_recover(args) -> int:
    A = formats.read_matrix_csv(args.matrix)
    y = formats.read_vector_csv(args.y)
    p, spec = _partition_and_norm(args)
    res = recover(RecoveryProblem(A, y, args.eps, spec, p),
                  SolverOptions(tau=args.tau, max_iters=args.max_iters, tol=args.tol))
    formats.write_vector_csv(args.out, res.x_hat)
    sidecar = args.diagnostics or str(Path(args.out).with_suffix(".json"))
    formats.write_json(sidecar, {"norm": spec.label, "eps": args.eps, **res.diagnostics()})
    return 0


def cmd_experiment(args) -> int:
    cfg = ExperimentConfig.load(args.config) if args.config else ExperimentConfig()
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    if args.trials is not None:
        cfg = replace(cfg, trials=args.trials)
    rep = run_experiment(cfg)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    formats.write_rows_csv(out / "trials.csv", COLUMNS, rep.rows, version_line=f"# {REPORT_VERSION}")
    formats.write_json(out / "summary.json", rep.summary())
    agg = rep.aggregates()
    print(f"trials={agg['trials']} compressible={agg['compressible_trials']} "
          f"violations={agg['violation_count']} exact_rate={formats.fmt(agg['exact_recovery_rate'] or 0)}",
          file=sys.stderr)
    return 1 if rep.violation_count else 0


def cmd_repro(args) -> int:
    _emit(reproduce_section6_table(), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="groupcs", description="Group-sparse compressed sensing toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    def with_out(sp):
        sp.add_argument("--out", "-o", help="output file (default: stdout)")
        return sp

    def with_pn(sp, norm=True):
        sp.add_argument("--partition", required=True, help="JSON partition file (1-based)")
        if norm:
            sp.add_argument("--norm", default="gl", help="l1, gl, sgl:MU, JSON text or JSON file")
        return sp

    sp = with_out(with_pn(sub.add_parser("index", help="sparsity index and optimal decomposition")))
    sp.add_argument("--x", required=True, help="signal vector CSV")
    sp.add_argument("--cap", type=int, default=DEFAULT_ENUMERATION_CAP)
    sp.set_defaults(func=cmd_index)

    sp = with_out(with_pn(sub.add_parser("constants", help="norm-equivalence constants")))
    sp.add_argument("--estimate", action="store_true", help="sample c and d instead of the closed form")
    sp.add_argument("--samples", type=int, default=64)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_constants)

    sp = with_out(with_pn(sub.add_parser("grip", help="exact group restricted isometry constant"), norm=False))
    sp.add_argument("--matrix", required=True)
    sp.add_argument("--order", choices=["k", "2k"], default="2k")
    sp.add_argument("--rip", action="store_true", help="also report the classical constant")
    sp.add_argument("--per-set", action="store_true", help="include per-set eigenvalue bounds")
    sp.add_argument("--cap", type=int, default=DEFAULT_ENUMERATION_CAP)
    sp.set_defaults(func=cmd_grip)

    sp = with_out(sub.add_parser("bounds", help="compressibility threshold and D1..D4"))
    sp.add_argument("--partition")
    sp.add_argument("--norm", default="gl")
    sp.add_argument("--conventional-k", type=int, help="use l1 constants for k-sparsity")
    sp.add_argument("--delta2k", type=float, required=True)
    sp.add_argument("--gamma", type=float, default=1.0)
    sp.add_argument("--sigma", type=float)
    sp.add_argument("--eps", type=float)
    sp.set_defaults(func=cmd_bounds)

    sp = with_out(sub.add_parser("samplesize", help="measurement counts for RIP and GRIP"))
    sp.add_argument("--partition")
    sp.add_argument("--n", type=int)
    sp.add_argument("--k", type=int)
    sp.add_argument("--g", type=int)
    sp.add_argument("--s-max", type=int)
    sp.add_argument("--delta", type=float, required=True)
    sp.add_argument("--zeta", type=float, required=True)
    sp.add_argument("--profile", choices=sorted(PROFILES), default="gaussian")
    sp.set_defaults(func=cmd_samplesize)

    sp = with_out(sub.add_parser("genmat", help="random measurement matrix"))
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--distribution", choices=["gaussian", "rademacher"], default="gaussian")
    sp.add_argument("--no-header", action="store_true")
    sp.set_defaults(func=cmd_genmat)

    sp = with_pn(sub.add_parser("recover", help="solve min ||z||_P s.t. ||y - Az|| <= eps"))
    sp.add_argument("--matrix", required=True)
    sp.add_argument("--y", required=True)
    sp.add_argument("--eps", type=float, default=0.0)
    sp.add_argument("--out", "-o", required=True, help="x_hat CSV")
    sp.add_argument("--diagnostics", help="JSON sidecar (default: OUT with .json suffix)")
    sp.add_argument("--tau", type=float, default=1.0)
    sp.add_argument("--max-iters", type=int, default=20_000)
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.set_defaults(func=cmd_recover)

    sp = sub.add_parser("experiment", help="batch recovery experiment with bound checks")
    sp.add_argument("--config", help="JSON experiment config")
    sp.add_argument("--seed", type=int, help="overrides the config seed")
    sp.add_argument("--trials", type=int, help="overrides the config trial count")
    sp.add_argument("--out-dir", required=True)
    sp.set_defaults(func=cmd_experiment)

    sp = with_out(sub.add_parser("repro-sec6", help="sample sizes for the microarray-sized example"))
    sp.set_defaults(func=cmd_repro)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GroupCSError, ValueError, OSError) as exc:
        print(f"groupcs {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
