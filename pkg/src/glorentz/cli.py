"""Command-line entry point: ``glorentz <command> [options]``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import grid
from .besov import BesovParams, besov_seminorm, block_norms, class_norm
from .config import ConfigError, ExperimentConfig, parse_config
from .errors import DegenerateFunctionError, DomainError, PreconditionError, ResolutionError
from .norms import LorentzParams, classical_lorentz_norm, lebesgue_norm, lorentz_norm_aniso
from .rearrange import decreasing, iterated_rearrangement
from .report import fmt as _fmt
from .verify.approx import best_approx_refine
from .verify.registry import CHECKS, run_check
from .verify.theorems import residual

EXIT_OK, EXIT_FLAGS, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3
INPUT_ERRORS = (DomainError, ResolutionError, PreconditionError, DegenerateFunctionError)

log = logging.getLogger("glorentz")


def _csv_list(conv):
    def parse(text: str):
        return [conv(x) for x in text.split(",") if x.strip()]

    return parse


def _load_config(args) -> ExperimentConfig:
    if args.config:
        return parse_config(Path(args.config).read_text(), seed=args.seed)
    cfg = ExperimentConfig()
    cfg.seed = args.seed
    return cfg


def _merge_flags(cfg: ExperimentConfig, args) -> ExperimentConfig:
    """Command-line options override config values."""
    for key in ("dims", "phi", "eta", "psi", "tau", "r", "theta", "gamma", "iters"):
        val = getattr(args, key, None)
        if val is not None:
            setattr(cfg, key, val)
    if getattr(args, "dims", None):
        cfg.m = len(args.dims)
    return cfg


def _function(args, cfg) -> grid.GridFunction:
    source = args.function or (cfg.functions[0] if cfg.functions else None)
    if source is None:
        raise DomainError("no input function (use --function)")
    return grid.load_function(source, tuple(cfg.dims) if cfg.dims else None)


def _emit(args, text: str, name: str) -> None:
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / name).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_norm(args, cfg) -> int:
    f = _function(args, cfg)
    if args.kind == "lebesgue":
        value = lebesgue_norm(f, args.q)
    elif args.kind == "classical":
        value = classical_lorentz_norm(f, args.q, cfg.tau[0])
    else:
        if not cfg.psi or not cfg.tau:
            raise DomainError("lorentz norm needs --psi and --tau")
        value = lorentz_norm_aniso(f, LorentzParams.parse(cfg.psi, cfg.tau))
    print(_fmt(value))
    return EXIT_OK


def cmd_rearrange(args, cfg) -> int:
    f = _function(args, cfg)
    if args.iterated:
        values = iterated_rearrangement(f).values.ravel(order="F")
    else:
        values = decreasing(f.abs())
    _emit(args, "".join(_fmt(float(v)) + "\n" for v in values), "rearrangement.txt")
    return EXIT_OK


def cmd_blocks(args, cfg) -> int:
    f = _function(args, cfg)
    lines = ["block,size,energy,norm"]
    space = LorentzParams.parse(cfg.phi, cfg.eta) if cfg.phi and cfg.eta else None
    norms = block_norms(f, space) if space else {}
    for s, b in grid.block_decomposition(grid.analyze(f)).items():
        energy = float(np.mean(np.abs(b.samples) ** 2))
        norm = _fmt(norms[s]) if space else ""
        lines.append(f"{' '.join(map(str, s))},{grid.block_size(s)},{_fmt(energy)},{norm}")
    _emit(args, "\n".join(lines) + "\n", "blocks.csv")
    return EXIT_OK


def cmd_cross(args, cfg) -> int:
    if not cfg.gamma or args.n is None:
        raise DomainError("cross needs --gamma and --n")
    cross = grid.hyperbolic_cross(cfg.gamma, args.n)
    lines = [f"# blocks={len(cross.block_list)} frequencies={len(cross)}"]
    lines += [" ".join(map(str, s)) for s in cross.block_list]
    _emit(args, "\n".join(lines) + "\n", "cross.txt")
    return EXIT_OK


def cmd_besov(args, cfg) -> int:
    f = _function(args, cfg)
    params = BesovParams(LorentzParams.parse(cfg.phi, cfg.eta), cfg.r, cfg.theta)
    norms = block_norms(f, params.space)
    print(f"seminorm,{_fmt(besov_seminorm(f, params, norms))}")
    print(f"class_norm,{_fmt(class_norm(f, params, norms))}")
    return EXIT_OK


def cmd_approx(args, cfg) -> int:
    f = _function(args, cfg)
    if not cfg.gamma or args.n is None:
        raise DomainError("approx needs --gamma and --n")
    target = LorentzParams.parse(cfg.psi, cfg.tau)
    cross = grid.hyperbolic_cross(cfg.gamma, args.n, f.m)
    partial = lorentz_norm_aniso(residual(f, cross), target)
    history: list[float] = []
    _, err = best_approx_refine(f, cross, target, cfg.iters, history=history)
    print(f"partial_sum_error,{_fmt(partial)}")
    print(f"refined_error,{_fmt(err)}")
    return EXIT_OK


def cmd_verify(args, cfg) -> int:
    checks = [args.check_id] if args.check_id else cfg.checks
    out = Path(args.out or cfg.out)
    code = EXIT_OK
    for check_id in checks:
        if check_id not in CHECKS:
            raise DomainError(f"unknown check {check_id!r}; known: {', '.join(sorted(CHECKS))}")
    for check_id in checks:
        rep = run_check(check_id, cfg, args.threads)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{check_id}.csv").write_text(rep.to_csv())
        log.info("%s: %d rows, max ratio %s", check_id, len(rep.rows), _fmt(rep.max_ratio))
        for msg in rep.precondition_flags:
            log.warning("%s: %s", check_id, msg)
            code = EXIT_FLAGS
    return code


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    # SUPPRESS keeps a subcommand from resetting values given before it.
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="key = value experiment file")
    common.add_argument("--out", help="output directory (stdout when omitted, except for verify)")
    common.add_argument("--seed", type=int, help="overrides the config seed")
    common.add_argument("--threads", type=int, help="concurrent corpus cases (default 1)")
    common.add_argument("-v", "--verbose", action="store_true")

    params = argparse.ArgumentParser(add_help=False)
    params.add_argument("--function", help="grid file or gen:... generator spec")
    params.add_argument("--dims", type=_csv_list(int))
    params.add_argument("--phi", type=_csv_list(str), help="space Φ-functions, e.g. pow:0.7")
    params.add_argument("--eta", type=_csv_list(float))
    params.add_argument("--psi", type=_csv_list(str), help="target Φ-functions")
    params.add_argument("--tau", type=_csv_list(float))
    params.add_argument("--r", type=_csv_list(float))
    params.add_argument("--theta", type=_csv_list(float))
    params.add_argument("--gamma", type=_csv_list(float))

    parser = argparse.ArgumentParser(prog="glorentz", description=__doc__, parents=[common])
    parser.set_defaults(config=None, out=None, seed=None, threads=1, verbose=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("norm", parents=[common, params], help="norm of a grid function")
    p.add_argument("--kind", choices=["lorentz", "lebesgue", "classical"], default="lorentz")
    p.add_argument("--q", type=float, default=2.0)
    p.set_defaults(run=cmd_norm)

    p = sub.add_parser("rearrange", parents=[common, params], help="non-increasing rearrangement")
    p.add_argument("--iterated", action="store_true", help="axis-by-axis rearrangement")
    p.set_defaults(run=cmd_rearrange)

    p = sub.add_parser("blocks", parents=[common, params], help="dyadic block decomposition")
    p.set_defaults(run=cmd_blocks)

    p = sub.add_parser("cross", parents=[common, params], help="blocks of a hyperbolic cross")
    p.add_argument("--n", type=float)
    p.set_defaults(run=cmd_cross)

    p = sub.add_parser("besov", parents=[common, params], help="Besov seminorm and class norm")
    p.set_defaults(run=cmd_besov)

    p = sub.add_parser("approx", parents=[common, params], help="best approximation from a cross")
    p.add_argument("--n", type=float)
    p.add_argument("--iters", type=int)
    p.set_defaults(run=cmd_approx)

    p = sub.add_parser("verify", parents=[common], help="run a verification check")
    p.add_argument("check_id", nargs="?", help=f"one of: {', '.join(sorted(CHECKS))}")
    p.set_defaults(run=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = _merge_flags(_load_config(args), args)
        return args.run(args, cfg)
    except ConfigError as exc:
        for line in exc.errors:
            print(f"config error: {line}", file=sys.stderr)
        return EXIT_USAGE
    except (*INPUT_ERRORS, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001 - last-resort exit code
        print(f"internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
