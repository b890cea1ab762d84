"""Command-line front end.

    entquasi analyze   --zeta 0.62 --sigma 2 --dim 2 [--out report.json] [--plot]
    entquasi sweep     --zeta 0.62 --sigma 0,0.5,2,5 --dim 2 [--out sweep.csv]
    entquasi phase-dist --sigma 2 --samples 512 [--out phase.csv]
    entquasi build     --zeta 0.62 --sigma 2 --dim 3 --out coeffs.csv

Exit codes: 0 success, 1 error, 2 decomposition flagged inexact, 64 usage.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import report as rpt
from .errors import ConsistencyError
from .quasiprob import EXACT_TOL, RANK_CUTOFF, SELECTIONS, analyze
from .solver import DEFAULT_MAX_DIM
from .state import (
    apply_dephasing,
    build_tmsv,
    load_matrix,
    matrix_to_csv,
    matrix_to_json,
    phase_grid,
    zeta_from_db,
)

log = logging.getLogger("entquasi")

EXIT_OK, EXIT_ERROR, EXIT_INEXACT, EXIT_USAGE = 0, 1, 2, 64
EMIT_CHOICES = ("solutions", "quasiprob", "phase_dist", "report")
DEFAULT_ZETA = 0.62
DEFAULT_DIM = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    zeta: float | None = None
    noise_db: float | None = None
    input_path: str | None = None
    sigma: list = field(default_factory=lambda: [0.0])
    dim: int | None = None
    output_path: str | None = None
    format: str = "json"
    emit: set = field(default_factory=set)
    residual_tol: float = EXACT_TOL
    rank_cutoff: float = RANK_CUTOFF
    max_dim: int = DEFAULT_MAX_DIM
    plot: bool = False
    samples: int = 512
    selection: str = "least_negative"

    def __post_init__(self):
        given = [x is not None for x in (self.zeta, self.noise_db, self.input_path)]
        if sum(given) > 1:
            raise UsageError("--zeta, --db and --input are mutually exclusive")
        if not any(given):
            self.zeta = DEFAULT_ZETA
        if self.dim is not None and not 1 <= self.dim <= self.max_dim:
            raise UsageError(f"--dim must lie in [1, {self.max_dim}]")
        if any(s < 0 for s in self.sigma):
            raise UsageError("--sigma values must be non-negative")
        bad = set(self.emit) - set(EMIT_CHOICES)
        if bad:
            raise UsageError(f"unknown --emit item(s): {', '.join(sorted(bad))}")

    def base_state(self):
        if self.input_path is not None:
            state = load_matrix(self.input_path)
            return state if self.dim is None else state.truncate(self.dim)
        zeta = self.zeta if self.zeta is not None else zeta_from_db(self.noise_db)
        return build_tmsv(zeta, self.dim or DEFAULT_DIM)

    def companion(self, suffix):
        if self.output_path is None:
            raise UsageError("--out is required to write additional files")
        out = Path(self.output_path)
        return out.with_name(out.stem + suffix)


def _sigma_list(text):
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid sigma list {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty sigma list")
    return vals


def _emit_list(text):
    return {t.strip() for t in text.split(",") if t.strip()}


def _write(path, text):
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def cmd_analyze(cfg):
    if len(cfg.sigma) != 1:
        raise UsageError("analyze takes a single --sigma value; use sweep for lists")
    sigma = cfg.sigma[0]
    state = apply_dephasing(cfg.base_state(), sigma)
    result = analyze(state, max_dim=cfg.max_dim, rank_cutoff=cfg.rank_cutoff, exact_tol=cfg.residual_tol,
                     selection=cfg.selection)

    primary = "report" if cfg.format == "json" else "quasiprob"
    texts = {
        "report": lambda: rpt.report_json(result),
        "quasiprob": lambda: rpt.quasiprob_csv(result.solutions, result.weights),
        "solutions": lambda: rpt.solutions_json(result.solutions),
    }
    suffixes = {"report": ".report.json", "quasiprob": ".quasiprob.csv", "solutions": ".solutions.json"}
    _write(cfg.output_path, texts[primary]())
    for item in sorted(cfg.emit - {primary}):
        if item == "phase_dist":
            if sigma > 0:
                phi, pdf = phase_grid(sigma, cfg.samples)
                _write(cfg.companion(".phase.csv"), rpt.phase_csv(phi, pdf))
            else:
                log.warning("sigma=0 is a delta distribution; phase_dist not written")
        else:
            _write(cfg.companion(suffixes[item]), texts[item]())
    if cfg.plot:
        from .plotting import plot_quasiprob

        meta = state.meta
        title = f"d={state.dim}" + (f", zeta={meta.zeta:g}" if meta.zeta else "") + f", sigma={sigma:g}"
        plot_quasiprob(result.weights, cfg.companion(".png"), title=title)

    if result.inexact:
        log.warning(
            "decomposition inexact: gram residual %.3g, epsilon %.3g",
            result.quasiprob.residual,
            result.reconstruction.epsilon,
        )
        return EXIT_INEXACT
    return EXIT_OK


def sweep_rows(cfg):
    """(sigma, min_weight, epsilon, ppt_min_eig, inexact) per sigma, input order."""
    base = cfg.base_state()
    rows = []
    for sigma in cfg.sigma:
        r = analyze(apply_dephasing(base, sigma), max_dim=cfg.max_dim, rank_cutoff=cfg.rank_cutoff,
                    exact_tol=cfg.residual_tol, selection=cfg.selection)
        rows.append((sigma, r.quasiprob.min_weight, r.reconstruction.epsilon, r.ppt["min_eigenvalue"], r.inexact))
    return rows


def cmd_sweep(cfg):
    rows = sweep_rows(cfg)
    table = [row[:4] for row in rows]
    if cfg.format == "json":
        text = json.dumps([dict(zip(rpt.SWEEP_HEADER, row)) for row in table], indent=2) + "\n"
    else:
        text = rpt.sweep_csv(table)
    _write(cfg.output_path, text)
    if cfg.plot:
        from .plotting import plot_sweep

        plot_sweep([r[0] for r in rows], [r[1] for r in rows], cfg.companion(".png"))
    return EXIT_INEXACT if any(r[4] for r in rows) else EXIT_OK


def cmd_phase_dist(cfg):
    if len(cfg.sigma) != 1:
        raise UsageError("phase-dist takes a single --sigma value")
    phi, pdf = phase_grid(cfg.sigma[0], cfg.samples)
    _write(cfg.output_path, rpt.phase_csv(phi, pdf))
    if cfg.plot:
        from .plotting import plot_phase_dist

        plot_phase_dist(phi, pdf, cfg.companion(".png"), sigma=cfg.sigma[0])
    return EXIT_OK


def cmd_build(cfg):
    if len(cfg.sigma) != 1:
        raise UsageError("build takes a single --sigma value")
    state = apply_dephasing(cfg.base_state(), cfg.sigma[0])
    _write(cfg.output_path, matrix_to_json(state) if cfg.format == "json" else matrix_to_csv(state))
    return EXIT_OK


COMMANDS = {"analyze": cmd_analyze, "sweep": cmd_sweep, "phase-dist": cmd_phase_dist, "build": cmd_build}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--zeta", type=float, help=f"squeezing parameter in (0,1) (default {DEFAULT_ZETA})")
    src.add_argument("--db", type=float, dest="noise_db", help="squeezing as noise reduction in dB")
    src.add_argument("--input", dest="input_path", help="coefficient matrix file (.csv or .json)")
    common.add_argument("--sigma", type=_sigma_list, default=[0.0], help="dephasing width(s), comma separated")
    common.add_argument("--dim", type=int, help=f"truncation dimension (default {DEFAULT_DIM})")
    common.add_argument("--out", dest="output_path", help="output file (default stdout)")
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--emit", type=_emit_list, default=set(),
                        help=f"extra outputs for analyze, any of {','.join(EMIT_CHOICES)}")
    common.add_argument("--residual-tol", type=float, default=EXACT_TOL)
    common.add_argument("--rank-cutoff", type=float, default=RANK_CUTOFF)
    common.add_argument("--max-dim", type=int, default=DEFAULT_MAX_DIM)
    common.add_argument("--selection", choices=SELECTIONS, default="least_negative",
                        help="weight choice when the Gram matrix is singular")
    common.add_argument("--samples", type=int, default=512, help="grid size for phase-dist")
    common.add_argument("--plot", action="store_true", help="render a PNG next to --out")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="entquasi", description="Entanglement quasiprobabilities of dephased TMSV states.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("analyze", parents=[common], help="solve SE equations and Gram system for one state")
    sub.add_parser("sweep", parents=[common], help="minimum weight versus dephasing")
    sub.add_parser("phase-dist", parents=[common], help="tabulate the wrapped-Gaussian phase density")
    sub.add_parser("build", parents=[common], help="write the coefficient matrix")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    default_fmt = "csv" if args.command in ("sweep", "phase-dist") else "json"
    try:
        cfg = RunConfig(
            zeta=args.zeta,
            noise_db=args.noise_db,
            input_path=args.input_path,
            sigma=args.sigma,
            dim=args.dim,
            output_path=args.output_path,
            format=args.format or default_fmt,
            emit=args.emit,
            residual_tol=args.residual_tol,
            rank_cutoff=args.rank_cutoff,
            max_dim=args.max_dim,
            plot=args.plot,
            samples=args.samples,
            selection=args.selection,
        )
        primary = "report" if cfg.format == "json" else "quasiprob"
        if cfg.plot or cfg.emit - {primary}:
            cfg.companion("")
        return COMMANDS[args.command](cfg)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"entquasi: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConsistencyError:
        raise
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"entquasi: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
