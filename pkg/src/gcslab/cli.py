"""Command-line driver.

Subcommands: wigner (frame export), negativity, qfi (single-point queries),
scan (evolution or max-over-tau sweeps), werner (mixture sweeps) and fig
(canned reproductions of the four figure datasets).

Exit codes: 0 success, 1 usage or configuration error, 2 numerical
convergence failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import replace

from .errors import (ConfigError, ConvergenceError, DomainError,
                     NumericalConsistencyError, SeriesOverflowError)
from .fock import GCSParams, auto_cutoff, make_gcs
from .metrology import cramer_rao, normalized_qfi, qfi_max
from .scan import (ScanSpec, WernerScanSpec, export_wigner_frames,
                   parse_config, scan_evolution, scan_max_over_tau,
                   scan_werner, write_result)
from .wigner import (PhaseGrid, _nyquist_points, negativity,
                     normalized_negativity)

# tau windows, calibrated at nbar = 10, wide enough to contain the evolution
# maxima (for eps < 1 these sit far beyond the display window; the Fisher
# information peaks later still, so it gets its own windows).
_NEG_MAX_RANGES = {0.0: 2.0 * math.pi, 0.5: 200.0, 1.0: 2.0 * math.pi,
                   1.5: 6.4, 2.0: 2.0 * math.pi, 3.0: 2.0 * math.pi}
_QFI_MAX_RANGES = {0.0: 2.0 * math.pi, 0.5: 1200.0, 1.0: 2.0 * math.pi,
                   1.5: 20.0, 2.0: 2.0 * math.pi, 3.0: 2.0 * math.pi}
_FIG2_EPS = (0.0, 0.5, 1.0, 1.5, 2.0, 3.0)
_FIG4_EPS = (0.5, 1.5, 2.0, 3.0)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _add_common(p):
    p.add_argument("--alpha-sq", type=float, default=None, help="mean photon number")
    p.add_argument("--epsilon", type=float, action="append", default=None,
                   help="nonlinearity exponent (repeatable)")
    p.add_argument("--cutoff", type=int, default=None,
                   help="Fock cutoff (default: automatic)")
    p.add_argument("--rel-tol", type=float, default=None,
                   help="negativity convergence tolerance")
    p.add_argument("--threads", type=int, default=None, help="worker threads")
    p.add_argument("--config", default=None, help="JSON configuration file")
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default=None)


def build_parser():
    top = _Parser(prog="gcs", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("wigner", parents=[], help="export sampled Wigner frames")
    _add_common(p)
    p.add_argument("--tau", type=float, action="append", default=None,
                   help="evolution parameter (repeatable; default 0)")
    p.add_argument("--grid-l", type=float, default=None, help="grid half width")
    p.add_argument("--grid-n", type=int, default=None, help="points per axis")

    p = sub.add_parser("negativity", help="negativity of one state")
    _add_common(p)
    p.add_argument("--tau", type=float, default=0.0)

    p = sub.add_parser("qfi", help="displacement Fisher information of one state")
    _add_common(p)
    p.add_argument("--tau", type=float, default=0.0)

    p = sub.add_parser("scan", help="sweep (epsilon, tau)")
    _add_common(p)
    p.add_argument("--tau-start", type=float, default=None)
    p.add_argument("--tau-stop", type=float, default=None)
    p.add_argument("--tau-count", type=int, default=None)
    p.add_argument("--quantity", choices=("negativity", "qfi", "both"), default=None)
    p.add_argument("--rescale", action="store_true", default=None)
    p.add_argument("--max", action="store_true", default=False,
                   help="report per-epsilon maxima instead of full rows")
    p.add_argument("--refine-count", type=int, default=None)

    p = sub.add_parser("werner", help="Werner-mixture sweep over p")
    _add_common(p)
    p.add_argument("--tau-start", type=float, default=None)
    p.add_argument("--tau-stop", type=float, default=None)
    p.add_argument("--tau-count", type=int, default=None)
    p.add_argument("--p-count", type=int, default=None,
                   help="uniform p grid size on [0, 1] (default 11)")

    p = sub.add_parser("fig", help="regenerate figure datasets")
    _add_common(p)
    p.add_argument("--which", type=int, choices=(1, 2, 3, 4), required=True)
    p.add_argument("--out-dir", default=".", help="directory for output files")
    p.add_argument("--tau-count", type=int, default=None)
    p.add_argument("--refine-count", type=int, default=None)
    return top


def _spec_from_args(args, *, need_tau_grid, default_quantity="both"):
    """Build a ScanSpec from --config plus explicit flag overrides."""
    if args.config is not None:
        spec = parse_config(args.config)
    else:
        if args.alpha_sq is None or not args.epsilon:
            raise ConfigError("either --config or both --alpha-sq and --epsilon are required")
        tau_grid = None
        if getattr(args, "tau_stop", None) is not None:
            tau_grid = (args.tau_start if args.tau_start is not None else 0.0,
                        args.tau_stop,
                        args.tau_count if args.tau_count is not None else 400)
        if need_tau_grid and tau_grid is None:
            raise ConfigError("--tau-stop (with optional --tau-start/--tau-count) is required")
        spec = ScanSpec(alpha_sq=args.alpha_sq, epsilons=tuple(args.epsilon),
                        tau_grid=tau_grid, quantity=default_quantity)
    overrides = {}
    for attr, key in (("alpha_sq", "alpha_sq"), ("cutoff", "cutoff"),
                      ("rel_tol", "rel_tol"), ("threads", "threads"),
                      ("out", "out"), ("format", "fmt")):
        v = getattr(args, attr, None)
        if v is not None:
            overrides[key] = v
    if getattr(args, "epsilon", None) and args.config is not None:
        overrides["epsilons"] = tuple(args.epsilon)
    for attr, key in (("quantity", "quantity"), ("rescale", "rescale"),
                      ("refine_count", "refine_count")):
        v = getattr(args, attr, None)
        if v is not None:
            overrides[key] = v
    if overrides:
        spec = replace(spec, **overrides)
    return spec


def _cmd_wigner(args):
    if args.alpha_sq is None or not args.epsilon:
        raise ConfigError("--alpha-sq and --epsilon are required")
    taus = args.tau if args.tau else [0.0]
    cutoff = args.cutoff if args.cutoff is not None else auto_cutoff(args.alpha_sq, 1e-15)
    L = args.grid_l if args.grid_l is not None else (
        math.sqrt(args.alpha_sq) + 5.0 + 0.5 * math.sqrt(max(cutoff, 1)))
    n = args.grid_n if args.grid_n is not None else _nyquist_points(L, cutoff)
    grid = PhaseGrid(L, n, n)
    out = args.out if args.out is not None else "."
    fmt = args.format or "json"
    for eps in args.epsilon:
        paths = export_wigner_frames(args.alpha_sq, eps, taus, grid, out, fmt)
        for pth in paths:
            print(pth)
    return 0


def _cmd_negativity(args):
    if args.alpha_sq is None or not args.epsilon:
        raise ConfigError("--alpha-sq and --epsilon are required")
    rel_tol = args.rel_tol if args.rel_tol is not None else 1e-3
    cutoff = args.cutoff if args.cutoff is not None else auto_cutoff(args.alpha_sq, 1e-15)
    for eps in args.epsilon:
        state = make_gcs(GCSParams(math.sqrt(args.alpha_sq), eps, args.tau), cutoff)
        raw = negativity(state, rel_tol)
        norm = normalized_negativity(state, args.alpha_sq, rel_tol)
        print(f"epsilon={eps:g} tau={args.tau:g} negativity={raw:.10g} "
              f"normalized={norm:.10g}")
    return 0


def _cmd_qfi(args):
    if args.alpha_sq is None or not args.epsilon:
        raise ConfigError("--alpha-sq and --epsilon are required")
    cutoff = args.cutoff if args.cutoff is not None else auto_cutoff(args.alpha_sq, 1e-15)
    for eps in args.epsilon:
        state = make_gcs(GCSParams(math.sqrt(args.alpha_sq), eps, args.tau), cutoff)
        rep = qfi_max(state)
        print(f"epsilon={eps:g} tau={args.tau:g} qfi={rep.qfi:.10g} "
              f"variance={rep.variance:.10g} best_angle={rep.best_angle:.10g} "
              f"degenerate={rep.degenerate} "
              f"normalized={normalized_qfi(state, args.alpha_sq):.10g} "
              f"cramer_rao={cramer_rao(rep.qfi, args.alpha_sq):.10g}")
    return 0


def _cmd_scan(args):
    spec = _spec_from_args(args, need_tau_grid=not args.max)
    result = scan_max_over_tau(spec) if args.max else scan_evolution(spec)
    write_result(result, spec.out, spec.fmt)
    print(f"# wall_time_s = {result.wall_time_s:.3f}", file=sys.stderr)
    return 0


def _cmd_werner(args):
    spec = _spec_from_args(args, need_tau_grid=False)
    if spec.werner is None:
        p_count = args.p_count if args.p_count is not None else 11
        p_grid = tuple(round(k / (p_count - 1), 12) for k in range(p_count))
        spec = replace(spec, werner=WernerScanSpec(p_grid=p_grid))
    result = scan_werner(spec)
    write_result(result, spec.out, spec.fmt)
    print(f"# wall_time_s = {result.wall_time_s:.3f}", file=sys.stderr)
    return 0


def _fig_ranges(epsilons, quantity="negativity"):
    table = _QFI_MAX_RANGES if quantity == "qfi" else _NEG_MAX_RANGES
    out = {}
    for eps in epsilons:
        if eps in table:
            out[eps] = table[eps]
        elif float(eps).is_integer():
            out[eps] = 2.0 * math.pi
        elif eps < 1.0:
            out[eps] = table[0.5]
        else:
            out[eps] = 2.0 * math.pi * math.exp(-eps * (eps - 1.0)) * 4.0
    return out


def _cmd_fig(args):
    out_dir = args.out_dir
    os.makedirs(out_dir, exist_ok=True)
    fmt = args.format or "csv"
    threads = args.threads if args.threads is not None else 1
    alpha_sq = args.alpha_sq if args.alpha_sq is not None else (
        50.0 if args.which == 1 else 10.0)
    rel_tol = args.rel_tol if args.rel_tol is not None else 1e-3
    refine_tol = min(rel_tol, 1e-4)
    written = []

    if args.which == 1:
        cutoff = args.cutoff if args.cutoff is not None else auto_cutoff(alpha_sq, 1e-12)
        L = math.sqrt(alpha_sq) + 5.0 + 0.5 * math.sqrt(max(cutoff, 1))
        grid = PhaseGrid(L, _nyquist_points(L, cutoff), _nyquist_points(L, cutoff))
        # times chosen so the middle and late frames carry clear negativity:
        # the eps = 0.5 dispersion rate falls off as 1/nbar^{3/2}, so its
        # structure forms at much larger tau than the quarter-period cat
        frame_taus = {0.5: (0.0, 80.0, 320.0), 2.0: (0.0, math.pi / 6.0, math.pi / 2.0)}
        for eps, taus in frame_taus.items():
            written += export_wigner_frames(alpha_sq, eps, taus, grid, out_dir, "json")
    else:
        epsilons = tuple(args.epsilon) if args.epsilon else (
            _FIG4_EPS if args.which == 4 else _FIG2_EPS)
        count = args.tau_count if args.tau_count is not None else (
            96 if args.which == 4 else 400)
        refine = args.refine_count if args.refine_count is not None else 50
        quantity = "qfi" if args.which == 3 else "negativity"
        base = ScanSpec(alpha_sq=alpha_sq, epsilons=epsilons, tau_grid=None,
                        quantity=quantity, rel_tol=rel_tol,
                        refine_rel_tol=refine_tol, refine_count=refine,
                        threads=threads, cutoff=args.cutoff, fmt=fmt)
        if args.which in (2, 3):
            evo = replace(base, rescale=True, tau_grid=None)
            res = _with_auto_grid(evo, count)
            written.append(write_result(res, os.path.join(
                out_dir, f"fig{args.which}_evolution.{fmt}"), fmt))
            ranges = _fig_ranges(epsilons, quantity)
            max_rows = []
            for eps in epsilons:
                spec_e = replace(base, epsilons=(eps,),
                                 tau_grid=(0.0, ranges[eps], count))
                max_rows.append(scan_max_over_tau(spec_e))
            merged = max_rows[0]
            for extra in max_rows[1:]:
                merged.rows.extend(extra.rows)
                merged.metadata["tau_grids"].update(extra.metadata["tau_grids"])
            written.append(write_result(merged, os.path.join(
                out_dir, f"fig{args.which}_max.{fmt}"), fmt))
        else:
            ranges = _fig_ranges(epsilons)
            parts = []
            for eps in epsilons:
                spec_e = replace(base, epsilons=(eps,),
                                 tau_grid=(0.0, ranges[eps], count),
                                 werner=WernerScanSpec())
                parts.append(scan_werner(spec_e))
            merged = parts[0]
            seen = {(r["p"], r["quantity"]) for r in merged.rows
                    if r["quantity"] == "atomic_purity"}
            for extra in parts[1:]:
                for r in extra.rows:
                    if r["quantity"] == "atomic_purity" and (r["p"], r["quantity"]) in seen:
                        continue
                    merged.rows.append(r)
                merged.metadata["tau_grids"].update(extra.metadata["tau_grids"])
            written.append(write_result(merged, os.path.join(
                out_dir, f"fig4_werner.{fmt}"), fmt))
    for pth in written:
        print(pth)
    return 0


def _with_auto_grid(spec, count):
    """Evolution preset: per-epsilon automatic display windows need per-epsilon
    grids, so run one epsilon at a time on the auto range with the requested
    count and merge."""
    from .scan import auto_tau_range, scan_evolution
    parts = []
    for eps in spec.epsilons:
        stop = auto_tau_range(eps)[1]
        parts.append(scan_evolution(replace(spec, epsilons=(eps,),
                                            tau_grid=(stop / count, stop, count))))
    merged = parts[0]
    for extra in parts[1:]:
        merged.rows.extend(extra.rows)
        merged.metadata["tau_grids"].update(extra.metadata["tau_grids"])
    return merged


_COMMANDS = {
    "wigner": _cmd_wigner,
    "negativity": _cmd_negativity,
    "qfi": _cmd_qfi,
    "scan": _cmd_scan,
    "werner": _cmd_werner,
    "fig": _cmd_fig,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"gcs: configuration error: {exc}", file=sys.stderr)
        return 1
    except DomainError as exc:
        print(f"gcs: invalid argument: {exc}", file=sys.stderr)
        return 1
    except (ConvergenceError, NumericalConsistencyError, SeriesOverflowError) as exc:
        print(f"gcs: numerical failure: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"gcs: i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
