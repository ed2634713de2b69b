"""Parameter sweeps over (epsilon, tau, p) and figure-data export.

Scans compute normalized negativity and/or normalized Fisher information of
nonlinear-phase coherent states on tau grids, maximize over the evolution, and
sweep Werner mixtures.  Results are deterministic: tasks are computed
independently, collected by index, and written with fixed 17-significant-digit
formatting, so identical configurations give identical output files
independent of the worker count.
"""

from __future__ import annotations

import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from .ensembles import Ensemble, WernerSpec, atomic_purity, werner_weights
from .errors import ConfigError, ConvergenceError, DomainError
from .fock import GCSParams, auto_cutoff, make_gcs
from .metrology import normalized_qfi
from .wigner import fock_negativity, negativity_batch, _nyquist_points

_QUANTITIES = ("negativity", "qfi")


@dataclass(frozen=True)
class WernerScanSpec:
    """Werner block of a scan: mixture shape plus the p grid.

    tau_scale maps the scanned evolution parameter tau onto the per-eigenstate
    parameters tau_j = scale_j * tau, so any eigenvalue pattern is expressible.
    """

    d: int = 2
    c: tuple = (1.0 + 0j, 0j)
    tau_scale: tuple = (1.0, -1.0)
    p_grid: tuple = tuple(round(0.1 * k, 10) for k in range(11))

    def __post_init__(self):
        object.__setattr__(self, "c", tuple(complex(v) for v in self.c))
        object.__setattr__(self, "tau_scale", tuple(float(v) for v in self.tau_scale))
        object.__setattr__(self, "p_grid", tuple(float(v) for v in self.p_grid))
        if len(self.c) != self.d or len(self.tau_scale) != self.d:
            raise ConfigError("c and tau_scale must have length d", key="werner")
        if not self.p_grid:
            raise ConfigError("p_grid must be non-empty", key="werner.p_grid")
        for p in self.p_grid:
            if not (0.0 <= p <= 1.0):
                raise ConfigError(f"p={p} outside [0, 1]", key="werner.p_grid")


@dataclass(frozen=True)
class ScanSpec:
    """Validated description of one sweep.

    tau_grid is (start, stop, count) applied to every epsilon; None selects the
    automatic per-epsilon ranges of scan_max_over_tau.
    """

    alpha_sq: float
    epsilons: tuple
    tau_grid: tuple | None = None
    quantity: str = "both"
    rescale: bool = False
    cutoff: int | None = None
    rel_tol: float = 1e-3
    refine_count: int = 50
    refine_rel_tol: float | None = None
    threads: int = 1
    werner: WernerScanSpec | None = None
    out: str | None = None
    fmt: str = "csv"

    def __post_init__(self):
        if not (self.alpha_sq > 0 and math.isfinite(self.alpha_sq)):
            raise ConfigError("alpha_sq must be finite and > 0", key="alpha_sq")
        eps = tuple(float(e) for e in self.epsilons)
        if not eps:
            raise ConfigError("epsilons must be non-empty", key="epsilons")
        object.__setattr__(self, "epsilons", eps)
        if self.tau_grid is not None:
            tg = tuple(self.tau_grid)
            if len(tg) != 3:
                raise ConfigError("tau_grid must be [start, stop, count]", key="tau_grid")
            start, stop, count = float(tg[0]), float(tg[1]), int(tg[2])
            if not (start < stop):
                raise ConfigError("tau_grid start must be < stop", key="tau_grid")
            if count < 2:
                raise ConfigError("tau_grid count must be >= 2", key="tau_grid")
            object.__setattr__(self, "tau_grid", (start, stop, count))
        if self.quantity not in ("negativity", "qfi", "both"):
            raise ConfigError("quantity must be negativity, qfi or both", key="quantity")
        if not (0.0 < self.rel_tol <= 0.1):
            raise ConfigError("rel_tol must lie in (0, 0.1]", key="rel_tol")
        if self.refine_count < 0:
            raise ConfigError("refine_count must be >= 0", key="refine_count")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1", key="threads")
        if self.fmt not in ("csv", "json"):
            raise ConfigError("format must be csv or json", key="format")

    @property
    def quantities(self) -> tuple:
        return _QUANTITIES if self.quantity == "both" else (self.quantity,)

    @property
    def effective_cutoff(self) -> int:
        # deeper than the make_gcs recommendation: the Poisson tail amplitude
        # sqrt(tail) sets a negativity floor for linear evolutions, and scans
        # assert those sit below figure noise levels
        return self.cutoff if self.cutoff is not None else auto_cutoff(self.alpha_sq, 1e-15)

    @property
    def effective_refine_tol(self) -> float:
        return self.rel_tol if self.refine_rel_tol is None else self.refine_rel_tol


@dataclass
class ScanResult:
    columns: tuple
    rows: list
    metadata: dict
    wall_time_s: float = 0.0


def auto_tau_range(epsilon: float) -> tuple:
    """Default scan window: (0, 2 pi] for integer epsilon (exact periodicity),
    (0, 2 pi e^{-eps(eps-1)}] otherwise."""
    if float(epsilon).is_integer():
        return (0.0, 2.0 * math.pi)
    return (0.0, 2.0 * math.pi * math.exp(-epsilon * (epsilon - 1.0)))


def tau_values(spec: ScanSpec, epsilon: float):
    """Tau samples for one epsilon: the explicit grid if given, otherwise the
    automatic half-open range (0, stop], endpoint included, zero excluded."""
    if spec.tau_grid is not None:
        start, stop, count = spec.tau_grid
        return np.linspace(start, stop, count), ("explicit", start, stop, count)
    start, stop = auto_tau_range(epsilon)
    count = 400
    return stop * np.arange(1, count + 1) / count, ("auto", start, stop, count)


def _alpha(spec: ScanSpec) -> float:
    return math.sqrt(spec.alpha_sq)


def _fock_normalizer(spec: ScanSpec, rel_tol: float) -> tuple:
    nref = round(spec.alpha_sq)
    if nref == 0:
        raise DomainError("alpha_sq rounds to 0; no reference number state")
    return nref, fock_negativity(nref, rel_tol)


def _neg_values(states, rel_tol: float):
    """Negativity for each state with per-state error capture.

    Returns (values, messages); failed entries carry nan and the message.
    """
    try:
        vals = negativity_batch(states, rel_tol)
        return list(vals), [None] * len(states)
    except ConvergenceError:
        vals, msgs = [], []
        for s in states:
            try:
                vals.append(negativity_batch([s], rel_tol)[0])
                msgs.append(None)
            except ConvergenceError as exc:
                vals.append(math.nan)
                msgs.append(str(exc))
        return vals, msgs


def _run_tasks(tasks, threads: int):
    """Run callables preserving order; thread count never changes the results,
    only the schedule."""
    if threads <= 1 or len(tasks) <= 1:
        return [t() for t in tasks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(t) for t in tasks]
        return [f.result() for f in futures]


def _base_metadata(spec: ScanSpec, rel_tol_note=None) -> dict:
    cutoff = spec.effective_cutoff
    L = math.sqrt(spec.alpha_sq) + 5.0 + 0.5 * math.sqrt(max(cutoff, 1))
    return {
        "tool": "gcslab",
        "version": __version__,
        "alpha_sq": spec.alpha_sq,
        "cutoff": cutoff,
        "rel_tol": spec.rel_tol,
        "refine_rel_tol": spec.effective_refine_tol,
        "quantity": spec.quantity,
        "rescale": spec.rescale,
        "grid_policy": {
            "half_width": L,
            "base_points": _nyquist_points(L, cutoff),
            "refinement": "spacing halved per level via spectral upsampling",
        },
        **({"note": rel_tol_note} if rel_tol_note else {}),
    }


def scan_evolution(spec: ScanSpec) -> ScanResult:
    """Normalized negativity and/or Fisher information over the (eps, tau) grid.

    One row per (epsilon, tau, quantity); rescaled_tau carries
    tau * e^{eps(eps-1)} when the rescale flag is set and repeats tau otherwise.
    Convergence failures abort only the affected row, recorded with
    status=error.
    """
    if spec.tau_grid is None:
        raise ConfigError("tau_grid is required for evolution scans", key="tau_grid")
    t0 = time.monotonic()
    cutoff = spec.effective_cutoff
    alpha = _alpha(spec)
    need_neg = "negativity" in spec.quantities
    norm = _fock_normalizer(spec, spec.rel_tol) if need_neg else (None, None)
    grids = {}

    def job(eps):
        taus, grid_desc = tau_values(spec, eps)
        states = [make_gcs(GCSParams(alpha, eps, t), cutoff) for t in taus]
        out = {}
        if need_neg:
            vals, msgs = _neg_values(states, spec.rel_tol)
            out["negativity"] = ([v / norm[1] for v in vals], msgs)
        if "qfi" in spec.quantities:
            out["qfi"] = ([normalized_qfi(s, spec.alpha_sq) for s in states],
                          [None] * len(states))
        return eps, taus, grid_desc, out

    results = _run_tasks([lambda e=e: job(e) for e in spec.epsilons], spec.threads)
    rows = []
    for eps, taus, grid_desc, out in results:
        grids[f"{eps:g}"] = {"kind": grid_desc[0], "start": grid_desc[1],
                             "stop": grid_desc[2], "count": grid_desc[3]}
        scale = math.exp(eps * (eps - 1.0))
        for qty in spec.quantities:
            vals, msgs = out[qty]
            for t, v, msg in zip(taus, vals, msgs):
                rows.append({
                    "epsilon": eps,
                    "tau": float(t),
                    "rescaled_tau": float(t) * scale if spec.rescale else float(t),
                    "quantity": qty,
                    "value": v,
                    "status": "ok" if msg is None else "error",
                    "message": msg or "",
                })
    meta = _base_metadata(spec)
    meta["tau_grids"] = grids
    if need_neg:
        meta["normalizer"] = {"fock_n": norm[0], "negativity": norm[1]}
    return ScanResult(
        columns=("epsilon", "tau", "rescaled_tau", "quantity", "value", "status", "message"),
        rows=rows, metadata=meta, wall_time_s=time.monotonic() - t0)


def _refine_window(taus, i):
    lo = taus[max(i - 1, 0)]
    hi = taus[min(i + 1, len(taus) - 1)]
    if lo == hi:
        return None
    return float(lo), float(hi)


def scan_max_over_tau(spec: ScanSpec) -> ScanResult:
    """Per-epsilon maximum of each quantity over the tau grid.

    A coarse pass over the grid locates the best sample; a local pass of
    refine_count points across the bracketing interval sharpens it at the
    refinement tolerance.  Both grids land in the metadata.
    """
    t0 = time.monotonic()
    cutoff = spec.effective_cutoff
    alpha = _alpha(spec)
    need_neg = "negativity" in spec.quantities
    fine_tol = spec.effective_refine_tol
    norm = _fock_normalizer(spec, fine_tol) if need_neg else (None, None)
    coarse_norm = _fock_normalizer(spec, spec.rel_tol) if need_neg else (None, None)

    def values_for(eps, taus, qty, rel_tol, normalizer):
        states = [make_gcs(GCSParams(alpha, eps, t), cutoff) for t in taus]
        if qty == "negativity":
            vals, msgs = _neg_values(states, rel_tol)
            return [v / normalizer[1] for v in vals], msgs
        return [normalized_qfi(s, spec.alpha_sq) for s in states], [None] * len(states)

    def job(eps):
        taus, grid_desc = tau_values(spec, eps)
        per_qty = {}
        for qty in spec.quantities:
            vals, msgs = values_for(eps, taus, qty, spec.rel_tol,
                                    coarse_norm if qty == "negativity" else None)
            ok = [(v, t) for v, t, m in zip(vals, taus, msgs) if m is None]
            if not ok:
                per_qty[qty] = (math.nan, math.nan, "all rows failed to converge", None)
                continue
            arr = np.array([v for v, _ in ok])
            i = int(np.argmax(arr))
            best_v, best_t = ok[i]
            window = _refine_window([t for _, t in ok], i) if spec.refine_count >= 2 else None
            if window is not None:
                fine = np.linspace(window[0], window[1], spec.refine_count)
                fvals, fmsgs = values_for(eps, fine, qty, fine_tol,
                                          norm if qty == "negativity" else None)
                for v, t, m in zip(fvals, fine, fmsgs):
                    if m is None and v > best_v:
                        best_v, best_t = v, float(t)
            per_qty[qty] = (best_v, best_t, None, window)
        return eps, grid_desc, per_qty

    results = _run_tasks([lambda e=e: job(e) for e in spec.epsilons], spec.threads)
    rows, grids = [], {}
    for eps, grid_desc, per_qty in results:
        grids[f"{eps:g}"] = {"kind": grid_desc[0], "start": grid_desc[1],
                             "stop": grid_desc[2], "count": grid_desc[3],
                             "refine_count": spec.refine_count,
                             "refine_windows": {q: per_qty[q][3] for q in per_qty}}
        for qty in spec.quantities:
            best_v, best_t, errmsg, _ = per_qty[qty]
            rows.append({
                "epsilon": eps,
                "quantity": qty,
                "tau_max": best_t,
                "value": best_v,
                "status": "ok" if errmsg is None else "error",
                "message": errmsg or "",
            })
    meta = _base_metadata(spec)
    meta["tau_grids"] = grids
    if need_neg:
        meta["normalizer"] = {"fock_n": norm[0], "negativity": norm[1]}
    return ScanResult(
        columns=("epsilon", "quantity", "tau_max", "value", "status", "message"),
        rows=rows, metadata=meta, wall_time_s=time.monotonic() - t0)


def scan_werner(spec: ScanSpec) -> ScanResult:
    """Werner sweep: for each (p, epsilon), the tau-grid maximum of normalized
    mixture negativity, plus one atomic-purity row per p.

    Mixture members at a given tau are shared across the whole p grid, so the
    expensive fields are evaluated once per tau.
    """
    if spec.werner is None:
        raise ConfigError("scan_werner needs a werner block", key="werner")
    t0 = time.monotonic()
    w = spec.werner
    cutoff = spec.effective_cutoff
    alpha = _alpha(spec)
    nref, fock_ref = _fock_normalizer(spec, spec.rel_tol)

    def job(eps):
        taus, grid_desc = tau_values(spec, eps)
        members = {float(t): [make_gcs(GCSParams(alpha, eps, s * t), cutoff)
                              for s in w.tau_scale] for t in taus}
        ensembles, keys = [], []
        for p in w.p_grid:
            weights = werner_weights(WernerSpec(p, w.d, np.array(w.c),
                                                np.zeros(w.d)))
            for t in taus:
                ensembles.append(Ensemble(tuple(zip(weights.tolist(), members[float(t)]))))
                keys.append((p, float(t)))
        vals, msgs = _neg_values(ensembles, spec.rel_tol)
        best = {}
        for (p, t), v, m in zip(keys, vals, msgs):
            if m is not None:
                continue
            nv = v / fock_ref
            if p not in best or nv > best[p][0]:
                best[p] = (nv, t)
        return eps, grid_desc, best

    results = _run_tasks([lambda e=e: job(e) for e in spec.epsilons], spec.threads)
    rows, grids = [], {}
    for p in w.p_grid:
        purity = atomic_purity(WernerSpec(p, w.d, np.array(w.c), np.zeros(w.d)))
        rows.append({"p": p, "epsilon": math.nan, "quantity": "atomic_purity",
                     "tau_max": math.nan, "value": purity, "status": "ok",
                     "message": ""})
    for eps, grid_desc, best in results:
        grids[f"{eps:g}"] = {"kind": grid_desc[0], "start": grid_desc[1],
                             "stop": grid_desc[2], "count": grid_desc[3]}
        for p in w.p_grid:
            if p in best:
                nv, t = best[p]
                rows.append({"p": p, "epsilon": eps, "quantity": "negativity_max",
                             "tau_max": t, "value": nv, "status": "ok", "message": ""})
            else:
                rows.append({"p": p, "epsilon": eps, "quantity": "negativity_max",
                             "tau_max": math.nan, "value": math.nan,
                             "status": "error", "message": "no converged tau"})
    meta = _base_metadata(spec)
    meta["tau_grids"] = grids
    meta["werner"] = {"d": w.d, "c": [[v.real, v.imag] for v in w.c],
                      "tau_scale": list(w.tau_scale), "p_grid": list(w.p_grid)}
    meta["normalizer"] = {"fock_n": nref, "negativity": fock_ref}
    return ScanResult(
        columns=("p", "epsilon", "quantity", "tau_max", "value", "status", "message"),
        rows=rows, metadata=meta, wall_time_s=time.monotonic() - t0)


# ---------------------------------------------------------------------------
# Wigner frame export
# ---------------------------------------------------------------------------

def export_wigner_frames(alpha_sq, epsilon, tau_list, grid, path, fmt="json"):
    """Write one sampled Wigner field per tau; returns the written paths.

    The output directory is created and every target file is opened before any
    field is computed, so I/O failures surface first.
    """
    from .wigner import wigner_field
    if fmt not in ("csv", "json"):
        raise ConfigError("format must be csv or json", key="format")
    os.makedirs(path, exist_ok=True)
    targets = [os.path.join(path, f"wigner_eps{epsilon:g}_tau{float(t):.6f}.{fmt}")
               for t in tau_list]
    for target in targets:
        with open(target, "w", encoding="utf-8"):
            pass
    # same deep default as scans: the sqrt(tail) truncation floor must stay
    # below the frame min/max summaries users read off
    cutoff = auto_cutoff(alpha_sq, 1e-15)
    alpha = math.sqrt(alpha_sq)
    written = []
    for t, target in zip(tau_list, targets):
        state = make_gcs(GCSParams(alpha, epsilon, float(t)), cutoff)
        fld = wigner_field(state, grid)
        meta = {
            "tool": "gcslab", "version": __version__,
            "alpha_sq": alpha_sq, "epsilon": epsilon, "tau": float(t),
            "cutoff": cutoff,
            "min": float(fld.values.min()), "max": float(fld.values.max()),
        }
        if fmt == "json":
            doc = {
                "metadata": meta,
                "grid": {"L": grid.half_width, "nx": grid.nx, "ny": grid.ny},
                "values": [_fmt_float(v) for v in fld.values.ravel(order="C")],
            }
            with open(target, "w", encoding="utf-8") as fh:
                json.dump(doc, fh)
                fh.write("\n")
        else:
            gx, gy = grid.axes()
            with open(target, "w", encoding="utf-8", newline="") as fh:
                for key, val in {**meta,
                                 "L": grid.half_width, "nx": grid.nx,
                                 "ny": grid.ny}.items():
                    fh.write(f"# {key} = {json.dumps(val)}\n")
                fh.write("x,y,value\n")
                for i in range(grid.nx):
                    for j in range(grid.ny):
                        fh.write(f"{_fmt_cell(gx[i])},{_fmt_cell(gy[j])},"
                                 f"{_fmt_cell(fld.values[i, j])}\n")
        written.append(target)
    return written


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def _fmt_float(v) -> float:
    return float(f"{float(v):.17g}")


def _fmt_cell(v) -> str:
    if isinstance(v, str):
        return v
    f = float(v)
    if math.isnan(f):
        return ""
    return f"{f:.17g}"


def write_result(result: ScanResult, out=None, fmt="csv"):
    """Serialize a ScanResult to csv or json (stdout when out is None).

    Only reproducibility metadata is embedded; timing stays on the object so
    identical configurations write identical bytes.
    """
    if fmt == "json":
        doc = {"metadata": result.metadata,
               "rows": [{k: (None if isinstance(r[k], float) and math.isnan(r[k])
                             else r[k]) for k in result.columns} for r in result.rows]}
        text = json.dumps(doc, indent=1, sort_keys=True) + "\n"
    elif fmt == "csv":
        lines = [f"# {k} = {json.dumps(result.metadata[k], sort_keys=True)}"
                 for k in sorted(result.metadata)]
        lines.append(",".join(result.columns))
        for r in result.rows:
            lines.append(",".join(_fmt_cell(r[k]) for k in result.columns))
        text = "\n".join(lines) + "\n"
    else:
        raise ConfigError("format must be csv or json", key="format")
    if out is None:
        print(text, end="")
        return None
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return out


def read_rows(path):
    """Read back a CSV written by write_result: (metadata, list of row dicts)."""
    meta, rows, header = {}, [], None
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("# "):
                key, _, val = line[2:].partition(" = ")
                meta[key] = json.loads(val)
            elif header is None:
                header = line.split(",")
            else:
                rows.append(dict(zip(header, line.split(","))))
    return meta, rows


# ---------------------------------------------------------------------------
# configuration files
# ---------------------------------------------------------------------------

_TOP_KEYS = {"alpha_sq", "epsilons", "tau_grid", "quantity", "rescale", "cutoff",
             "rel_tol", "refine_count", "refine_rel_tol", "threads", "werner",
             "out", "format"}
_WERNER_KEYS = {"d", "c", "tau_scale", "p_grid"}


def _parse_complex_list(values, key):
    out = []
    for v in values:
        if isinstance(v, (list, tuple)):
            if len(v) != 2:
                raise ConfigError("complex entries are [re, im] pairs", key=key)
            out.append(complex(float(v[0]), float(v[1])))
        else:
            out.append(complex(float(v)))
    return tuple(out)


def spec_from_dict(doc: dict) -> ScanSpec:
    """Validate a configuration mapping into a ScanSpec; unknown keys are errors."""
    if not isinstance(doc, dict):
        raise ConfigError("configuration root must be an object")
    unknown = set(doc) - _TOP_KEYS
    if "p_grid" in unknown:
        raise ConfigError("p_grid must live inside a 'werner' block", key="p_grid")
    if unknown:
        raise ConfigError(f"unknown key(s): {', '.join(sorted(unknown))}")
    for req in ("alpha_sq", "epsilons", "tau_grid"):
        if req not in doc:
            raise ConfigError("missing required key", key=req)
    werner = None
    if doc.get("werner") is not None:
        wd = doc["werner"]
        if not isinstance(wd, dict):
            raise ConfigError("werner must be an object", key="werner")
        unknown = set(wd) - _WERNER_KEYS
        if unknown:
            raise ConfigError(
                f"unknown key(s): {', '.join('werner.' + k for k in sorted(unknown))}")
        kw = {}
        if "d" in wd:
            kw["d"] = int(wd["d"])
        if "c" in wd:
            kw["c"] = _parse_complex_list(wd["c"], "werner.c")
        if "tau_scale" in wd:
            kw["tau_scale"] = tuple(float(v) for v in wd["tau_scale"])
        if "p_grid" in wd:
            kw["p_grid"] = tuple(float(v) for v in wd["p_grid"])
        werner = WernerScanSpec(**kw)
    try:
        return ScanSpec(
            alpha_sq=float(doc["alpha_sq"]),
            epsilons=tuple(float(e) for e in doc["epsilons"]),
            tau_grid=None if doc["tau_grid"] is None else tuple(doc["tau_grid"]),
            quantity=doc.get("quantity", "both"),
            rescale=bool(doc.get("rescale", False)),
            cutoff=None if doc.get("cutoff") is None else int(doc["cutoff"]),
            rel_tol=float(doc.get("rel_tol", 1e-3)),
            refine_count=int(doc.get("refine_count", 50)),
            refine_rel_tol=(None if doc.get("refine_rel_tol") is None
                            else float(doc["refine_rel_tol"])),
            threads=int(doc.get("threads", 1)),
            werner=werner,
            out=doc.get("out"),
            fmt=doc.get("format", "csv"),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc))


def parse_config(path) -> ScanSpec:
    """Load and validate a JSON configuration file."""
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc}")
    return spec_from_dict(doc)


def spec_to_dict(spec: ScanSpec) -> dict:
    """Inverse of spec_from_dict: parse_config(write(spec_to_dict)) == spec."""
    doc = {
        "alpha_sq": spec.alpha_sq,
        "epsilons": list(spec.epsilons),
        "tau_grid": None if spec.tau_grid is None else list(spec.tau_grid),
        "quantity": spec.quantity,
        "rescale": spec.rescale,
        "cutoff": spec.cutoff,
        "rel_tol": spec.rel_tol,
        "refine_count": spec.refine_count,
        "refine_rel_tol": spec.refine_rel_tol,
        "threads": spec.threads,
        "out": spec.out,
        "format": spec.fmt,
    }
    if spec.werner is not None:
        w = spec.werner
        doc["werner"] = {"d": w.d, "c": [[v.real, v.imag] for v in w.c],
                         "tau_scale": list(w.tau_scale), "p_grid": list(w.p_grid)}
    return doc
