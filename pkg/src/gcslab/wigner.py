"""Phase-space evaluation: Wigner fields, the closed-form series, negativity.

The generic evaluator is the displaced-parity construction

    W(beta) = (2/pi) sum_{m,n} c_m^* c_n (-1)^n <m| D(2 beta) |n>,

organized by diagonals m = n + k and driven by the bounded displacement
kernels of :mod:`gcslab.laguerre`, so it stays inside double range for any
amplitude the truncated basis can represent.  Grid evaluation batches many
states over one grid and pushes the accumulation through matrix products.

Negativity integrates |W| - W on the same Cartesian grid the field was
sampled on.  Refinement halves the spacing per level; because a
finite-cutoff state has a compactly supported characteristic function, a
Nyquist-adequate base sample determines the field exactly and the refined
levels are obtained by trigonometric (FFT zero-pad) upsampling of the base
samples, certified by a spectral-edge check.  The result is identical to
re-evaluating the state on the finer grids at a fraction of the cost.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .ensembles import Ensemble
from .errors import (ConvergenceError, DomainError, NumericalConsistencyError,
                     SeriesOverflowError)
from .fock import FockState, GCSParams, number_power, photon_moment
from .laguerre import displacement_diag_start, displacement_moduli_table, displacement_step

WIGNER_BOUND = 2.0 / math.pi

_DEFAULT_POINTS = 301
_NYQUIST_PAD = 8.0
_NEG_FLOOR = 1e-10
_EDGE_POWER_TOL = 1e-12
_BOUNDARY_TOL = 1e-12
_MAX_AXIS_POINTS = 8192
_IMAG_RESIDUE_HARD = 1e-8
_CHUNK = 16384
_BLOCK = 32

# BLAS backends split matrix products differently when called concurrently
# (contended calls fall back to fewer threads), which would let the worker
# count change last-bit results.  Serializing the product-heavy engine keeps
# every call uncontended, so outputs are bit-stable for any pool width; the
# FFT/integration stages of callers still run concurrently.
_ENGINE_LOCK = threading.Lock()


@dataclass(frozen=True)
class PhaseGrid:
    """Square sampling window [-L, L]^2 in the beta plane."""

    half_width: float
    nx: int = _DEFAULT_POINTS
    ny: int = _DEFAULT_POINTS

    def __post_init__(self):
        if not (self.half_width > 0 and math.isfinite(self.half_width)):
            raise DomainError("half_width must be finite and > 0")
        if self.nx < 2 or self.ny < 2:
            raise DomainError("nx and ny must be >= 2")

    def axes(self):
        return (np.linspace(-self.half_width, self.half_width, self.nx),
                np.linspace(-self.half_width, self.half_width, self.ny))

    @property
    def spacing(self):
        return (2.0 * self.half_width / (self.nx - 1),
                2.0 * self.half_width / (self.ny - 1))


@dataclass(frozen=True)
class WignerField:
    """Sampled Wigner values; values[i, j] = W(gx[i] + 1j * gy[j])."""

    grid: PhaseGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.nx, self.grid.ny):
            raise DomainError(f"values must have shape {(self.grid.nx, self.grid.ny)}")
        if not np.all(np.isfinite(v)):
            raise NumericalConsistencyError("Wigner field contains non-finite values")
        peak = float(np.max(np.abs(v)))
        if peak > WIGNER_BOUND + 1e-9:
            raise NumericalConsistencyError(
                f"|W| = {peak} exceeds the pure-state bound 2/pi")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)


def _source_scale(source):
    """(sqrt(nbar), cutoff) of a state or the max over mixture members."""
    if isinstance(source, FockState):
        return math.sqrt(photon_moment(source, 1)), source.cutoff
    if isinstance(source, Ensemble):
        root = max(math.sqrt(photon_moment(s, 1)) for s in source.states)
        return root, max(s.cutoff for s in source.states)
    raise DomainError(f"unsupported source type {type(source).__name__}")


def default_grid(source, points: int | None = None) -> PhaseGrid:
    """Grid policy: L = sqrt(nbar) + 5 + 0.5 sqrt(cutoff), 301 points per axis.

    The extent covers the classical radius plus vacuum-width fringes; the
    sqrt(cutoff) term tracks how far the truncated basis can push structure.
    """
    root_nbar, cutoff = _source_scale(source)
    L = root_nbar + 5.0 + 0.5 * math.sqrt(cutoff)
    n = _DEFAULT_POINTS if points is None else int(points)
    return PhaseGrid(L, n, n)


def _field_batch(coeffs: np.ndarray, gx: np.ndarray, gy: np.ndarray,
                 chunk: int = _CHUNK, block: int = _BLOCK) -> np.ndarray:
    """Wigner fields of a batch of states sharing one cutoff and one grid.

    coeffs: (S, N+1) complex amplitude rows.  Returns (S, nx, ny) floats.
    The grid is processed in cache-sized chunks; for each diagonal offset k the
    displacement kernels d_{n,k} are generated by recurrence and contracted
    against the state coefficients in blocks via matrix products.  Summation
    order is fixed by (k, block), independent of chunking or callers' threads.
    """
    with _ENGINE_LOCK:
        return _field_batch_locked(coeffs, gx, gy, chunk, block)


def _field_batch_locked(coeffs, gx, gy, chunk=_CHUNK, block=_BLOCK):
    C = np.atleast_2d(np.asarray(coeffs, dtype=complex))
    S, Np1 = C.shape
    N = Np1 - 1
    par = (-1.0) ** np.arange(Np1)
    amats = []
    for k in range(Np1):
        A = np.conj(C[:, k:]) * C[:, : Np1 - k] * par[: Np1 - k]
        amats.append(np.ascontiguousarray(np.concatenate([A.real, A.imag], axis=0)))
    X, Y = np.meshgrid(gx, gy, indexing="ij")
    xs, ys = X.ravel(), Y.ravel()
    M = xs.size
    out = np.empty((S, M))
    dbuf = np.empty((block, min(chunk, M)))
    for c0 in range(0, M, chunk):
        c1 = min(c0 + chunk, M)
        xc, yc = xs[c0:c1], ys[c0:c1]
        mc = c1 - c0
        x = 4.0 * (xc * xc + yc * yc)
        r = np.sqrt(x)
        safe = np.where(r > 0, r, 1.0)
        zr = np.where(r > 0, 2.0 * xc / safe, 1.0)   # unit phase of 2*beta
        zi = np.where(r > 0, 2.0 * yc / safe, 0.0)
        with np.errstate(divide="ignore"):
            logx = np.where(x > 0, np.log(np.where(x > 0, x, 1.0)), 0.0)
        wc = np.zeros((S, mc))
        ckr = np.ones(mc)
        cki = np.zeros(mc)
        buf = dbuf[:, :mc]
        for k in range(Np1):
            top = N - k
            A = amats[k]
            U = np.zeros((2 * S, mc))
            d_prev = displacement_diag_start(x, k, logx)
            buf[0] = d_prev
            nb, lo = 1, 0
            if top >= 1:
                d_curr = displacement_step(None, d_prev, 0, k, x)
                buf[nb] = d_curr
                nb += 1
                for n in range(1, top):
                    d_next = displacement_step(d_prev, d_curr, n, k, x)
                    d_prev, d_curr = d_curr, d_next
                    if nb == block:
                        U += A[:, lo:lo + nb] @ buf[:nb]
                        lo += nb
                        nb = 0
                    buf[nb] = d_curr
                    nb += 1
            if nb:
                U += A[:, lo:lo + nb] @ buf[:nb]
            if k == 0:
                wc += U[:S]
            else:
                tr = ckr * zr - cki * zi
                cki = ckr * zi + cki * zr
                ckr = tr
                wc += 2.0 * (ckr * U[:S] - cki * U[S:])
        out[:, c0:c1] = wc
    return (2.0 / math.pi) * out.reshape(S, len(gx), len(gy))


def wigner_point_pure(state: FockState, beta: complex) -> float:
    """Displaced-parity Wigner value of a pure state at one phase-space point.

    Evaluates the full complex double sum without assuming conjugate symmetry;
    the imaginary part is a consistency probe and must sit below 1e-8, after
    which it is discarded.
    """
    c = state.amps
    N = state.cutoff
    b = complex(beta)
    x = 4.0 * (b.real * b.real + b.imag * b.imag)
    delta = math.atan2(b.imag, b.real)
    d = displacement_moduli_table(x, N)
    D = np.zeros((N + 1, N + 1), dtype=complex)
    ns = np.arange(N + 1)
    for k in range(N + 1):
        nn = N + 1 - k
        ph = complex(math.cos(k * delta), math.sin(k * delta))
        col = d[:nn, k]
        D[ns[:nn] + k, ns[:nn]] = ph * col
        if k > 0:
            D[ns[:nn], ns[:nn] + k] = ((-1.0) ** k) * np.conj(ph) * col
    par = (-1.0) ** np.arange(N + 1)
    val = (2.0 / math.pi) * np.vdot(c, D @ (par * c))
    if abs(val.imag) > _IMAG_RESIDUE_HARD:
        raise NumericalConsistencyError(
            f"imaginary residue {val.imag} at beta={b} exceeds {_IMAG_RESIDUE_HARD}")
    return float(val.real)


def wigner_point_closed(params: GCSParams, beta, cutoff: int):
    """Closed-form Wigner series of a nonlinear-phase coherent state.

    W = (2/pi) e^{-2|beta-alpha|^2}
        - (8/pi) sum_{m>n} (-1)^n p_m p_n d_{n,m-n}(4 r^2)
                 sin((m-n) delta + (tau/2)(m^eps - n^eps))
                 sin((tau/2)(m^eps - n^eps)),

    with p_n the Poisson amplitudes of real alpha and beta = r e^{i delta}.
    The double series is truncated at m, n <= cutoff.  Exponential factors are
    folded into the bounded kernels d_{n,k} analytically, which is the
    log-domain recombination of alpha^{m+n}/m! and (2r)^{m-n} with every sign
    tracked, so no intermediate can overflow.  Accepts scalar or array beta.
    """
    if cutoff < 0:
        raise DomainError("cutoff must be >= 0")
    bs = np.asarray(beta, dtype=complex)
    scalar = bs.ndim == 0
    b = np.atleast_1d(bs).ravel()
    alpha, eps, tau = params.alpha, params.epsilon, params.tau
    N = cutoff
    ns = np.arange(N + 1, dtype=float)
    with np.errstate(divide="ignore"):
        logp = ns * (math.log(alpha) if alpha > 0 else -math.inf)
    logp = np.where(ns == 0, 0.0, logp)
    p = np.exp(logp - 0.5 * alpha * alpha - 0.5 * np.array(
        [math.lgamma(k + 1.0) for k in range(N + 1)]))
    npow = number_power(ns, eps)
    x = 4.0 * (b.real ** 2 + b.imag ** 2)
    r = np.sqrt(x)
    safe = np.where(r > 0, r, 1.0)
    zr = np.where(r > 0, 2.0 * b.real / safe, 1.0)
    zi = np.where(r > 0, 2.0 * b.imag / safe, 0.0)
    with np.errstate(divide="ignore"):
        logx = np.where(x > 0, np.log(np.where(x > 0, x, 1.0)), 0.0)
    acc = np.zeros(b.size)
    ckr, cki = np.ones(b.size), np.zeros(b.size)   # cos/sin of k*delta
    for k in range(1, N + 1):
        tr = ckr * zr - cki * zi
        cki = ckr * zi + cki * zr
        ckr = tr
        d_prev = displacement_diag_start(x, k, logx)
        d_curr = None
        for n in range(0, N + 1 - k):
            if n == 0:
                d = d_prev
            elif n == 1:
                d_curr = displacement_step(None, d_prev, 0, k, x)
                d = d_curr
            else:
                d_next = displacement_step(d_prev, d_curr, n - 1, k, x)
                d_prev, d_curr = d_curr, d_next
                d = d_curr
            phi = 0.5 * tau * (npow[n + k] - npow[n])
            s = ((-1.0) ** n) * p[n + k] * p[n] * math.sin(phi)
            if s == 0.0:
                continue
            acc += (s * math.cos(phi)) * (cki * d) + (s * math.sin(phi)) * (ckr * d)
    gauss = np.exp(-2.0 * (np.abs(b - alpha) ** 2))
    W = (2.0 / math.pi) * gauss - (8.0 / math.pi) * acc
    if not np.all(np.isfinite(W)):
        raise SeriesOverflowError("closed-form series produced non-finite values")
    if scalar:
        return float(W[0])
    return W.reshape(bs.shape)


def wigner_field(source, grid: PhaseGrid) -> WignerField:
    """Sample W over the grid; mixtures are the weighted sum of member fields."""
    gx, gy = grid.axes()
    if isinstance(source, FockState):
        vals = _field_batch(source.amps[None, :], gx, gy)[0]
    elif isinstance(source, Ensemble):
        vals = np.zeros((grid.nx, grid.ny))
        for w, s in source.components:
            vals += w * _field_batch(s.amps[None, :], gx, gy)[0]
    else:
        raise DomainError(f"unsupported source type {type(source).__name__}")
    return WignerField(grid, vals)


def integrate_field(field: WignerField) -> float:
    """Composite trapezoid integral of the sampled values over [-L, L]^2."""
    gx, gy = field.grid.axes()
    return float(np.trapezoid(np.trapezoid(field.values, gy, axis=1), gx))


# ---------------------------------------------------------------------------
# negativity pipeline
# ---------------------------------------------------------------------------

def _neg_quad(values: np.ndarray, h: float) -> float:
    """Trapezoid integral of |W| - W on a uniform h x h grid."""
    F = np.abs(values) - values
    F[0, :] *= 0.5
    F[-1, :] *= 0.5
    F[:, 0] *= 0.5
    F[:, -1] *= 0.5
    return float(F.sum() * h * h)


def _upsample(values: np.ndarray, m: int, spectrum=None) -> np.ndarray:
    """Trigonometric upsampling of an odd-sized square sample by integer m.

    The n samples spanning [-L, L] are treated as one period of length n*h;
    zero-padding the spectrum evaluates the same trigonometric interpolant on
    the m-times finer grid, whose first (n-1)*m + 1 points span [-L, L] again.
    """
    n = values.shape[0]
    if n % 2 != 1:
        raise DomainError("upsampling expects an odd point count")
    if spectrum is None:
        spectrum = np.fft.rfft2(values)
    np_ = n * m
    half = n // 2
    sp = np.zeros((np_, np_ // 2 + 1), dtype=complex)
    sp[: half + 1, : half + 1] = spectrum[: half + 1, :]
    sp[np_ - half:, : half + 1] = spectrum[half + 1:, :]
    up = np.fft.irfft2(sp, s=(np_, np_)) * (m * m)
    return up[: (n - 1) * m + 1, : (n - 1) * m + 1]


def _edge_power_ratio(spectrum: np.ndarray, n: int) -> float:
    """Relative spectral power in the outer 20% frequency band of a base sample.

    A finite-cutoff state has a compactly supported characteristic function;
    on a Nyquist-adequate grid the sampled field's spectrum decays to rounding
    noise well inside the band edge, so a non-negligible edge ratio flags
    undersampling.
    """
    half = n // 2
    fx = np.minimum(np.arange(n), n - np.arange(n))
    fy = np.arange(spectrum.shape[1])
    power = np.abs(spectrum) ** 2
    total = float(power.sum())
    if total == 0.0:
        return 0.0
    edge = (fx[:, None] > 0.8 * half) | (fy[None, :] > 0.8 * half)
    return float(power[edge].sum()) / total


def _nyquist_points(L: float, cutoff: int, floor: int = _DEFAULT_POINTS) -> int:
    """Odd base point count with h <= pi / (2 sqrt(cutoff) + pad)."""
    h_req = math.pi / (2.0 * math.sqrt(max(cutoff, 1)) + _NYQUIST_PAD)
    n = max(floor, int(math.ceil(2.0 * L / h_req)) + 1)
    return n if n % 2 == 1 else n + 1


def _negativity_from_base(base: np.ndarray, h: float, rel_tol: float):
    """Run the refinement ladder on one base sample.

    Returns (value, converged, last_two_estimates).  Each level halves the
    spacing; estimates are |W| - W trapezoid integrals on the refined grids.
    """
    spectrum = np.fft.rfft2(base)
    n = base.shape[0]
    prev = _neg_quad(base, h)
    cur = prev
    m = 2
    while n * m <= _MAX_AXIS_POINTS:
        cur = _neg_quad(_upsample(base, m, spectrum), h / m)
        if abs(cur - prev) <= rel_tol * max(abs(cur), _NEG_FLOOR):
            return max(cur, 0.0), True, (prev, cur)
        prev = cur
        m *= 2
    return max(cur, 0.0), False, (prev, cur)


class _GridPlan:
    """Mutable ladder state: base extent and resolution for one source group."""

    def __init__(self, root_nbar: float, cutoff: int):
        self.L = root_nbar + 5.0 + 0.5 * math.sqrt(max(cutoff, 1))
        self.cutoff = cutoff
        self.densify = 0
        self.grow = 0

    @property
    def half_width(self) -> float:
        return self.L + 2.0 * self.grow

    @property
    def points(self) -> int:
        n = _nyquist_points(self.half_width, self.cutoff)
        for _ in range(self.densify):
            n = 2 * n - 1
        return n

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / (self.points - 1)

    def axes(self):
        g = np.linspace(-self.half_width, self.half_width, self.points)
        return g, g


def _member_base_fields(states, plan: _GridPlan, batch: int = 32):
    """Base fields of unique FockStates on the plan grid, keyed by object id."""
    gx, gy = plan.axes()
    unique = {}
    for s in states:
        unique.setdefault(id(s), s)
    fields = {}
    by_cut = {}
    for key, s in unique.items():
        by_cut.setdefault(s.cutoff, []).append(key)
    for cut_keys in by_cut.values():
        for i0 in range(0, len(cut_keys), batch):
            part = cut_keys[i0:i0 + batch]
            C = np.array([unique[k].amps for k in part])
            W = _field_batch(C, gx, gy)
            for j, k in enumerate(part):
                fields[k] = W[j]
    return fields


def _ring_max(field: np.ndarray) -> float:
    return float(np.max(np.abs(np.concatenate(
        [field[0, :], field[-1, :], field[:, 0], field[:, -1]]))))


def negativity_batch(sources, rel_tol: float):
    """Negativity of each source, sharing base-field evaluation where possible.

    Sources with the same grid scale share batched field evaluation; mixture
    members referenced by several ensembles (compared by object identity) are
    evaluated once per grid.  Each source runs its own refinement ladder, so
    per-source results are identical to calling :func:`negativity` directly.
    """
    if not (0.0 < rel_tol <= 0.1):
        raise DomainError("rel_tol must lie in (0, 0.1]")
    sources = list(sources)
    results: list = [None] * len(sources)
    groups: dict = {}
    for i, src in enumerate(sources):
        root, cut = _source_scale(src)
        groups.setdefault((root, cut), []).append(i)
    for (root, cut), idxs in groups.items():
        plan = _GridPlan(root, cut)
        pending = list(idxs)
        last = None
        while True:
            states = []
            for i in pending:
                src = sources[i]
                states.extend([src] if isinstance(src, FockState) else list(src.states))
            fields = _member_base_fields(states, plan)
            bases = {}
            for i in pending:
                src = sources[i]
                if isinstance(src, FockState):
                    bases[i] = fields[id(src)]
                else:
                    acc = np.zeros((plan.points, plan.points))
                    for w, s in src.components:
                        acc += w * fields[id(s)]
                    bases[i] = acc
            if plan.grow < 2 and max(_ring_max(b) for b in bases.values()) > _BOUNDARY_TOL:
                plan.grow += 1
                continue
            if plan.densify < 2 and max(_edge_power_ratio(np.fft.rfft2(b), b.shape[0])
                                        for b in bases.values()) > _EDGE_POWER_TOL:
                plan.densify += 1
                continue
            still = []
            for i in pending:
                value, ok, last = _negativity_from_base(bases[i], plan.spacing, rel_tol)
                if ok:
                    results[i] = value
                else:
                    still.append(i)
            pending = still
            if not pending:
                break
            if plan.densify < 2:
                plan.densify += 1
                continue
            raise ConvergenceError(
                f"negativity did not stabilize to rel_tol={rel_tol}", estimates=last)
    return results


def negativity(source, rel_tol: float) -> float:
    """Converged Wigner negativity integral of |W| - W over the plane.

    The grid ladder starts from the default-policy extent at a Nyquist-adequate
    resolution, halves the spacing per level (growing the extent when boundary
    values are non-negligible) and stops once successive estimates agree to
    rel_tol relative, with a 1e-10 absolute floor so exact zeros terminate.
    Exhausting the refinement budget raises :class:`ConvergenceError` carrying
    the last two estimates.
    """
    return negativity_batch([source], rel_tol)[0]


@lru_cache(maxsize=64)
def _fock_negativity_cached(n: int, rel_tol: float) -> float:
    from .fock import fock_basis_state
    return negativity(fock_basis_state(n), rel_tol)


def fock_negativity(n: int, rel_tol: float) -> float:
    """Negativity of the number state |n> through the same Cartesian pipeline."""
    if n < 0:
        raise DomainError("n must be >= 0")
    if n == 0:
        return 0.0
    return _fock_negativity_cached(int(n), float(rel_tol))


def normalized_negativity(source, nbar: float, rel_tol: float) -> float:
    """Negativity over that of the number state with the same mean photon count.

    Non-integer nbar is rounded to the nearest integer, ties to even.
    """
    if not (nbar > 0):
        raise DomainError("nbar must be > 0")
    nref = round(nbar)
    if nref == 0:
        raise DomainError("nbar rounds to 0; no reference number state")
    return negativity(source, rel_tol) / fock_negativity(nref, rel_tol)
