"""Truncated Fock-space states of a single field mode.

Builds nonlinear-phase coherent states c_n = (alpha^n e^{-alpha^2/2}/sqrt(n!))
exp(-i tau n^eps) and interrogates them: photon-number moments, Mandel Q,
normalized correlation functions g^(k), ladder-operator expectations,
quadrature variances and fidelities.  Quadrature convention throughout:
X_phi = a e^{i phi} + a^dag e^{-i phi}, so a coherent state has Var[X_phi] = 1
for every angle.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, TruncationWarning, UndefinedStatisticError

_RECOMMEND_TAIL = 1e-12


def _as_float(name, value):
    v = float(value)
    if not math.isfinite(v):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return v


@dataclass(frozen=True)
class FockState:
    """Pure state of one mode on the truncated basis |0> .. |cutoff>.

    Amplitudes are renormalized at construction, so sum |c_n|^2 == 1 up to
    float rounding regardless of the input scale.  The array is frozen to keep
    instances safely shareable across threads.
    """

    amps: np.ndarray

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.amps, dtype=complex))
        if a.ndim != 1 or a.size == 0:
            raise DomainError("amps must be a non-empty 1-D sequence")
        nrm2 = math.fsum(np.abs(a) ** 2)
        if not math.isfinite(nrm2) or nrm2 <= 0.0:
            raise DomainError("amps must have finite, nonzero norm")
        if nrm2 != 1.0:
            a = a / math.sqrt(nrm2)
        else:
            a = a.copy()
        a.setflags(write=False)
        object.__setattr__(self, "amps", a)

    @property
    def cutoff(self) -> int:
        return self.amps.size - 1


@dataclass(frozen=True)
class GCSParams:
    """(alpha, epsilon, tau) triple defining one nonlinear-phase coherent state.

    alpha >= 0 is the real coherent amplitude (nbar = alpha^2), epsilon >= 0
    the nonlinearity exponent and tau the accumulated dimensionless evolution
    parameter.  The n=0 phase convention is n^eps = 0 for eps > 0 and 1 for
    eps = 0, which keeps eps = 0 a pure global phase.
    """

    alpha: float
    epsilon: float
    tau: float

    def __post_init__(self):
        a = _as_float("alpha", self.alpha)
        e = _as_float("epsilon", self.epsilon)
        t = _as_float("tau", self.tau)
        if a < 0:
            raise DomainError("alpha must be >= 0 (absorb any phase into tau/delta)")
        if e < 0:
            raise DomainError("epsilon must be >= 0")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "epsilon", e)
        object.__setattr__(self, "tau", t)

    @property
    def nbar(self) -> float:
        return self.alpha * self.alpha


def number_power(n, epsilon):
    """n^epsilon with the n = 0 convention: 0 for epsilon > 0, 1 for epsilon = 0."""
    arr = np.asarray(n, dtype=float)
    if epsilon == 0:
        out = np.ones_like(arr)
    else:
        out = np.where(arr == 0, 0.0, arr ** epsilon)
    return out if isinstance(n, np.ndarray) else float(out)


def poisson_log_pmf(n: np.ndarray, nbar: float) -> np.ndarray:
    """log of the Poisson(nbar) pmf, valid for nbar up to ~1e305."""
    n = np.asarray(n, dtype=float)
    if nbar == 0.0:
        return np.where(n == 0, 0.0, -np.inf)
    lg = np.array([math.lgamma(k + 1.0) for k in np.atleast_1d(n)])
    return n * math.log(nbar) - nbar - lg.reshape(n.shape)


def poisson_tail(nbar: float, n: int) -> float:
    """P(X > n) for X ~ Poisson(nbar), summed smallest-terms-first."""
    if nbar == 0.0:
        return 0.0
    hi = int(math.ceil(nbar + 40.0 * math.sqrt(nbar) + 60.0))
    if n >= hi:
        return 0.0
    ks = np.arange(n + 1, hi + 1)
    pmf = np.exp(poisson_log_pmf(ks, nbar))
    return float(np.sum(pmf[::-1]))


def auto_cutoff(nbar: float, tail_tol: float) -> int:
    """Smallest N with Poisson(nbar) mass above N below tail_tol; at least ceil(nbar).

    The tail is accumulated from the far end so values near the tolerance are
    not lost to rounding.
    """
    nbar = _as_float("nbar", nbar)
    tail_tol = _as_float("tail_tol", tail_tol)
    if nbar < 0:
        raise DomainError("nbar must be >= 0")
    if not (0.0 < tail_tol < 1.0):
        raise DomainError("tail_tol must lie in (0, 1)")
    if nbar == 0.0:
        return 0
    n = max(0, int(math.ceil(nbar)))
    hi = int(math.ceil(nbar + 40.0 * math.sqrt(nbar) + 60.0))
    ks = np.arange(0, hi + 1)
    pmf = np.exp(poisson_log_pmf(ks, nbar))
    # suffix[k] = P(X > k), built back-to-front
    suffix = np.cumsum(pmf[::-1])[::-1]
    while n < hi and not suffix[n + 1] < tail_tol:
        n += 1
    return n


def _poisson_amplitudes(alpha: float, cutoff: int) -> np.ndarray:
    """|c_n| = alpha^n e^{-alpha^2/2}/sqrt(n!) via the multiplicative recurrence
    |c_{n+1}| = |c_n| alpha/sqrt(n+1), started at the distribution mode so that
    neither endpoint under- or overflows (usable to alpha^2 ~ 1e4 and beyond).
    Returned unnormalized up to an overall scale."""
    mag = np.zeros(cutoff + 1)
    if alpha == 0.0:
        mag[0] = 1.0
        return mag
    mode = min(cutoff, int(alpha * alpha))
    mag[mode] = 1.0
    for n in range(mode, 0, -1):
        mag[n - 1] = mag[n] * math.sqrt(n) / alpha
    for n in range(mode, cutoff):
        mag[n + 1] = mag[n] * alpha / math.sqrt(n + 1.0)
    return mag


def make_gcs(params: GCSParams, cutoff: int) -> FockState:
    """Nonlinear-phase coherent state on the truncated basis.

    Amplitudes carry Poisson magnitudes and phases exp(-i tau n^eps); the state
    is renormalized on the truncated basis.  A cutoff below the recommended
    auto_cutoff(nbar, 1e-12) is accepted but flagged through the warning
    channel; the dropped mass itself is available via truncation_deficit.
    """
    if cutoff < 0:
        raise DomainError("cutoff must be >= 0")
    rec = auto_cutoff(params.nbar, _RECOMMEND_TAIL)
    if cutoff < rec:
        warnings.warn(
            f"cutoff {cutoff} below recommended {rec} for nbar={params.nbar:g}",
            TruncationWarning,
            stacklevel=2,
        )
    mag = _poisson_amplitudes(params.alpha, cutoff)
    phases = np.exp(-1j * params.tau * number_power(np.arange(cutoff + 1), params.epsilon))
    return FockState(mag * phases)


def truncation_deficit(params: GCSParams, cutoff: int) -> float:
    """Pre-normalization norm deficit of make_gcs: Poisson mass beyond the cutoff."""
    if cutoff < 0:
        raise DomainError("cutoff must be >= 0")
    return poisson_tail(params.nbar, cutoff)


def coherent_state(alpha: complex, cutoff: int) -> FockState:
    """Coherent state of (possibly complex) amplitude alpha on the truncated basis."""
    if cutoff < 0:
        raise DomainError("cutoff must be >= 0")
    a = complex(alpha)
    mag = _poisson_amplitudes(abs(a), cutoff)
    if a == 0:
        return FockState(mag.astype(complex))
    phase = np.exp(1j * np.arange(cutoff + 1) * math.atan2(a.imag, a.real))
    return FockState(mag * phase)


def fock_basis_state(n: int, cutoff: int | None = None) -> FockState:
    """Number state |n>, padded to an optional larger cutoff."""
    if n < 0:
        raise DomainError("n must be >= 0")
    if cutoff is None:
        cutoff = n
    if cutoff < n:
        raise DomainError("cutoff must be >= n")
    amps = np.zeros(cutoff + 1, dtype=complex)
    amps[n] = 1.0
    return FockState(amps)


def yurke_stoler_cat(alpha: float, cutoff: int) -> FockState:
    """(e^{-i pi/4}|alpha> + e^{i pi/4}|-alpha>)/sqrt(2) on the truncated basis.

    Even components pick up weight 1 and odd components -i, exactly the phase
    pattern of the eps = 2 state at tau = pi/2.
    """
    alpha = _as_float("alpha", alpha)
    if alpha < 0:
        raise DomainError("alpha must be >= 0")
    if cutoff < 0:
        raise DomainError("cutoff must be >= 0")
    mag = _poisson_amplitudes(alpha, cutoff)
    n = np.arange(cutoff + 1)
    w = (np.exp(-1j * math.pi / 4) + np.exp(1j * math.pi / 4) * (-1.0) ** n) / math.sqrt(2)
    return FockState(mag * w)


def photon_moment(state: FockState, m: int) -> float:
    """<n^m> = sum_n n^m |c_n|^2, accumulated with exact (fsum) summation."""
    if m < 1:
        raise DomainError("m must be >= 1")
    n = np.arange(state.amps.size, dtype=float)
    return math.fsum((n ** m) * np.abs(state.amps) ** 2)


def mandel_q(state: FockState) -> float:
    """Q = (<n^2> - <n>^2 - <n>)/<n>; zero for Poissonian statistics."""
    n1 = photon_moment(state, 1)
    if n1 <= 0.0:
        raise UndefinedStatisticError("Mandel Q is undefined for the vacuum")
    n2 = photon_moment(state, 2)
    return (n2 - n1 * n1 - n1) / n1


def g_k(state: FockState, k: int) -> float:
    """Normalized k-th factorial-moment correlation <n(n-1)...(n-k+1)>/<n>^k."""
    if k < 1:
        raise DomainError("k must be >= 1")
    if k > state.cutoff:
        raise DomainError(f"k={k} exceeds the state cutoff {state.cutoff}")
    n1 = photon_moment(state, 1)
    if n1 <= 0.0:
        raise UndefinedStatisticError("g^(k) is undefined for the vacuum")
    n = np.arange(state.amps.size, dtype=float)
    fall = np.ones_like(n)
    for j in range(k):
        fall = fall * (n - j)
    num = math.fsum(fall * np.abs(state.amps) ** 2)
    return num / n1 ** k


def ladder_expectations(state: FockState) -> tuple[complex, complex, float]:
    """(<a>, <a^2>, <n>) of a normalized state.

    <a>   = sum_n c_{n+1} c_n^* sqrt(n+1)
    <a^2> = sum_n c_{n+2} c_n^* sqrt((n+1)(n+2))
    """
    c = state.amps
    n = np.arange(c.size, dtype=float)
    t1 = c[1:] * np.conj(c[:-1]) * np.sqrt(n[1:])
    a1 = complex(math.fsum(t1.real), math.fsum(t1.imag))
    if c.size >= 3:
        nn = n[: c.size - 2]
        t2 = c[2:] * np.conj(c[:-2]) * np.sqrt((nn + 1.0) * (nn + 2.0))
        a2 = complex(math.fsum(t2.real), math.fsum(t2.imag))
    else:
        a2 = 0j
    return a1, a2, photon_moment(state, 1)


def quadrature_variance(state: FockState, angle: float) -> float:
    """Var[X_phi] = 1 + 2 Re[e^{2 i phi}(<a^2> - <a>^2)] + 2(<n> - |<a>|^2)."""
    a1, a2, nm = ladder_expectations(state)
    aa = a2 - a1 * a1
    return 1.0 + 2.0 * (np.exp(2j * angle) * aa).real + 2.0 * (nm - abs(a1) ** 2)


def fidelity(a: FockState, b: FockState) -> float:
    """|<a|b>|^2; the shorter amplitude vector is zero-padded."""
    ca, cb = a.amps, b.amps
    if ca.size < cb.size:
        ca = np.pad(ca, (0, cb.size - ca.size))
    elif cb.size < ca.size:
        cb = np.pad(cb, (0, ca.size - cb.size))
    return abs(np.vdot(ca, cb)) ** 2
