"""Displacement metrology: quadrature variances and quantum Fisher information.

For a pure state, the Fisher information for estimating a phase-space
displacement equals four times the variance of the quadrature orthogonal to
the displacement direction.  The contract route computes that variance
directly from ladder-operator expectations of the state.  A moment-based
closed form (`variance_moment_form`) that averages the squared real part of a
two-step phase factor is also provided; it does not reduce to the
coherent-state value at eps = 1 and is kept for comparison only, never as the
Fisher-information contract (see `moment_form_discrepancy`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .fock import (FockState, GCSParams, auto_cutoff, ladder_expectations,
                   number_power, poisson_log_pmf, quadrature_variance)

_DEGENERACY_TOL = 1e-12
_Z_TAIL = 1e-12


@dataclass(frozen=True)
class QfiReport:
    """Maximum displacement Fisher information and where it is attained.

    qfi = 4 * variance exactly; best_angle in [0, pi) is the displacement
    direction whose orthogonal quadrature carries that variance.  degenerate
    marks states whose variance is angle-independent (any direction optimal).
    """

    qfi: float
    best_angle: float
    variance: float
    degenerate: bool = False


def z_moment(params: GCSParams, j: int) -> complex:
    """Poisson-averaged phase factor <exp(-i tau ((n+j)^eps - n^eps))>.

    The average runs over the Poisson(nbar) weights truncated by
    auto_cutoff(nbar, 1e-12); weights are used as-is, without renormalizing
    the truncated tail away.
    """
    if j < 1:
        raise DomainError("j must be >= 1")
    cutoff = auto_cutoff(params.nbar, _Z_TAIL)
    n = np.arange(cutoff + 1, dtype=float)
    P = np.exp(poisson_log_pmf(n, params.nbar))
    gap = number_power(n + j, params.epsilon) - number_power(n, params.epsilon)
    t = P * np.exp(-1j * params.tau * gap)
    return complex(math.fsum(t.real), math.fsum(t.imag))


def variance_moment_form(params: GCSParams) -> float:
    """Moment-form variance 4 nbar (<Re[z_2]^2> - <Re[z_1]>^2) + 1.

    The square sits inside the first average.  Retained as a comparison path:
    at eps = 1 it does not return 1, unlike the state built there, so it is
    never used as the Fisher-information contract.
    """
    cutoff = auto_cutoff(params.nbar, _Z_TAIL)
    n = np.arange(cutoff + 1, dtype=float)
    P = np.exp(poisson_log_pmf(n, params.nbar))
    g1 = number_power(n + 1, params.epsilon) - number_power(n, params.epsilon)
    g2 = number_power(n + 2, params.epsilon) - number_power(n, params.epsilon)
    re_z2_sq = math.fsum(P * np.cos(params.tau * g2) ** 2)
    re_z1 = math.fsum(P * np.cos(params.tau * g1))
    return 4.0 * params.nbar * (re_z2_sq - re_z1 ** 2) + 1.0


def moment_form_discrepancy(params: GCSParams, cutoff: int | None = None) -> float:
    """variance_moment_form minus the direct max-over-angle state variance.

    Nonzero values (they reach order nbar at eps = 1) document why the
    moment form stays a comparison path.
    """
    from .fock import make_gcs
    if cutoff is None:
        cutoff = auto_cutoff(params.nbar, _Z_TAIL)
    state = make_gcs(params, cutoff)
    return variance_moment_form(params) - qfi_max(state).variance


def qfi_direction(state: FockState, displacement_angle: float) -> float:
    """Fisher information for displacing along the given direction.

    Equals 4 Var[X_{phi + pi/2}]: the variance of the orthogonal quadrature.
    """
    return 4.0 * quadrature_variance(state, displacement_angle + 0.5 * math.pi)


def qfi_max(state: FockState) -> QfiReport:
    """Maximum Fisher information over displacement directions, in closed form.

    max_phi Var[X_phi] = 1 + 2|<a^2> - <a>^2| + 2(<n> - |<a>|^2), attained at
    the quadrature angle solving 2 phi = -arg(<a^2> - <a>^2); the reported
    best_angle is the displacement direction orthogonal to it.
    """
    a1, a2, nm = ladder_expectations(state)
    aa = a2 - a1 * a1
    b = nm - abs(a1) ** 2
    scale = max(1.0, abs(a2), abs(a1) ** 2)
    degenerate = abs(aa) <= _DEGENERACY_TOL * scale
    variance = 1.0 + 2.0 * abs(aa) + 2.0 * b
    if degenerate:
        angle = 0.0
    else:
        quad_angle = -0.5 * math.atan2(aa.imag, aa.real)
        angle = (quad_angle - 0.5 * math.pi) % math.pi
    return QfiReport(qfi=4.0 * variance, best_angle=angle, variance=variance,
                     degenerate=degenerate)


def normalized_qfi(state: FockState, nbar: float) -> float:
    """qfi_max over the ceiling 4 (4 nbar + 1) attainable at mean photon number nbar."""
    if not (nbar > 0):
        raise DomainError("nbar must be > 0")
    return qfi_max(state).qfi / (4.0 * (4.0 * nbar + 1.0))


def cramer_rao(qfi: float, nbar: float) -> float:
    """Estimation-uncertainty bound 1/sqrt(nbar * qfi)."""
    if not (qfi > 0) or not (nbar > 0):
        raise DomainError("qfi and nbar must be > 0")
    return 1.0 / math.sqrt(nbar * qfi)


def squeezing_equivalent_db(nbar: float) -> float:
    """Squeezing level, in dB, whose metrological gain matches the variance
    ceiling 4 nbar + 1: -10 log10(4 nbar + 1)."""
    if nbar < 0:
        raise DomainError("nbar must be >= 0")
    return -10.0 * math.log10(4.0 * nbar + 1.0)
