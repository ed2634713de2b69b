"""Werner-state preparation of the matter subsystem and induced field mixtures.

A Werner state p|Psi><Psi| + (1-p) 1/d of the d-level subsystem, with
|Psi> = sum_j c_j |lambda_j> expanded over eigenstates of the coupling
operator, drives the field into the statistical mixture

    rho_f = sum_j (p |c_j|^2 + (1-p)/d) |alpha_{tau_j, eps}><alpha_{tau_j, eps}|.

Cross terms between different eigenstates vanish exactly when the field is
traced out, so a weighted list of pure states is the complete description.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .fock import FockState, GCSParams, make_gcs, photon_moment

_WEIGHT_TOL = 1e-12


@dataclass(frozen=True)
class WernerSpec:
    """(p, d, {c_j}, {tau_j}) description of the initial mixed preparation.

    c is renormalized at construction.  taus holds the per-eigenstate evolution
    parameters tau_j that the eigenvalue spectrum of the coupling operator
    imprints on the field.
    """

    p: float
    d: int
    c: np.ndarray
    taus: np.ndarray

    def __post_init__(self):
        p = float(self.p)
        if not (0.0 <= p <= 1.0) or not math.isfinite(p):
            raise DomainError("p must lie in [0, 1]")
        d = int(self.d)
        if d < 2:
            raise DomainError("d must be >= 2")
        c = np.atleast_1d(np.asarray(self.c, dtype=complex))
        taus = np.atleast_1d(np.asarray(self.taus, dtype=float))
        if c.size != d or taus.size != d:
            raise DomainError(f"c and taus must both have length d={d}")
        if not np.all(np.isfinite(taus)):
            raise DomainError("taus must be finite")
        nrm2 = math.fsum(c.real ** 2 + c.imag ** 2)
        if not math.isfinite(nrm2) or nrm2 <= 0.0:
            raise DomainError("c must have finite, nonzero norm")
        if nrm2 != 1.0:
            c = c / math.sqrt(nrm2)
        else:
            c = c.copy()
        c.setflags(write=False)
        taus = taus.copy()
        taus.setflags(write=False)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "taus", taus)


@dataclass(frozen=True)
class Ensemble:
    """Weighted list of pure states representing a statistical mixture."""

    components: tuple

    def __post_init__(self):
        comps = tuple((float(w), s) for (w, s) in self.components)
        if not comps:
            raise DomainError("an ensemble needs at least one component")
        for w, s in comps:
            if w < 0 or not math.isfinite(w):
                raise DomainError("weights must be finite and >= 0")
            if not isinstance(s, FockState):
                raise DomainError("components must pair weights with FockState members")
        total = math.fsum(w for w, _ in comps)
        if abs(total - 1.0) > _WEIGHT_TOL:
            raise DomainError(f"weights must sum to 1 within {_WEIGHT_TOL}, got {total!r}")
        object.__setattr__(self, "components", comps)

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for w, _ in self.components])

    @property
    def states(self) -> tuple:
        return tuple(s for _, s in self.components)


def werner_weights(spec: WernerSpec) -> np.ndarray:
    """Mixture weights w_j = p |c_j|^2 + (1-p)/d.

    Evaluated as |c_j|^2 + (1-p)(1/d - |c_j|^2), which is algebraically the
    same but makes two identities hold to the last bit: w_j == |c_j|^2 at
    p = 1, and w_j == 1/d for every p whenever the |c_j|^2 are uniform.
    The modulus squared is taken as re^2 + im^2 directly (no square root),
    so amplitudes like 0.5 + 0.5j give exactly 1/2.
    """
    s = spec.c.real ** 2 + spec.c.imag ** 2
    return s + (1.0 - spec.p) * (1.0 / spec.d - s)


def evolve_werner(spec: WernerSpec, alpha: float, epsilon: float, cutoff: int) -> Ensemble:
    """Field mixture after the evolution: weights from werner_weights paired with
    one nonlinear-phase coherent state per tau_j.  Zero-weight components are
    kept so the weight algebra stays verbatim."""
    w = werner_weights(spec)
    states = [make_gcs(GCSParams(alpha, epsilon, t), cutoff) for t in spec.taus]
    return Ensemble(tuple(zip(w.tolist(), states)))


def atomic_purity(spec: WernerSpec) -> float:
    """Tr[rho_a^2] = p^2 + 2p(1-p)/d + (1-p)^2/d for the Werner preparation."""
    p, d = spec.p, spec.d
    return p * p + 2.0 * p * (1.0 - p) / d + (1.0 - p) ** 2 / d


def ensemble_photon_moment(ens: Ensemble, m: int) -> float:
    """<n^m> of the mixture: weighted sum of the member moments."""
    return math.fsum(w * photon_moment(s, m) for w, s in ens.components)
