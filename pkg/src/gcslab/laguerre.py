"""Associated Laguerre polynomials and bounded displacement-overlap kernels.

Phase-space evaluation needs L_n^k(x) for all n + k up to the Fock cutoff at
every grid point.  Raw polynomial values overflow double precision once
x^n/n! passes ~1e308 (large grids, high cutoffs), so the heavy lifting is done
on the rescaled functions

    d_{n,k}(x) = e^{-x/2} x^{k/2} sqrt(n!/(n+k)!) L_n^k(x)
               = |<n+k| D(zeta) |n>|  with x = |zeta|^2,

which are bounded by 1 for all arguments.  Their three-term recurrence in n is
the Laguerre recurrence under a diagonal rescaling, so it inherits the same
stability while never leaving the representable range.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError


def laguerre_assoc(n: int, k: int, x):
    """Associated Laguerre polynomial L_n^k(x) by upward recurrence in n.

    Exact closed forms seed the recurrence: L_0^k = 1, L_1^k = 1 + k - x.
    Accepts scalar or ndarray x >= 0.
    """
    if n < 0 or k < 0:
        raise DomainError("n and k must be >= 0")
    xs = np.asarray(x, dtype=float)
    if np.any(xs < 0):
        raise DomainError("x must be >= 0")
    lm1 = np.ones_like(xs)
    if n == 0:
        return lm1 if isinstance(x, np.ndarray) else float(lm1)
    l = 1.0 + k - xs
    for m in range(1, n):
        lp = ((2.0 * m + k + 1.0 - xs) * l - (m + k) * lm1) / (m + 1.0)
        lm1, l = l, lp
    return l if isinstance(x, np.ndarray) else float(l)


def displacement_diag_start(x: np.ndarray, k: int, log_x: np.ndarray | None = None) -> np.ndarray:
    """d_{0,k}(x) = e^{-x/2} x^{k/2} / sqrt(k!), elementwise over x >= 0."""
    if k == 0:
        return np.exp(-0.5 * x)
    if log_x is None:
        with np.errstate(divide="ignore"):
            log_x = np.where(x > 0, np.log(np.where(x > 0, x, 1.0)), 0.0)
    out = np.exp(-0.5 * x + 0.5 * k * log_x - 0.5 * math.lgamma(k + 1.0))
    return np.where(x > 0, out, 0.0)


def displacement_step(d_prev: np.ndarray, d_curr: np.ndarray, n: int, k: int,
                      x: np.ndarray) -> np.ndarray:
    """One upward step of the d-recurrence: d_{n+1,k} from d_{n,k}, d_{n-1,k}."""
    if n == 0:
        return d_curr * ((k + 1.0 - x) / math.sqrt(k + 1.0))
    return ((2.0 * n + k + 1.0 - x) * d_curr
            - math.sqrt(n * (n + k)) * d_prev) / math.sqrt((n + 1.0) * (n + 1.0 + k))


def displacement_moduli_table(x: float, n_max: int) -> np.ndarray:
    """Table d[n, k] = |<n+k| D |n>| for n + k <= n_max at a single x = |zeta|^2.

    Entries with n + k > n_max are left at zero.
    """
    if n_max < 0:
        raise DomainError("n_max must be >= 0")
    if x < 0:
        raise DomainError("x must be >= 0")
    xv = np.asarray(x, dtype=float)
    d = np.zeros((n_max + 1, n_max + 1))
    for k in range(n_max + 1):
        top = n_max - k
        d0 = displacement_diag_start(xv, k)
        d[0, k] = d0
        if top >= 1:
            d[1, k] = displacement_step(None, d0, 0, k, xv)
        for n in range(1, top):
            d[n + 1, k] = displacement_step(d[n - 1, k], d[n, k], n, k, xv)
    return d
