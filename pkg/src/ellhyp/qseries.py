"""q-Pochhammer symbols and Jacobi theta functions.

All evaluators accept a complex scalar or a numpy array for the main
argument and are vectorized over it; scalars in give scalars out.  Results
are bit-deterministic for a fixed budget: multiplication/summation order is
fixed and independent of array contents.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .bases import BaseParams
from .budget import DEFAULT_BUDGET, SeriesBudget
from .errors import BudgetExhausted, InvalidArgument, InvalidBase

__all__ = [
    "q_pochhammer_inf",
    "theta",
    "theta_series",
    "elliptic_pochhammer",
]


def _as_complex_array(z) -> tuple[np.ndarray, bool]:
    arr = np.asarray(z, dtype=np.complex128)
    scalar = arr.ndim == 0
    return (arr.reshape(1) if scalar else arr), scalar


def _ret(arr: np.ndarray, scalar: bool):
    return complex(arr[0]) if scalar else arr


def q_pochhammer_inf(z, p: complex, budget: SeriesBudget | None = None):
    """Infinite product prod_{j>=0} (1 - z p^j) for |p| < 1.

    Factors are multiplied in ascending j; the loop stops once the current
    factor is within tail_tol of 1 *and* the geometric tail bound
    |z| |p|^j / (1 - |p|) is below tail_tol.
    """
    budget = budget or DEFAULT_BUDGET
    p = complex(p)
    if abs(p) >= 1.0:
        raise InvalidBase(f"|p| must be < 1, got {abs(p)!r}")
    zarr, scalar = _as_complex_array(z)
    zmax = float(np.max(np.abs(zarr))) if zarr.size else 0.0

    out = np.ones_like(zarr)
    pj = 1.0 + 0.0j
    geom = 1.0 / (1.0 - abs(p))
    for j in range(budget.max_terms):
        tail = zmax * abs(pj) * geom
        if tail < budget.tail_tol and zmax * abs(pj) < budget.tail_tol:
            return _ret(out, scalar)
        out = out * (1.0 - zarr * pj)
        pj *= p
    raise BudgetExhausted(
        f"(z;p)_inf tail {zmax * abs(pj) * geom:.3e} above {budget.tail_tol:.3e} "
        f"after {budget.max_terms} factors"
    )


def _theta_shift(z: np.ndarray, p: complex) -> tuple[np.ndarray, np.ndarray]:
    """Quasi-periodicity reduction z -> z0 = z p^{-k} with |z0| near sqrt|p|.

    Returns (z0, k).  theta(z;p) = (-1)^k z0^{-k} p^{-k(k-1)/2} theta(z0;p).
    """
    if p == 0:
        return z, np.zeros(z.shape)
    logs = np.log(np.abs(z)) / math.log(abs(p)) - 0.5
    k = np.rint(logs)
    z0 = z * np.power(p, -k) if np.any(k != 0) else z
    return z0, k


def theta(z, p: complex, budget: SeriesBudget | None = None):
    """Jacobi theta function theta(z;p) = (z;p)_inf (p z^{-1};p)_inf.

    Arguments far from the natural annulus |z| ~ sqrt|p| are first reduced
    by the exact quasi-periodicity theta(pz;p) = -z^{-1} theta(z;p), which
    keeps both constituent products fast and overflow-free.
    """
    budget = budget or DEFAULT_BUDGET
    p = complex(p)
    if abs(p) >= 1.0:
        raise InvalidBase(f"|p| must be < 1, got {abs(p)!r}")
    zarr, scalar = _as_complex_array(z)
    if np.any(zarr == 0):
        raise InvalidArgument("theta(z;p) requires z != 0")

    z0, k = _theta_shift(zarr, p)
    val = q_pochhammer_inf(z0, p, budget) * q_pochhammer_inf(p / z0, p, budget)
    if np.any(k != 0):
        # theta(z;p) with z = p^k z0 equals (-1)^k z0^{-k} p^{-k(k-1)/2} theta(z0;p).
        sign = np.where(np.mod(k, 2.0) == 0, 1.0, -1.0)
        val = val * sign * np.power(z0, -k) * np.power(p, -k * (k - 1) / 2.0)
    return _ret(val, scalar)


def theta_series(z, p: complex, budget: SeriesBudget | None = None):
    """Laurent-series theta evaluation via the triple product identity:

        theta(z;p) = (p;p)_inf^{-1} sum_k (-1)^k p^{k(k-1)/2} z^k,

    summed symmetrically outward from k = 0 until both the k and -k terms
    fall below tail_tol in magnitude.
    """
    budget = budget or DEFAULT_BUDGET
    p = complex(p)
    if abs(p) >= 1.0:
        raise InvalidBase(f"|p| must be < 1, got {abs(p)!r}")
    zarr, scalar = _as_complex_array(z)
    if np.any(zarr == 0):
        raise InvalidArgument("theta(z;p) requires z != 0")

    zmax = float(np.max(np.abs(zarr)))
    zinvmax = float(np.max(np.abs(1.0 / zarr)))

    terms = [np.ones_like(zarr)]
    zk = np.ones_like(zarr)  # z^k
    zmk = np.ones_like(zarr)  # z^-k
    pos = 1.0 + 0.0j  # (-1)^k p^{k(k-1)/2} at current k
    neg = 1.0 + 0.0j  # (-1)^k p^{k(k+1)/2} at current k (coefficient of z^-k)
    done = False
    for k in range(1, budget.max_terms):
        pos *= -(p ** (k - 1))
        neg *= -(p**k)
        zk = zk * zarr
        zmk = zmk / zarr
        terms.append(pos * zk)
        terms.append(neg * zmk)
        bound_pos = abs(pos) * zmax
        bound_neg = abs(neg) * zinvmax
        # Terms decay superexponentially once |p|^k max(|z|,1/|z|) < 1.
        if (
            max(bound_pos, bound_neg) < budget.tail_tol
            and abs(p) ** k * max(zmax, zinvmax) < 0.5
        ):
            done = True
            break
    if not done:
        raise BudgetExhausted("theta series did not reach tail_tol")
    total = np.sum(np.stack(terms, axis=0), axis=0)  # pairwise, fixed order
    val = total / q_pochhammer_inf(p, p, budget)
    return _ret(val, scalar)


def elliptic_pochhammer(
    t, n: int, base: BaseParams, budget: SeriesBudget | None = None
):
    """Elliptic Pochhammer symbol prod_{j=0}^{n-1} theta(t q^j; p)."""
    if n < 0 or not isinstance(n, (int, np.integer)):
        raise InvalidArgument(f"n must be a nonnegative integer, got {n!r}")
    tarr, scalar = _as_complex_array(t)
    out = np.ones_like(tarr)
    qj = 1.0 + 0.0j
    for _ in range(n):
        out = out * theta(tarr * qj, base.p, budget)
        qj *= base.q
    return _ret(out, scalar)


def _theta1(u: complex, tau: complex, budget: SeriesBudget | None = None) -> complex:
    """Odd Jacobi theta function theta_1(u|tau), via the product form

        theta_1(u|tau) = i p^{1/8} e^{-pi i u} (p;p)_inf theta(e^{2pi i u}; p)

    with p = e^{2pi i tau}.  Private: used only by modular-law tests.
    """
    p = cmath.exp(2j * cmath.pi * tau)
    pref = 1j * cmath.exp(1j * cmath.pi * tau / 4.0) * cmath.exp(-1j * cmath.pi * u)
    return (
        pref
        * q_pochhammer_inf(p, p, budget)
        * theta(cmath.exp(2j * cmath.pi * u), p, budget)
    )


def _dedekind_eta(tau: complex, budget: SeriesBudget | None = None) -> complex:
    """Dedekind eta(tau) = e^{pi i tau/12} (p;p)_inf, p = e^{2pi i tau}."""
    p = cmath.exp(2j * cmath.pi * tau)
    return cmath.exp(1j * cmath.pi * tau / 12.0) * q_pochhammer_inf(p, p, budget)
