"""The elliptic gamma function family.

Evaluation strategy: every variant is reduced, through exact functional
equations, to the exponential-sum form

    Gamma(z;p,q) = exp( sum_{n>=1} (z^n - (pq/z)^n) / (n (1-p^n)(1-q^n)) )

on the annulus |pq| < |z| < 1 where it converges geometrically.  Arguments
outside the sweet spot |z| ~ sqrt|pq| are walked there with the difference
equation Gamma(qz) = theta(z;p) Gamma(z), which is exact.  The literal
double-product evaluation is kept as `_gamma_double_product` and used as a
fallback when a walk crosses a theta zero (and by the test oracles).

All evaluators are vectorized over the main argument.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .bases import BaseParams, QuasiPeriods
from .budget import DEFAULT_BUDGET, DEFAULT_POLE_GUARD, SeriesBudget
from .errors import (
    BudgetExhausted,
    DomainError,
    InvalidArgument,
    InvalidBase,
    NearPole,
    NoConvergentRepresentation,
)
from .qseries import _as_complex_array, _ret, q_pochhammer_inf, theta

__all__ = [
    "elliptic_gamma",
    "elliptic_gamma_log",
    "elliptic_gamma2",
    "gamma_prod",
    "bernoulli_b22",
    "bernoulli_b33",
    "modified_gamma_g",
    "hyperbolic_gamma",
    "rarefied_gamma",
    "pole_distance",
]


def _annulus_terms(radius: float, margin: float, budget: SeriesBudget) -> int:
    """Terms needed so the geometric tail of the log sum is below tail_tol."""
    if radius >= 1.0:
        raise DomainError(f"argument modulus {radius!r} outside the open annulus")
    if radius == 0.0:
        return 1
    bound = budget.tail_tol * (1.0 - radius) * margin / 2.0
    n = int(math.ceil(math.log(bound) / math.log(radius))) + 1
    if n > budget.max_terms:
        raise BudgetExhausted(
            f"annulus sum needs {n} terms (cap {budget.max_terms})"
        )
    return max(n, 1)


def _gamma_annulus(z: np.ndarray, p: complex, q: complex, budget: SeriesBudget):
    """exp-sum form of Gamma(z;p,q); caller guarantees |pq| < |z| < 1."""
    pq = p * q
    w = pq / z
    radius = float(max(np.max(np.abs(z)), np.max(np.abs(w)), abs(p), abs(q)))
    margin = (1.0 - abs(p)) * (1.0 - abs(q))
    nterms = _annulus_terms(radius, margin, budget)
    terms = []
    zn = np.ones_like(z)
    wn = np.ones_like(w)
    pn = 1.0 + 0.0j
    qn = 1.0 + 0.0j
    for n in range(1, nterms + 1):
        zn = zn * z
        wn = wn * w
        pn *= p
        qn *= q
        terms.append((zn - wn) / (n * (1.0 - pn) * (1.0 - qn)))
    return np.exp(np.sum(np.stack(terms, axis=0), axis=0))


def pole_distance(z, p: complex, q: complex) -> float:
    """Minimum relative distance from z to the pole lattice p^{-a} q^{-b}.

    Relative means |z - P| / |P|; only lattice points whose modulus is within
    a factor two of |z| can be close in that metric, so the scan is short.
    """
    zarr, _ = _as_complex_array(z)
    zmax = float(np.max(np.abs(zarr)))
    if zmax < 0.5:
        return 1.0 - zmax
    poles = []
    la, lq = abs(p), abs(q)
    amax = int(math.floor(math.log(2.0 * zmax) / math.log(1.0 / la))) + 1
    for a in range(max(amax, 1)):
        mod_a = la ** (-a)
        if mod_a > 2.0 * zmax:
            break
        bmax = int(math.floor(math.log(2.0 * zmax / mod_a) / math.log(1.0 / lq))) + 1
        for b in range(max(bmax, 1)):
            P = p ** (-a) * q ** (-b)
            if abs(P) > 2.0 * zmax:
                break
            poles.append(P)
    if not poles:
        return 1.0
    parr = np.asarray(poles, dtype=np.complex128)
    rel = np.abs(zarr[..., None] - parr) / np.abs(parr)
    return float(np.min(rel))


def _walk_exponent(z: np.ndarray, q: complex, target: float) -> np.ndarray:
    """Integer s per element so that |z q^s| lands near `target`."""
    if abs(q) == 0.0:
        raise InvalidBase("q must be nonzero")
    return np.rint((math.log(target) - np.log(np.abs(z))) / math.log(abs(q)))


def elliptic_gamma(
    z,
    base: BaseParams,
    budget: SeriesBudget | None = None,
    guard: float = DEFAULT_POLE_GUARD,
):
    """Standard elliptic gamma function Gamma(z;p,q).

    Solves Gamma(qz) = theta(z;p) Gamma(z) and Gamma(pz) = theta(z;q) Gamma(z)
    with Gamma(sqrt(pq)) = 1; poles at z = p^{-a} q^{-b} and zeros at
    z = p^{a+1} q^{b+1}, a, b >= 0.  Raises NearPole when z is within `guard`
    (relative) of the pole lattice.
    """
    budget = budget or DEFAULT_BUDGET
    p, q = base.p, base.q
    zarr, scalar = _as_complex_array(z)
    if np.any(zarr == 0):
        raise InvalidArgument("Gamma(z;p,q) requires z != 0")
    if guard > 0:
        dist = pole_distance(zarr, p, q)
        if dist < guard:
            raise NearPole(
                f"z within relative distance {dist:.3e} of a gamma pole "
                f"(guard {guard:.1e})"
            )
    val = _gamma_walked(zarr, p, q, budget)
    bad = ~np.isfinite(val)
    if np.any(bad):
        # A q-walk crossed a theta zero (z on p^a q^b rays); the direct
        # product has no such artificial zeros.
        val = np.where(bad, _gamma_double_product(zarr, p, q, budget), val)
    return _ret(val, scalar)


def _gamma_walked(zarr: np.ndarray, p: complex, q: complex, budget: SeriesBudget):
    target = math.sqrt(abs(p * q))
    s = _walk_exponent(zarr, q, target)
    w = zarr * np.power(q, s) if np.any(s != 0) else zarr
    val = _gamma_annulus(w, p, q, budget)
    smax = int(np.max(s))
    smin = int(np.min(s))
    # Gamma(z) = Gamma(z q^s) / prod_{i=0}^{s-1} theta(z q^i;p)      (s > 0)
    # Gamma(z) = Gamma(z q^s) * prod_{i=s}^{-1}  theta(z q^i;p)      (s < 0)
    for i in range(0, smax):
        mask = s > i
        val[mask] = val[mask] / theta(zarr[mask] * q**i, p, budget)
    for i in range(-1, smin - 1, -1):
        mask = s <= i
        val[mask] = val[mask] * theta(zarr[mask] * q**i, p, budget)
    return val


def _gamma_double_product(
    zarr: np.ndarray, p: complex, q: complex, budget: SeriesBudget
):
    """Literal double product for Gamma(z;p,q); slow, used as oracle/fallback."""
    zmax = float(np.max(np.abs(zarr)))
    wmax = float(np.max(np.abs(p * q / zarr)))
    margin = (1.0 - abs(p)) * (1.0 - abs(q))
    scale = max(zmax, wmax) / margin

    def axis_terms(b: float) -> int:
        n = int(math.ceil(math.log(budget.tail_tol / max(scale, 1.0)) / math.log(b)))
        return min(max(n, 1), budget.max_terms)

    na, nb = axis_terms(abs(p)), axis_terms(abs(q))
    num = np.ones_like(zarr)
    den = np.ones_like(zarr)
    w = p * q / zarr
    pa = 1.0 + 0.0j
    for _ in range(na):
        qb = 1.0 + 0.0j
        for _ in range(nb):
            num = num * (1.0 - w * pa * qb)
            den = den * (1.0 - zarr * pa * qb)
            qb *= q
        pa *= p
    return num / den


def elliptic_gamma_log(z, base: BaseParams, budget: SeriesBudget | None = None):
    """Exponential-sum form of Gamma(z;p,q), valid on |pq| < |z| < 1 only.

    Raises DomainError outside that annulus (use `elliptic_gamma` there).
    """
    budget = budget or DEFAULT_BUDGET
    zarr, scalar = _as_complex_array(z)
    if np.any(zarr == 0):
        raise InvalidArgument("Gamma(z;p,q) requires z != 0")
    mods = np.abs(zarr)
    pq = abs(base.p * base.q)
    if np.any(mods >= 1.0) or np.any(mods <= pq):
        raise DomainError("elliptic_gamma_log requires |pq| < |z| < 1 strictly")
    return _ret(_gamma_annulus(zarr, base.p, base.q, budget), scalar)


def gamma_prod(args, base: BaseParams, budget: SeriesBudget | None = None) -> complex:
    """Product of standard elliptic gammas over an iterable of arguments."""
    out = 1.0 + 0.0j
    for a in args:
        out *= elliptic_gamma(a, base, budget)
    return out


def _gamma2_annulus(
    z: np.ndarray, p: complex, q: complex, t: complex, budget: SeriesBudget
):
    """log form of the second-order gamma on |pqt| < |z| < 1:

    Gamma(z;p,q,t) = exp( -sum_n (z^n + (pqt/z)^n)/(n (1-p^n)(1-q^n)(1-t^n)) ).
    """
    w = p * q * t / z
    radius = float(
        max(np.max(np.abs(z)), np.max(np.abs(w)), abs(p), abs(q), abs(t))
    )
    margin = (1.0 - abs(p)) * (1.0 - abs(q)) * (1.0 - abs(t))
    nterms = _annulus_terms(radius, margin, budget)
    terms = []
    zn = np.ones_like(z)
    wn = np.ones_like(w)
    pn = qn = tn = 1.0 + 0.0j
    for n in range(1, nterms + 1):
        zn = zn * z
        wn = wn * w
        pn *= p
        qn *= q
        tn *= t
        terms.append((zn + wn) / (n * (1.0 - pn) * (1.0 - qn) * (1.0 - tn)))
    return np.exp(-np.sum(np.stack(terms, axis=0), axis=0))


def elliptic_gamma2(
    z,
    p: complex,
    q: complex,
    t: complex,
    budget: SeriesBudget | None = None,
):
    """Second-order elliptic gamma function Gamma(z;p,q,t).

    The entire function prod (1 - z p^j q^k t^l)(1 - z^{-1} p^{j+1} q^{k+1}
    t^{l+1}); satisfies Gamma(qz;p,q,t) = Gamma(z;p,t) Gamma(z;p,q,t) and the
    reflection Gamma(pqtz;p,q,t) = Gamma(z^{-1};p,q,t).
    """
    budget = budget or DEFAULT_BUDGET
    for name, b in (("p", p), ("q", q), ("t", t)):
        if abs(b) >= 1.0 or b == 0:
            raise InvalidBase(f"|{name}| must be in (0, 1)")
    zarr, scalar = _as_complex_array(z)
    if np.any(zarr == 0):
        raise InvalidArgument("Gamma(z;p,q,t) requires z != 0")

    base_pt = BaseParams(p, t)
    target = math.sqrt(abs(p * q * t))
    s = _walk_exponent(zarr, q, target)
    w = zarr * np.power(q, s) if np.any(s != 0) else zarr
    val = _gamma2_annulus(w, p, q, t, budget)
    smax, smin = int(np.max(s)), int(np.min(s))
    # Gamma(z;p,q,t) = Gamma(zq;p,q,t) / Gamma(z;p,t): walking down divides,
    # walking up multiplies, by first-order gammas.
    for i in range(0, smax):
        mask = s > i
        val[mask] = val[mask] / elliptic_gamma(zarr[mask] * q**i, base_pt, budget)
    for i in range(-1, smin - 1, -1):
        mask = s <= i
        val[mask] = val[mask] * elliptic_gamma(zarr[mask] * q**i, base_pt, budget)
    return _ret(val, scalar)


def bernoulli_b22(u, omega1: complex, omega2: complex):
    """Second-order Bernoulli polynomial B_{2,2}(u; omega1, omega2)."""
    if omega1 == 0 or omega2 == 0:
        raise InvalidArgument("omega1 and omega2 must be nonzero")
    return (
        u * u / (omega1 * omega2)
        - u / omega1
        - u / omega2
        + omega1 / (6.0 * omega2)
        + omega2 / (6.0 * omega1)
        + 0.5
    )


def bernoulli_b33(u, omega1: complex, omega2: complex, omega3: complex):
    """Third-order Bernoulli polynomial B_{3,3}(u; omega1, omega2, omega3).

    Odd in v = u - (omega1+omega2+omega3)/2.
    """
    if omega1 == 0 or omega2 == 0 or omega3 == 0:
        raise InvalidArgument("all three periods must be nonzero")
    v = u - (omega1 + omega2 + omega3) / 2.0
    s2 = omega1**2 + omega2**2 + omega3**2
    return v * (v * v - 0.25 * s2) / (omega1 * omega2 * omega3)


def modified_gamma_g(
    u,
    periods: QuasiPeriods,
    budget: SeriesBudget | None = None,
    representation: str = "auto",
):
    """Modified elliptic gamma function G(u; omega1, omega2, omega3).

    Two product representations are available:

      direct :  Gamma(e^{2pi i u/w2}; p, q) * Gamma(r e^{-2pi i u/w1}; qt, r)
      modular:  e^{-(pi i/3) B33(u)} * Gamma(e^{-2pi i u/w3}; rt, pt)

    They agree where both converge; the modular one stays finite on |q| = 1.
    `representation` may be "auto", "direct" or "modular"; auto prefers the
    cheaper direct form unless |q| is within 1e-6 of the unit circle.
    """
    budget = budget or DEFAULT_BUDGET
    w1, w2, w3 = periods.omega1, periods.omega2, periods.omega3
    p, q, r = periods.p, periods.q, periods.r
    pt, qt, rt = periods.p_partner, periods.q_partner, periods.r_partner

    def direct_ok() -> bool:
        return max(abs(p), abs(q), abs(r), abs(qt)) < 1.0

    def modular_ok() -> bool:
        return max(abs(pt), abs(rt)) < 1.0

    if representation == "auto":
        if direct_ok() and abs(q) < 1.0 - 1e-6:
            representation = "direct"
        elif modular_ok():
            representation = "modular"
        elif direct_ok():
            representation = "direct"
        else:
            raise NoConvergentRepresentation(
                "neither product representation of G converges for these periods"
            )

    uarr, scalar = _as_complex_array(u)
    if representation == "direct":
        if not direct_ok():
            raise NoConvergentRepresentation("direct representation does not converge")
        val = elliptic_gamma(
            np.exp(2j * np.pi * uarr / w2), BaseParams(p, q), budget
        ) * elliptic_gamma(
            r * np.exp(-2j * np.pi * uarr / w1), BaseParams(qt, r), budget
        )
    elif representation == "modular":
        if not modular_ok():
            raise NoConvergentRepresentation("modular representation does not converge")
        b33 = bernoulli_b33(uarr, w1, w2, w3)
        val = np.exp(-1j * np.pi / 3.0 * b33) * elliptic_gamma(
            np.exp(-2j * np.pi * uarr / w3), BaseParams(rt, pt), budget
        )
    else:
        raise InvalidArgument(f"unknown representation {representation!r}")
    return _ret(np.asarray(val, dtype=np.complex128), scalar)


def hyperbolic_gamma(
    u, omega1: complex, omega2: complex, budget: SeriesBudget | None = None
):
    """Hyperbolic gamma function in its infinite-product form:

        e^{-(pi i/2) B22(u)} (e^{2pi i u/w1} qt; qt)_inf / (e^{2pi i u/w2}; q)_inf

    with q = e^{2pi i w1/w2}, qt = e^{-2pi i w2/w1}; requires Im(w1/w2) > 0 so
    that both bases lie inside the unit disk.
    """
    budget = budget or DEFAULT_BUDGET
    q = cmath.exp(2j * cmath.pi * omega1 / omega2)
    qt = cmath.exp(-2j * cmath.pi * omega2 / omega1)
    if abs(q) >= 1.0 or abs(qt) >= 1.0:
        raise DomainError(
            "hyperbolic gamma product form needs Im(omega1/omega2) > 0"
        )
    uarr, scalar = _as_complex_array(u)
    pref = np.exp(-0.5j * np.pi * bernoulli_b22(uarr, omega1, omega2))
    num = q_pochhammer_inf(np.exp(2j * np.pi * uarr / omega1) * qt, qt, budget)
    den = q_pochhammer_inf(np.exp(2j * np.pi * uarr / omega2), q, budget)
    return _ret(pref * num / den, scalar)


def _half_power(base_value: complex, twice_exponent: int) -> complex:
    """base^(twice_exponent/2) via integer powers and one principal sqrt."""
    ipart, rem = divmod(twice_exponent, 2)
    out = base_value**ipart
    if rem:
        out *= cmath.sqrt(base_value)
    return out


def _rarefied_step(zarr: np.ndarray, mi: int, r: int, p: complex, q: complex):
    """Exact factor S with Gamma^{(r)}(z, mi+r) = S * Gamma^{(r)}(z, mi).

    Combines the quasi-periodicity of the unnormalized function,
    gamma(z, m+r) = (-z)^{-m} q^{m(m+1)/2} p^{-m(m-1)/2} gamma(z, m),
    with the ratio of normalization prefactors; all powers stay integer or
    half-integer in (p/q) and are evaluated branch-coherently.
    """
    n1, n0 = mi + r, mi
    da = (n1 * (n1 - 1) - n0 * (n0 - 1)) // 2
    db6 = (n1 * (n1 - 1) * (2 * n1 - 1) - n0 * (n0 - 1) * (2 * n0 - 1)) // 6
    pref = (-zarr / cmath.sqrt(p * q)) ** da * _half_power(p / q, db6)
    quasi = (-zarr) ** (-mi) * q ** (mi * (mi + 1) // 2) * p ** (-(mi * (mi - 1) // 2))
    return pref * quasi


def rarefied_gamma(
    z,
    m,
    base: BaseParams,
    budget: SeriesBudget | None = None,
    guard: float = DEFAULT_POLE_GUARD,
):
    """Rarefied elliptic gamma function of order r with discrete charge m.

    Built from two standard gammas with stretched bases,

        gamma(z,m) = Gamma(z p^m; p^r, pq) Gamma(z q^{r-m}; q^r, pq),

    normalized by (-z/sqrt(pq))^{m(m-1)/2} (p/q)^{m(m-1)(2m-1)/12}.  For
    r = 1 the result equals Gamma(z;p,q) for every integer m.  m may be a
    half-integer (2m must be an integer); fractional powers then use the
    principal branch.
    """
    budget = budget or DEFAULT_BUDGET
    if base.r is None:
        raise InvalidArgument("rarefied_gamma requires a base with r set")
    r = base.r
    m2 = 2.0 * float(m)
    if abs(m2 - round(m2)) > 1e-12:
        raise InvalidArgument(f"2m must be an integer, got m = {m!r}")
    m2 = int(round(m2))
    p, q = base.p, base.q
    pq = p * q
    zarr, scalar = _as_complex_array(z)

    if m2 % 2 == 0:
        mi = m2 // 2
        # Reduce the charge into [0, r): the constituent gammas are then free
        # of pole/zero collisions and their poles all sit outside the unit disk.
        chain = np.ones_like(zarr)
        while mi >= r:
            mi -= r
            chain = chain * _rarefied_step(zarr, mi, r, p, q)
        while mi < 0:
            chain = chain / _rarefied_step(zarr, mi, r, p, q)
            mi += r
        pm = p**mi
        qrm = q ** (r - mi)
        a = mi * (mi - 1) // 2
        pref = chain * (-zarr / cmath.sqrt(pq)) ** a
        # exponent of (p/q): m(m-1)(2m-1)/12 has an exact doubled-integer form
        pref = pref * _half_power(p / q, mi * (mi - 1) * (2 * mi - 1) // 6)
    else:
        mf = 0.5 * m2
        pm = cmath.exp(mf * cmath.log(p))
        qrm = cmath.exp((r - mf) * cmath.log(q))
        a = mf * (mf - 1.0) / 2.0
        b = mf * (mf - 1.0) * (2.0 * mf - 1.0) / 12.0
        pref = np.exp(a * np.log(-zarr / cmath.sqrt(pq))) * cmath.exp(
            b * cmath.log(p / q)
        )

    g1 = elliptic_gamma(zarr * pm, BaseParams(p**r, pq), budget, guard)
    g2 = elliptic_gamma(zarr * qrm, BaseParams(q**r, pq), budget, guard)
    return _ret(pref * g1 * g2, scalar)
