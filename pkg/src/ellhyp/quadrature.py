"""Trapezoidal quadrature on the unit torus and its tensor powers.

For integrands analytic in an annulus around |z| = 1, the N-point trapezoid
rule on the circle converges geometrically, so the refinement certificate is
simply two successive doublings of N agreeing to the requested tolerance.
Node evaluation order and the pairwise reduction are fixed, making results
bit-deterministic.

`IntegrandSpec` describes integrands built from (rarefied) elliptic gamma
factors Gamma(c * prod z_i^{e_i}); denominator factors are evaluated through
the exact inversion 1/Gamma(w) = Gamma(pq/w), which keeps every gamma
argument well inside the unit disk whenever the pole audit passes.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

from .bases import BaseParams
from .budget import DEFAULT_BUDGET, DEFAULT_POLE_GUARD, SeriesBudget
from .errors import InvalidArgument, NoConvergence, PoleOnContour
from .gammas import elliptic_gamma, rarefied_gamma

__all__ = [
    "TorusQuadrature",
    "QuadDiagnostics",
    "GammaFactor",
    "IntegrandSpec",
    "PoleAudit",
    "torus_nodes",
    "torus_mean",
    "audit_poles",
    "integrate_torus",
    "integrate_rarefied",
]

ENV_MAX_NODES = "ELLHYP_MAX_NODES"
MAX_TOTAL_NODES = 2**24


@dataclass(frozen=True)
class TorusQuadrature:
    """Refinement policy for tensor-product trapezoid rules.

    ``nodes_per_dim`` is the starting resolution (a power of two, >= 16);
    refinement doubles it until two successive estimates agree to ``rel_tol``
    (or ``abs_tol`` for values near zero), capped at ``max_nodes_per_dim``.
    """

    dim: int = 1
    nodes_per_dim: int = 32
    max_nodes_per_dim: int = 4096
    rel_tol: float = 1e-11
    abs_tol: float = 1e-14

    def __post_init__(self) -> None:
        if self.dim not in (1, 2, 3):
            raise InvalidArgument("dim must be 1, 2 or 3")
        n = self.nodes_per_dim
        if n < 16 or (n & (n - 1)) != 0:
            raise InvalidArgument("nodes_per_dim must be a power of two >= 16")
        if self.max_nodes_per_dim < n:
            raise InvalidArgument("max_nodes_per_dim must be >= nodes_per_dim")
        if self.max_nodes_per_dim**self.dim > MAX_TOTAL_NODES:
            raise InvalidArgument(
                f"total node cap exceeded: {self.max_nodes_per_dim}^{self.dim} "
                f"> {MAX_TOTAL_NODES}"
            )

    def effective_cap(self) -> int:
        env = os.environ.get(ENV_MAX_NODES)
        if env is None:
            return self.max_nodes_per_dim
        try:
            cap = int(env)
        except ValueError as exc:
            raise InvalidArgument(f"{ENV_MAX_NODES} must be an integer") from exc
        return min(self.max_nodes_per_dim, max(cap, self.nodes_per_dim))


@dataclass
class QuadDiagnostics:
    """Successive estimates of one refinement run."""

    nodes_history: list[int] = field(default_factory=list)
    estimates: list[complex] = field(default_factory=list)
    converged: bool = False
    rel_delta: float = math.inf

    @property
    def final_nodes_per_dim(self) -> int:
        return self.nodes_history[-1] if self.nodes_history else 0

    def to_dict(self) -> dict:
        return {
            "nodes_history": self.nodes_history,
            "estimates": [[v.real, v.imag] for v in self.estimates],
            "converged": self.converged,
            "rel_delta": self.rel_delta,
        }


def torus_nodes(dim: int, n: int) -> tuple[np.ndarray, ...]:
    """Flattened tensor grid of n-th roots of unity per dimension."""
    circle = np.exp(2j * np.pi * np.arange(n) / n)
    if dim == 1:
        return (circle,)
    grids = np.meshgrid(*([circle] * dim), indexing="ij")
    return tuple(g.reshape(-1) for g in grids)


def torus_mean(fn, quad: TorusQuadrature) -> tuple[complex, QuadDiagnostics]:
    """Mean of fn over the torus grid, refined until certified.

    The mean equals (2*pi*i)^{-dim} times the contour integral of
    fn(z) * prod dz_i/z_i over the positively oriented unit torus.
    """
    diag = QuadDiagnostics()
    cap = quad.effective_cap()
    n = quad.nodes_per_dim
    prev: complex | None = None
    while n <= cap:
        vals = fn(torus_nodes(quad.dim, n))
        est = complex(np.mean(vals))
        diag.nodes_history.append(n)
        diag.estimates.append(est)
        if prev is not None:
            delta = abs(est - prev)
            scale = max(abs(est), abs(prev))
            diag.rel_delta = delta / scale if scale > 0 else 0.0
            if delta <= quad.rel_tol * scale or delta <= quad.abs_tol:
                diag.converged = True
                return est, diag
        prev = est
        n *= 2
    raise NoConvergence(
        f"no two successive estimates agreed to rel_tol={quad.rel_tol} "
        f"within the {cap}-node cap (last delta {diag.rel_delta:.3e})"
    )


@dataclass(frozen=True)
class GammaFactor:
    """One gamma factor Gamma(param * prod z_i^{exponents[i]}).

    ``charge`` is the discrete rarefied charge; it is ignored by plain torus
    integration and couples to the sector index m as charge + e*m (with e the
    z-exponent) in rarefied sums.
    """

    param: complex
    exponents: tuple[int, ...]
    charge: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "param", complex(self.param))
        object.__setattr__(self, "exponents", tuple(int(e) for e in self.exponents))
        if any(abs(e) > 2 for e in self.exponents):
            raise InvalidArgument("gamma factor exponents must satisfy |e| <= 2")


@dataclass(frozen=True)
class IntegrandSpec:
    """Symbolic gamma-ratio integrand over a dim-torus."""

    dim: int
    numerator: tuple[GammaFactor, ...]
    denominator: tuple[GammaFactor, ...]
    measure: str = "torus_dz_over_z"
    prefactor: complex = 1.0 + 0.0j

    def __post_init__(self) -> None:
        object.__setattr__(self, "numerator", tuple(self.numerator))
        object.__setattr__(self, "denominator", tuple(self.denominator))
        if self.measure not in ("torus_dz_over_z", "haar_su_n"):
            raise InvalidArgument(f"unknown measure {self.measure!r}")
        for f in self.numerator + self.denominator:
            if len(f.exponents) != self.dim:
                raise InvalidArgument("factor exponent arity must equal dim")


def _monomial(zs: tuple[np.ndarray, ...], exponents: tuple[int, ...]) -> np.ndarray:
    out = np.ones_like(zs[0])
    for z, e in zip(zs, exponents):
        if e:
            out = out * z**e
    return out


def compile_integrand(
    spec: IntegrandSpec,
    base: BaseParams,
    budget: SeriesBudget | None = None,
    sector: float | None = None,
    guard: float = DEFAULT_POLE_GUARD,
):
    """Turn an IntegrandSpec into a vectorized callable over torus nodes.

    With ``sector`` set (rarefied mode, dim 1 only), factors evaluate as
    rarefied gammas with effective charge n + e*m; otherwise as standard
    elliptic gammas.  Denominators use 1/Gamma(w, n) = Gamma(pq/w, -n).
    """
    budget = budget or DEFAULT_BUDGET
    pq = base.pq
    rarefied = sector is not None
    if rarefied and spec.dim != 1:
        raise InvalidArgument("rarefied sectors are supported for dim 1 only")

    def fn(zs: tuple[np.ndarray, ...]) -> np.ndarray:
        vals = np.full_like(zs[0], spec.prefactor)
        for f in spec.numerator:
            arg = f.param * _monomial(zs, f.exponents)
            if rarefied:
                n_eff = f.charge + f.exponents[0] * sector
                vals = vals * rarefied_gamma(arg, n_eff, base, budget, guard)
            else:
                vals = vals * elliptic_gamma(arg, base, budget, guard)
        for f in spec.denominator:
            arg = f.param * _monomial(zs, f.exponents)
            if rarefied:
                n_eff = f.charge + f.exponents[0] * sector
                vals = vals * rarefied_gamma(pq / arg, -n_eff, base, budget, guard)
            else:
                vals = vals * elliptic_gamma(pq / arg, base, budget, guard)
        if spec.measure == "haar_su_n":
            vals = vals * _haar_weight(zs)
        return vals

    return fn


def _haar_weight(zs: tuple[np.ndarray, ...]) -> np.ndarray:
    """Delta(z) Delta(z^{-1}) for SU(N) with z_N = 1/(z_1...z_{N-1})."""
    zlast = np.ones_like(zs[0])
    for z in zs:
        zlast = zlast / z
    full = list(zs) + [zlast]
    out = np.ones_like(zs[0])
    for a in range(len(full)):
        for b in range(a + 1, len(full)):
            u = full[a] / full[b]
            out = out * (1.0 - u) * (1.0 - 1.0 / u)
    return out


@dataclass
class PoleAudit:
    """Classification of integrand pole families relative to the unit torus."""

    inside_poles: list[complex]
    outside_poles: list[complex]
    min_distance_to_contour: float
    separated: bool
    guard: float

    @property
    def passed(self) -> bool:
        return self.separated and self.min_distance_to_contour >= self.guard

    def to_dict(self) -> dict:
        return {
            "n_inside": len(self.inside_poles),
            "n_outside": len(self.outside_poles),
            "min_distance_to_contour": self.min_distance_to_contour,
            "separated": self.separated,
            "guard": self.guard,
            "passed": self.passed,
        }


def _zero_modulus_bound(base: BaseParams, charge: float) -> float:
    """Largest modulus of a zero of Gamma^{(r)}(w, n) (standard: |pq|)."""
    ap, aq = abs(base.p), abs(base.q)
    if base.r is None or base.r == 1:
        return ap * aq
    r = base.r
    n = int(round(charge)) % r
    return max(ap ** (r + 1 - n) * aq, aq ** (n + 1) * ap)


def audit_poles(
    spec: IntegrandSpec, base: BaseParams, guard: float = DEFAULT_POLE_GUARD
) -> PoleAudit:
    """Check that every integrand pole family stays off the unit torus.

    Numerator factors Gamma(c z^e) put poles on radii (|P|/|c|)^(1/e) with P
    on the pole lattice; denominator factors put integrand poles at gamma
    zeros.  The audit records representative radii, whether each family stays
    strictly on one side of |z| = 1, and the minimum distance to the contour.
    """
    ap, aq = abs(base.p), abs(base.q)
    inside: list[complex] = []
    outside: list[complex] = []
    min_dist = 1.0
    separated = True

    def classify(radius: float, rep: complex) -> None:
        nonlocal min_dist, separated
        if radius == 0.0 or not math.isfinite(radius):
            return
        min_dist = min(min_dist, abs(radius - 1.0))
        if radius < 1.0:
            inside.append(rep)
        else:
            outside.append(rep)

    lattice_decay = ap * aq  # one lattice shell multiplies moduli by <= this

    for f in spec.numerator:
        c = abs(f.param)
        if c == 0:
            raise InvalidArgument("gamma factor parameter must be nonzero")
        for i, e in enumerate(f.exponents):
            if e == 0:
                continue
            # pole radii: (|P|/c)^(1/e), |P| = 1, 1/|p|, 1/|q|, ... (>= 1)
            start = (1.0 / c) ** (1.0 / e)
            rep = f.param if spec.dim == 1 and e == 1 else complex(start)
            classify(start, rep)
            if e > 0 and start < 1.0:
                separated = False  # family diverges outward through T
                radius = start
                while radius < 1.0 + guard:
                    radius *= (1.0 / lattice_decay) ** (1.0 / e)
                    classify(radius, complex(radius))
            if e < 0 and start > 1.0:
                separated = False  # family converges inward through T
                radius = start
                while radius > 1.0 - guard:
                    radius *= lattice_decay ** (1.0 / abs(e))
                    classify(radius, complex(radius))
    for f in spec.denominator:
        c = abs(f.param)
        if c == 0:
            raise InvalidArgument("gamma factor parameter must be nonzero")
        zmax = _zero_modulus_bound(base, f.charge)
        for i, e in enumerate(f.exponents):
            if e == 0:
                continue
            start = (zmax / c) ** (1.0 / e)
            classify(start, complex(start))
            if e > 0 and start > 1.0 - guard:
                separated = False
            if e < 0 and start < 1.0 + guard:
                separated = False
    return PoleAudit(inside, outside, min_dist, separated, guard)


def integrate_torus(
    spec: IntegrandSpec,
    quad: TorusQuadrature,
    base: BaseParams,
    budget: SeriesBudget | None = None,
    guard: float = DEFAULT_POLE_GUARD,
) -> tuple[complex, QuadDiagnostics]:
    """Certified value of prefactor * (2 pi i)^{-dim} * contour integral.

    The integrand is the gamma ratio described by ``spec`` over the
    positively oriented unit torus with measure prod dz_i / z_i (an SU(N)
    Haar weight and 1/N! are folded in for measure "haar_su_n").
    """
    if quad.dim != spec.dim:
        raise InvalidArgument("quadrature dim must match spec dim")
    audit = audit_poles(spec, base, guard)
    if not audit.passed:
        raise PoleOnContour(
            f"pole audit failed: separated={audit.separated}, "
            f"min distance {audit.min_distance_to_contour:.3e} < guard {guard:.1e}"
        )
    fn = compile_integrand(spec, base, budget, guard=guard)
    mean, diag = torus_mean(fn, quad)
    if spec.measure == "haar_su_n":
        mean /= math.factorial(spec.dim + 1)
    return mean, diag


def integrate_rarefied(
    spec: IntegrandSpec,
    quad: TorusQuadrature,
    base: BaseParams,
    nu: float = 0.0,
    budget: SeriesBudget | None = None,
    guard: float = DEFAULT_POLE_GUARD,
    use_symmetry: bool = False,
) -> tuple[complex, list[QuadDiagnostics]]:
    """Finite sum over discrete sectors m in {nu, 1+nu, ..., r-1+nu} of the
    per-sector contour integral of a rarefied gamma-ratio integrand.

    With ``use_symmetry`` the reflection c_m = c_{r-m} halves the work for
    the sectors it pairs up.
    """
    if base.r is None:
        raise InvalidArgument("integrate_rarefied requires a base with r set")
    if nu not in (0.0, 0.5):
        raise InvalidArgument("nu must be 0 or 1/2")
    r = base.r
    sectors = [m + nu for m in range(r)]
    total = 0.0 + 0.0j
    diags: list[QuadDiagnostics] = []
    cache: dict[float, complex] = {}
    for m in sectors:
        partner = r - m  # c_m = c_{r-m}
        if use_symmetry and partner in cache:
            total += cache[partner]
            continue
        audit = audit_poles(spec, base, guard)
        if not audit.passed:
            raise PoleOnContour(f"pole audit failed in sector m={m}")
        fn = compile_integrand(spec, base, budget, sector=m, guard=guard)
        val, diag = torus_mean(fn, quad)
        diags.append(diag)
        cache[m] = val
        total += val
    return total, diags
