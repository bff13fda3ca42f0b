"""Base parameters (p, q, optional rarefication order r) and quasi-periods."""

from __future__ import annotations

import cmath
from dataclasses import dataclass

from .errors import InvalidBase


def _check_base(name: str, value: complex) -> complex:
    value = complex(value)
    if value == 0:
        raise InvalidBase(f"{name} must be nonzero")
    if abs(value) >= 1.0:
        raise InvalidBase(f"|{name}| must be < 1, got |{name}| = {abs(value)!r}")
    return value


@dataclass(frozen=True)
class BaseParams:
    """Bases p and q with |p|, |q| < 1, plus an optional rarefication order r."""

    p: complex
    q: complex
    r: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", _check_base("p", self.p))
        object.__setattr__(self, "q", _check_base("q", self.q))
        if self.r is not None:
            if not isinstance(self.r, int) or self.r < 1:
                raise InvalidBase(f"r must be a positive integer, got {self.r!r}")

    @property
    def pq(self) -> complex:
        return self.p * self.q

    def swapped(self) -> "BaseParams":
        return BaseParams(self.q, self.p, self.r)


@dataclass(frozen=True)
class QuasiPeriods:
    """Three quasi-periods and the six bases they generate.

    The bases are p = e^{2pi i w3/w2}, q = e^{2pi i w1/w2}, r = e^{2pi i w3/w1}
    and the partners pt = e^{-2pi i w2/w3}, qt = e^{-2pi i w2/w1},
    rt = e^{-2pi i w1/w3}.  Pairwise incommensurability of the periods cannot
    be decided numerically and is never checked.
    """

    omega1: complex
    omega2: complex
    omega3: complex

    def __post_init__(self) -> None:
        for name in ("omega1", "omega2", "omega3"):
            if complex(getattr(self, name)) == 0:
                raise InvalidBase(f"{name} must be nonzero")

    @property
    def p(self) -> complex:
        return cmath.exp(2j * cmath.pi * self.omega3 / self.omega2)

    @property
    def q(self) -> complex:
        return cmath.exp(2j * cmath.pi * self.omega1 / self.omega2)

    @property
    def r(self) -> complex:
        return cmath.exp(2j * cmath.pi * self.omega3 / self.omega1)

    @property
    def p_partner(self) -> complex:
        return cmath.exp(-2j * cmath.pi * self.omega2 / self.omega3)

    @property
    def q_partner(self) -> complex:
        return cmath.exp(-2j * cmath.pi * self.omega2 / self.omega1)

    @property
    def r_partner(self) -> complex:
        return cmath.exp(-2j * cmath.pi * self.omega1 / self.omega3)

    @property
    def total(self) -> complex:
        return self.omega1 + self.omega2 + self.omega3
