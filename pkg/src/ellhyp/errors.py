"""Exception hierarchy shared by all ellhyp modules."""


class EllhypError(Exception):
    """Base class for every error raised by this package."""


class InvalidBase(EllhypError, ValueError):
    """A base parameter violates its modulus constraint (|p| < 1 etc.)."""


class InvalidArgument(EllhypError, ValueError):
    """An argument is outside the operation's domain (z = 0, bad charge, ...)."""


class BudgetExhausted(EllhypError, RuntimeError):
    """A series or product hit its term cap before meeting the tail tolerance."""


class NearPole(EllhypError, ArithmeticError):
    """An evaluation point sits within the guard distance of a pole lattice."""


class DomainError(EllhypError, ValueError):
    """A representation's convergence region does not contain the input."""


class NoConvergentRepresentation(EllhypError, ValueError):
    """No product representation of the modified gamma function converges."""


class PoleOnContour(EllhypError, ValueError):
    """A pole audit failed: integrand poles touch or cross the torus."""


class NoConvergence(EllhypError, RuntimeError):
    """Quadrature refinement hit the node cap without the certificate."""


class WindowViolation(EllhypError, ValueError):
    """A transformation's parameter window constraint is violated."""


class AuditFailure(EllhypError, ValueError):
    """A theory/integrand audit failed (offending item named in args)."""


class UnknownFunction(EllhypError, KeyError):
    """CLI: requested function name is not in the registry."""


class SchemaError(EllhypError, ValueError):
    """A JSON document does not match its schema."""
