"""Optimal lower Khinchine constants ``A_q`` for Rademacher and Steinhaus sums."""

from __future__ import annotations

import enum
import math

from .errors import DomainError
from .kernel import LOG_SQRT_PI, log_gamma, solve_q0

__all__ = ["Field", "as_field", "khinchine_a", "khinchine_a_inv_bh", "log_khinchine_a"]


class Field(enum.Enum):
    REAL = "real"
    COMPLEX = "complex"

    def __str__(self):
        return self.value


def as_field(field) -> Field:
    if isinstance(field, Field):
        return field
    try:
        return Field(str(field).strip().lower())
    except ValueError:
        raise DomainError(f"unknown scalar field {field!r}; expected 'real' or 'complex'") from None


def log_khinchine_a(q: float, field=Field.REAL) -> float:
    field = as_field(field)
    q = float(q)
    if field is Field.REAL:
        if not (0 < q < math.inf):
            raise DomainError(f"real Khinchine constant needs 0 < q < inf, got {q}")
        if q <= solve_q0():
            return (0.5 - 1.0 / q) * math.log(2.0)
        return 0.5 * math.log(2.0) + (log_gamma(0.5 * (1.0 + q)) - LOG_SQRT_PI) / q
    if not (1.0 <= q <= 2.0):
        raise DomainError(f"Steinhaus constant is only available for q in [1, 2], got {q}")
    return log_gamma(0.5 * (q + 2.0)) / q


def khinchine_a(q: float, field=Field.REAL) -> float:
    """Best constant ``A_q`` in the lower Khinchine inequality.

    Parameters
    ----------
    q : float
        Integrability exponent.  Any ``0 < q < inf`` for real scalars
        (Rademacher signs); ``1 <= q <= 2`` for complex scalars (Steinhaus
        variables).
    field : Field or str

    Notes
    -----
    For real scalars the constant switches formula at ``q0 = solve_q0()``;
    ``q == q0`` takes the power-of-two branch (both agree there).
    """
    return math.exp(log_khinchine_a(q, field))


def khinchine_a_inv_bh(j: int, field=Field.REAL) -> float:
    """``1 / A_{(2j-2)/j}``, the ``j``-th factor of the BH constant product."""
    if int(j) != j or j < 2:
        raise DomainError(f"j must be an integer >= 2, got {j}")
    return math.exp(-log_khinchine_a((2.0 * j - 2.0) / j, field))
