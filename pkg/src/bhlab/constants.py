"""Upper and lower bounds for the classical BH and HL constants.

All products are accumulated in log space.  The per-``m`` log values of the
BH product are cached as prefix sums so sweeping ``m`` up to 10**4 costs one
vectorised pass.
"""

from __future__ import annotations

import enum
import math
import threading
from functools import lru_cache
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import DomainError
from .kernel import INFINITY, LOG_SQRT_PI, ExtendedReal, as_extended, euler_gamma, log_gamma
from .khinchine import Field, as_field

__all__ = [
    "BoundReport",
    "FormulaId",
    "REAL_SEAM_EXPONENT",
    "bh_envelope",
    "bh_lower_real",
    "bh_upper",
    "hl_lower_real",
    "hl_threshold",
    "hl_upper_best",
    "hl_upper_p_dependent",
    "hl_upper_p_free",
    "hl_upper_sqrt2",
    "log_bh_upper",
]

# 86021/55440 + 13/2: the power of two accumulated by the first twelve real factors.
REAL_SEAM_EXPONENT = Fraction(446381, 55440)
_LN2 = math.log(2.0)


class FormulaId(enum.Enum):
    BH_PRODUCT = "BH_PRODUCT"
    BH_ENVELOPE = "BH_ENVELOPE"
    BH_LOWER = "BH_LOWER"
    HL_LEGACY_SQRT2 = "HL_LEGACY_SQRT2"
    HL_P_DEPENDENT = "HL_P_DEPENDENT"
    HL_P_FREE = "HL_P_FREE"
    HL_BEST = "HL_BEST"
    HL_LOWER = "HL_LOWER"
    GEN_BH = "GEN_BH"
    GEN_BH_PRIOR = "GEN_BH_PRIOR"
    GEN_HL = "GEN_HL"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class BoundReport:
    """A computed constant bound together with where it is valid.

    ``valid`` is False when the parameters fall outside the formula's stated
    domain; ``value`` is still filled in whenever the arithmetic makes sense.
    """

    value: float
    formula_id: FormulaId
    m: int
    field: Optional[Field] = None
    p: Optional[ExtendedReal] = None
    valid: bool = True
    note: str = ""
    extras: dict = dc_field(default_factory=dict, compare=False)

    def __float__(self):
        return self.value


def _check_m(m) -> int:
    if isinstance(m, bool) or int(m) != m or m < 2:
        raise DomainError(f"m must be an integer >= 2, got {m!r}")
    return int(m)


class _PrefixTable:
    """Grow-on-demand prefix sums of the log BH factors for one field."""

    def __init__(self, field: Field):
        self.field = field
        self.values = np.zeros(2)  # indices 0, 1 unused
        self._lock = threading.Lock()

    def _build(self, mmax: int) -> np.ndarray:
        j = np.arange(2, mmax + 1, dtype=float)
        expo = j / (2.0 - 2.0 * j)
        if self.field is Field.COMPLEX:
            terms = expo * log_gamma(2.0 - 1.0 / j)
            cum = np.concatenate(([0.0, 0.0], np.cumsum(terms)))
        else:
            cum = np.zeros(mmax + 1)
            low = np.arange(2, min(mmax, 13) + 1, dtype=float)
            cum[2 : len(low) + 2] = np.cumsum(_LN2 / (2.0 * low - 2.0))
            if mmax >= 14:
                jj = np.arange(14, mmax + 1, dtype=float)
                tail = np.cumsum(jj / (2.0 - 2.0 * jj) * (log_gamma(1.5 - 1.0 / jj) - LOG_SQRT_PI))
                cum[14:] = (float(REAL_SEAM_EXPONENT) - jj / 2.0) * _LN2 + tail
        return cum

    def get(self, m: int) -> float:
        if m >= len(self.values):
            with self._lock:
                if m >= len(self.values):
                    size = max(64, 2 * m)
                    self.values = self._build(size)
        return float(self.values[m])


_TABLES = {f: _PrefixTable(f) for f in Field}


def log_bh_upper(m: int, field=Field.COMPLEX) -> float:
    return _TABLES[as_field(field)].get(_check_m(m))


@lru_cache(maxsize=None)
def _real_power_exponent(m: int) -> float:
    return float(sum(Fraction(1, 2 * j - 2) for j in range(2, m + 1)))


def _bh_value(m: int, field: Field) -> float:
    # the real head is an exact power of two; one rounding instead of exp(log)
    if field is Field.REAL and m <= 13:
        return 2.0 ** _real_power_exponent(m)
    return math.exp(log_bh_upper(m, field))


def _bh_note(m: int, field: Field) -> str:
    if field is Field.COMPLEX:
        return "prod_{j=2}^m Gamma(2-1/j)^(j/(2-2j))"
    if m <= 13:
        return "prod_{j=2}^m 2^(1/(2j-2))  (real, m <= 13)"
    return "2^(446381/55440 - m/2) prod_{j=14}^m (Gamma(3/2-1/j)/sqrt(pi))^(j/(2-2j))  (real, m >= 14)"


def bh_upper(m: int, field=Field.COMPLEX) -> BoundReport:
    """Best known upper bound for the multilinear BH constant.

    Examples
    --------
    >>> round(bh_upper(2, "real").value, 12)
    1.414213562373
    """
    m = _check_m(m)
    field = as_field(field)
    return BoundReport(
        value=_bh_value(m, field),
        formula_id=FormulaId.BH_PRODUCT,
        m=m,
        field=field,
        p=INFINITY,
        note=_bh_note(m, field),
    )


def bh_envelope(m: int, field=Field.COMPLEX) -> BoundReport:
    """Closed-form sublinear envelope dominating :func:`bh_upper`."""
    m = _check_m(m)
    field = as_field(field)
    g = euler_gamma()
    if field is Field.COMPLEX:
        expo = (1.0 - g) / 2.0
        value, note = m**expo, f"m^((1-gamma)/2) = m^{expo:.6f}"
    else:
        expo = (2.0 - math.log(2.0) - g) / 2.0
        value, note = 1.3 * m**expo, f"1.3 m^((2-log 2-gamma)/2) = 1.3 m^{expo:.6f}"
    return BoundReport(value, FormulaId.BH_ENVELOPE, m, field, INFINITY, note=note)


def hl_upper_sqrt2(m: int) -> BoundReport:
    m = _check_m(m)
    return BoundReport(
        value=2.0 ** ((m - 1) / 2.0),
        formula_id=FormulaId.HL_LEGACY_SQRT2,
        m=m,
        note="(sqrt 2)^(m-1)",
    )


def _check_p_hl(m: int, p, strict: bool = False) -> ExtendedReal:
    p = as_extended(p)
    ok = p.exceeds(2 * m) if strict else p.at_least(2 * m)
    if not ok:
        rel = ">" if strict else ">="
        raise DomainError(f"need p {rel} 2m = {2 * m}, got p = {p}")
    return p


def _khinchine_base(field: Field) -> float:
    """Log of the base constant: 2/sqrt(pi) (complex) or sqrt(2) (real)."""
    if field is Field.COMPLEX:
        return math.log(2.0) - LOG_SQRT_PI
    return 0.5 * _LN2


def hl_upper_p_dependent(m: int, p, field=Field.COMPLEX) -> BoundReport:
    """The p-dependent HL bound that tends to the BH bound as ``p -> inf``.

    ``K^(2m(m-1)/p) * B_m^((p-2m)/p)`` with ``K = 2/sqrt(pi)`` (complex) or
    ``sqrt(2)`` (real); ``p = 2m`` is accepted.
    """
    m = _check_m(m)
    field = as_field(field)
    p = _check_p_hl(m, p)
    log_b = log_bh_upper(m, field)
    if p.is_infinite:
        log_value = log_b
    else:
        pv = p.value
        log_value = (2.0 * m * (m - 1) / pv) * _khinchine_base(field) + ((pv - 2.0 * m) / pv) * log_b
    return BoundReport(
        math.exp(log_value),
        FormulaId.HL_P_DEPENDENT,
        m,
        field,
        p,
        note="K^(2m(m-1)/p) * B_m^((p-2m)/p)",
    )


def hl_threshold(m: int) -> int:
    """``2m^3 - 4m^2 + 2m``; above it the HL constant is bounded by the BH bound."""
    m = _check_m(m)
    return 2 * m**3 - 4 * m**2 + 2 * m


def hl_upper_p_free(m: int, p, field=Field.COMPLEX) -> BoundReport:
    m = _check_m(m)
    field = as_field(field)
    p = _check_p_hl(m, p, strict=True)
    thr = hl_threshold(m)
    valid = p.exceeds(thr)
    note = f"BH product, valid for p > {thr}" if valid else f"not valid: requires p > {thr}"
    return BoundReport(
        _bh_value(m, field), FormulaId.HL_P_FREE, m, field, p, valid=valid, note=note
    )


def hl_candidates(m: int, p, field=Field.COMPLEX) -> list[BoundReport]:
    """Every HL upper bound formula evaluated at ``(m, p)``, valid or not."""
    m = _check_m(m)
    field = as_field(field)
    p = _check_p_hl(m, p)
    legacy = hl_upper_sqrt2(m)
    out = [
        BoundReport(legacy.value, legacy.formula_id, m, field, p, note=legacy.note),
        hl_upper_p_dependent(m, p, field),
    ]
    if p.exceeds(2 * m):
        out.append(hl_upper_p_free(m, p, field))
    else:
        out.append(
            BoundReport(
                _bh_value(m, field),
                FormulaId.HL_P_FREE,
                m,
                field,
                p,
                valid=False,
                note="not valid: requires p > 2m^3-4m^2+2m",
            )
        )
    return out


def hl_upper_best(m: int, p, field=Field.COMPLEX) -> BoundReport:
    """Pointwise minimum over all HL upper bounds valid at ``(m, p)``."""
    candidates = [c for c in hl_candidates(m, p, field) if c.valid]
    # ties resolved in list order: legacy, p-dependent, p-free
    best = min(candidates, key=lambda c: c.value)
    return BoundReport(
        best.value,
        FormulaId.HL_BEST,
        best.m,
        best.field,
        best.p,
        note=f"winner: {best.formula_id}",
        extras={"winner": best.formula_id},
    )


def hl_lower_real(m: int, p) -> BoundReport:
    """Known lower bound for the real HL constant (finite ``p >= 2m`` only)."""
    m = _check_m(m)
    p = _check_p_hl(m, p)
    if p.is_infinite:
        raise DomainError("the real HL lower bound is only stated for finite p")
    pv = p.value
    c = 6.0 - 4.0 * math.log2(1.74)
    expo = (m * pv + c * m - 2.0 * m * m - pv) / (m * pv)
    return BoundReport(
        2.0**expo,
        FormulaId.HL_LOWER,
        m,
        Field.REAL,
        p,
        note="2^((mp + (6 - 4 log2 1.74) m - 2m^2 - p)/(mp))",
        extras={"exponent": expo},
    )


def bh_lower_real(m: int) -> BoundReport:
    m = _check_m(m)
    return BoundReport(
        2.0 ** (1.0 - 1.0 / m), FormulaId.BH_LOWER, m, Field.REAL, INFINITY, note="2^(1-1/m)"
    )
