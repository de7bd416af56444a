"""Exponent algebra for the generalized BH and HL inequalities.

Covers critical exponents, admissibility of multi-exponents, the lambda
ladders used to climb from ``l_inf`` to ``l_p`` factors, interpolation
weights that write a multi-exponent as a convex combination (in reciprocals)
of ``(s, ..., lambda, ..., s)`` vertices, and the constant bounds built from
them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .constants import BoundReport, FormulaId, _bh_value, _check_m, _khinchine_base, log_bh_upper
from .errors import AdmissibilityError, DomainError
from .kernel import INFINITY, ExtendedReal, as_extended, log_gamma
from .khinchine import Field, as_field

__all__ = [
    "DEFAULT_TOL",
    "InterpolationDecomposition",
    "MultiExponent",
    "bh_admissible",
    "check_bh_admissible",
    "check_hl_admissible",
    "gen_bh_upper",
    "gen_bh_upper_prior",
    "gen_hl_upper",
    "hl_admissible",
    "hl_critical_exponent",
    "interpolation_weights",
    "lambda_0",
    "lambda_ladder",
    "lambda_m",
    "max_q_threshold",
    "parse_exponent",
]

DEFAULT_TOL = 1e-9
_EDGE = 1e-12  # slack for closed-interval domain checks on computed inputs


def parse_exponent(token) -> float:
    """Parse ``"4/3"``, ``"1.5"`` or a number exactly, then convert to float."""
    if isinstance(token, (int, float, Fraction)):
        return float(token)
    try:
        return float(Fraction(str(token).strip()))
    except (ValueError, ZeroDivisionError):
        raise DomainError(f"cannot parse exponent {token!r}") from None


@dataclass(frozen=True)
class MultiExponent:
    """An exponent vector ``(q_1, ..., q_m)`` with every ``q_i`` in [1, 2]."""

    q: tuple

    def __init__(self, q: Sequence):
        values = tuple(parse_exponent(x) for x in q)
        if len(values) < 2:
            raise DomainError("a multi-exponent needs at least two entries")
        for x in values:
            if not (1.0 - _EDGE <= x <= 2.0 + _EDGE):
                raise AdmissibilityError(
                    f"exponent {x} outside [1, 2]", constraint="exponent range"
                )
        object.__setattr__(self, "q", values)

    @property
    def m(self) -> int:
        return len(self.q)

    @property
    def max(self) -> float:
        return max(self.q)

    def reciprocal_sum(self) -> float:
        return math.fsum(1.0 / x for x in self.q)

    def __iter__(self):
        return iter(self.q)

    def __len__(self):
        return len(self.q)

    @classmethod
    def uniform(cls, m: int, value: float) -> "MultiExponent":
        return cls([value] * m)


def _as_multi(q) -> MultiExponent:
    return q if isinstance(q, MultiExponent) else MultiExponent(q)


def hl_critical_exponent(m: int, p) -> float:
    """``2mp / (mp + p - 2m)``; equals the BH exponent ``2m/(m+1)`` at ``p = inf``."""
    m = _check_m(m)
    p = as_extended(p)
    if not p.at_least(2 * m):
        raise DomainError(f"need p >= 2m = {2 * m}, got p = {p}")
    if p.is_infinite:
        return 2.0 * m / (m + 1)
    pv = p.value
    return 2.0 * m * pv / (m * pv + pv - 2.0 * m)


def check_bh_admissible(q, tol: float = DEFAULT_TOL) -> MultiExponent:
    """Raise :class:`AdmissibilityError` unless ``sum 1/q_i = (m+1)/2``."""
    q = _as_multi(q)
    target = (q.m + 1) / 2.0
    s = q.reciprocal_sum()
    if abs(s - target) > tol:
        raise AdmissibilityError(
            f"sum 1/q_i = {s!r}, expected (m+1)/2 = {target!r}",
            constraint="exponent sum",
        )
    return q


def bh_admissible(q, tol: float = DEFAULT_TOL) -> bool:
    try:
        check_bh_admissible(q, tol)
    except AdmissibilityError:
        return False
    return True


def hl_sum_target(m: int, p: ExtendedReal) -> float:
    if p.is_infinite:
        return (m + 1) / 2.0
    pv = p.value
    return (m * pv + pv - 2.0 * m) / (2.0 * pv)


def check_hl_admissible(q, p, tol: float = DEFAULT_TOL, mode: str = "equality") -> MultiExponent:
    """Validate ``q`` for the generalized HL inequality at exponent ``p``.

    Parameters
    ----------
    mode : {"equality", "inequality"}
        ``"equality"`` is the border case used by the interpolation machinery
        and requires ``p > 2m``; ``"inequality"`` accepts any reciprocal sum
        up to the target and ``p >= 2m``.
    """
    q = _as_multi(q)
    m = q.m
    p = as_extended(p)
    if mode == "equality":
        if not p.exceeds(2 * m):
            raise DomainError(f"equality-mode admissibility needs p > 2m = {2 * m}, got p = {p}")
    elif mode == "inequality":
        if not p.at_least(2 * m):
            raise DomainError(f"need p >= 2m = {2 * m}, got p = {p}")
    else:
        raise ValueError(f"unknown mode {mode!r}")

    target = hl_sum_target(m, p)
    s = q.reciprocal_sum()
    bad = abs(s - target) > tol if mode == "equality" else s > target + tol
    if bad:
        rel = "=" if mode == "equality" else "<="
        raise AdmissibilityError(
            f"sum 1/q_i = {s!r}, expected {rel} (mp+p-2m)/(2p) = {target!r}",
            constraint="exponent sum",
        )
    lo = 1.0 if p.is_infinite else p.value / (p.value - m)
    for x in q.q:
        if x < lo - _EDGE or x > 2.0 + _EDGE:
            raise AdmissibilityError(
                f"q_i = {x!r} outside [p/(p-m), 2] = [{lo!r}, 2]",
                constraint="exponent range",
            )
    return q


def hl_admissible(q, p, tol: float = DEFAULT_TOL, mode: str = "equality") -> bool:
    try:
        check_hl_admissible(q, p, tol, mode)
    except AdmissibilityError:
        return False
    return True


def lambda_0(m: int, s: float) -> float:
    """``2s / (ms + s + 2 - 2m)`` for ``s`` in ``[(2m-2)/m, 2]``."""
    m = _check_m(m)
    lo = (2.0 * m - 2.0) / m
    if not (lo - _EDGE <= s <= 2.0 + _EDGE):
        raise DomainError(f"s = {s} outside [(2m-2)/m, 2] = [{lo}, 2]")
    return 2.0 * s / (m * s + s + 2.0 - 2.0 * m)


def lambda_m(m: int, p, s: float) -> float:
    """``2ps / (mps + ps + 2p - 2mp - 2ms)``; reduces to :func:`lambda_0` at ``p = inf``."""
    m = _check_m(m)
    p = as_extended(p)
    if not p.exceeds(2 * m):
        raise DomainError(f"need p > 2m = {2 * m}, got p = {p}")
    if p.is_infinite:
        return lambda_0(m, s)
    pv = p.value
    lo = (2.0 * m * pv - 2.0 * pv) / (m * pv - 2.0 * m)
    if not (lo - _EDGE <= s <= 2.0 + _EDGE):
        raise DomainError(f"s = {s} outside [(2mp-2p)/(mp-2m), 2] = [{lo}, 2]")
    return 2.0 * pv * s / (m * pv * s + pv * s + 2.0 * pv - 2.0 * m * pv - 2.0 * m * s)


def lambda_ladder(m: int, p, s: float) -> np.ndarray:
    """``lambda_j = lambda_0 p / (p - j lambda_0)`` for ``j = 0, ..., m``.

    The last rung equals :func:`lambda_m`; consecutive rungs satisfy the
    conjugate relation ``lambda_j/p + lambda_j/lambda_{j+1} = 1``.
    """
    m = _check_m(m)
    p = as_extended(p)
    if p.is_infinite:
        raise DomainError("the lambda ladder is defined for finite p only")
    if not p.exceeds(2 * m):
        raise DomainError(f"need p > 2m = {2 * m}, got p = {p}")
    lam0 = lambda_0(m, s)
    pv = p.value
    j = np.arange(m + 1, dtype=float)
    denom = pv - lam0 * j
    if np.any(denom <= 0):
        raise DomainError("p - j*lambda_0 must stay positive along the ladder")
    return lam0 * pv / denom


def max_q_threshold(m: int) -> float:
    """``(2m^2 - 4m + 2) / (m^2 - m - 1)``: below it the BH product bound holds."""
    m = _check_m(m)
    return (2.0 * m * m - 4.0 * m + 2.0) / (m * m - m - 1.0)


@dataclass(frozen=True)
class InterpolationDecomposition:
    """``q`` written as a convex combination (in reciprocals) of ``m`` vertices.

    Vertex ``j`` carries ``lam`` in slot ``j`` and ``s`` everywhere else.
    """

    s: float
    lam: float
    thetas: np.ndarray
    p: ExtendedReal
    q: MultiExponent

    @property
    def m(self) -> int:
        return self.q.m

    @property
    def vertices(self) -> list[tuple]:
        out = []
        for j in range(self.m):
            v = [self.s] * self.m
            v[j] = self.lam
            out.append(tuple(v))
        return out

    def residuals(self) -> np.ndarray:
        """``theta_j/lam + (1-theta_j)/s - 1/q_j`` for each slot."""
        q = np.asarray(self.q.q)
        return self.thetas / self.lam + (1.0 - self.thetas) / self.s - 1.0 / q


def default_interpolation_s(q) -> float:
    q = _as_multi(q)
    return min(2.0, 0.5 * (q.max + 2.0))


def interpolation_weights(q, p=INFINITY, s: Optional[float] = None, tol: float = DEFAULT_TOL):
    """Convex weights ``theta_j = lam (s - q_j) / (q_j (s - lam))``.

    ``lam`` is :func:`lambda_m` (or :func:`lambda_0` at ``p = inf``) evaluated
    at ``s``, which must lie in ``(max q_i, 2]``; when omitted ``s`` defaults
    to the midpoint ``(max q_i + 2)/2``.
    """
    q = _as_multi(q)
    m = q.m
    p = as_extended(p)
    if not p.exceeds(2 * m):
        raise AdmissibilityError(
            f"p must exceed 2m = {2 * m} for interpolation, got p = {p}", constraint="p <= 2m"
        )
    check_hl_admissible(q, p, tol)
    if s is None:
        s = default_interpolation_s(q)
    s = float(s)
    if s > 2.0:
        raise AdmissibilityError(f"s = {s} > 2", constraint="s > 2")
    if s <= q.max:
        raise AdmissibilityError(f"s = {s} <= max q_i = {q.max}", constraint="s <= max q_i")
    lam = lambda_m(m, p, s)
    qa = np.asarray(q.q)
    thetas = lam * (s - qa) / (qa * (s - lam))
    return InterpolationDecomposition(s=s, lam=lam, thetas=thetas, p=p, q=q)


def _log_case_ii(m: int, maxq: float, field: Field) -> float:
    a = 2.0 * (m - 1) * ((m + 1) / 2.0 - m / maxq)
    b = m * (2.0 / maxq - 1.0)
    return a * _khinchine_base(field) + b * log_bh_upper(m, field)


def _gen_bound(q: MultiExponent, field: Field, p: ExtendedReal, fid: FormulaId) -> BoundReport:
    m = q.m
    thr = max_q_threshold(m)
    maxq = q.max
    if maxq < thr:
        case = "i"
        value = _bh_value(m, field)
        note = "case (i): BH product bound"
    else:
        case = "ii"
        value = math.exp(_log_case_ii(m, maxq, field))
        note = "case (ii): K^(2(m-1)((m+1)/2 - m/maxq)) * B_m^(m(2/maxq - 1))"
    return BoundReport(
        value,
        fid,
        m,
        field,
        p,
        note=note,
        extras={"case": case, "max_q": maxq, "threshold": thr},
    )


def gen_bh_upper(q, field=Field.COMPLEX, tol: float = DEFAULT_TOL) -> BoundReport:
    """Upper bound for the generalized BH constant of an admissible ``q``."""
    q = check_bh_admissible(q, tol)
    return _gen_bound(q, as_field(field), INFINITY, FormulaId.GEN_BH)


def gen_hl_upper(q, p, field=Field.COMPLEX, tol: float = DEFAULT_TOL) -> BoundReport:
    """Upper bound for the generalized HL constant in the border case.

    Case (ii) (``max q_i >= threshold``) is free of ``p``; ``p`` only enters
    through admissibility.
    """
    q = check_hl_admissible(q, p, tol)
    return _gen_bound(q, as_field(field), as_extended(p), FormulaId.GEN_HL)


def _log_bh_partial(k: int) -> float:
    # complex BH product up to k, with the empty product for k = 1
    return 0.0 if k < 2 else log_bh_upper(k, Field.COMPLEX)


def gen_bh_upper_prior(q, tol: float = DEFAULT_TOL, as_printed: bool = False) -> BoundReport:
    """Earlier complex bound for ascending ``q``, kept for comparison.

    It is the weighted geometric mean over vertices ``k = 1..m``; vertex ``k``
    holds ``2k/(k+1)`` in its first ``k`` slots and ``2`` elsewhere, weight
    ``2k(1/q_k - 1/q_{k+1})`` (``2m(1/q_m - 1/2)`` for ``k = m``), and
    constant ``B_k * A_{2k/(k+1)}^{-(m-k)}`` with Steinhaus ``A``.

    Parameters
    ----------
    as_printed : bool
        Use ``Gamma((3k+1)/(2k+2))`` for the vertex Khinchine factor, as the
        formula is usually typeset.  That argument makes the ``k = 1`` vertex
        constant equal to 1, which cannot be a valid bound; the default uses
        ``Gamma((2k+1)/(k+1))``, i.e. ``A_{2k/(k+1)}`` for Steinhaus variables.
    """
    q = check_bh_admissible(q, tol)
    qa = list(q.q)
    if any(b < a for a, b in zip(qa, qa[1:])):
        raise DomainError("the prior bound is stated for ascending exponents q_1 <= ... <= q_m")
    m = q.m
    log_value = _log_bh_partial(m) * 2.0 * m * (1.0 / qa[-1] - 0.5)
    weights = [2.0 * m * (1.0 / qa[-1] - 0.5)]
    for k in range(1, m):
        arg = (3.0 * k + 1.0) / (2.0 * k + 2.0) if as_printed else (2.0 * k + 1.0) / (k + 1.0)
        vertex = log_gamma(arg) * (-(k + 1.0) / (2.0 * k)) * (m - k) + _log_bh_partial(k)
        w = 2.0 * k * (1.0 / qa[k - 1] - 1.0 / qa[k])
        weights.append(w)
        log_value += w * vertex
    return BoundReport(
        math.exp(log_value),
        FormulaId.GEN_BH_PRIOR,
        m,
        Field.COMPLEX,
        INFINITY,
        note="weighted geometric mean of vertex constants B_k A^(-(m-k))",
        extras={"weights": weights, "as_printed": as_printed},
    )
