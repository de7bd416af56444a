"""Desk-scale numerical checks of the inequalities on explicit multilinear forms.

A form ``T`` on ``K^n x ... x K^n`` is stored through its coefficients
``a[j1, ..., jm] = T(e_j1, ..., e_jm)``.  Ratios of a mixed coefficient norm
to the operator norm are certified lower bounds for the optimal constant as
long as the denominator is exact or an upper bound, which is what
:func:`certify_ratio` guarantees.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .constants import bh_upper, hl_upper_best
from .errors import BoundViolationError, CapExceededError, DomainError, TensorDataError
from .exponents import (
    MultiExponent,
    gen_hl_upper,
    hl_admissible,
    hl_critical_exponent,
    parse_exponent,
)
from .kernel import ExtendedReal, as_extended
from .khinchine import Field, as_field

__all__ = [
    "CertifiedRatio",
    "CoefficientTensor",
    "DEFAULT_CAP",
    "HARD_CAP",
    "NormEstimate",
    "SearchResult",
    "applicable_upper_bound",
    "ascent_run",
    "certified_ratio",
    "certify_ratio",
    "hadamard_block_form",
    "mixed_norm",
    "random_tensor",
    "search_extremal",
    "sup_norm_ascent",
    "sup_norm_exact_real_linf",
    "sup_norm_upper_holder",
]

DEFAULT_CAP = 24
HARD_CAP = 28
HADAMARD_MAX_M = 5
_CHUNK = 1 << 22  # floats per intermediate block during enumeration


@dataclass
class CoefficientTensor:
    """Coefficients of an ``m``-linear form, stored as an ``n x ... x n`` array."""

    entries: np.ndarray
    field: Field = Field.REAL

    def __post_init__(self):
        self.field = as_field(self.field)
        dtype = complex if self.field is Field.COMPLEX else float
        arr = np.asarray(self.entries)
        if self.field is Field.REAL and np.iscomplexobj(arr):
            raise TensorDataError("complex entries in a real tensor")
        arr = arr.astype(dtype)
        if arr.ndim < 1:
            raise TensorDataError("a coefficient tensor needs m >= 1")
        n = arr.shape[0]
        if n < 1 or any(d != n for d in arr.shape):
            raise TensorDataError(f"all dimensions must be equal, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise TensorDataError("tensor entries must be finite")
        self.entries = arr

    @property
    def m(self) -> int:
        return self.entries.ndim

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def is_zero(self) -> bool:
        return not np.any(self.entries)

    def to_dict(self) -> dict:
        flat = self.entries.reshape(-1)
        if self.field is Field.COMPLEX:
            data = [[float(z.real), float(z.imag)] for z in flat]
        else:
            data = [float(x) for x in flat]
        return {"m": self.m, "n": self.n, "field": str(self.field), "entries": data, "layout": "row-major"}

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, doc: dict) -> "CoefficientTensor":
        if not isinstance(doc, dict):
            raise TensorDataError("tensor document must be a JSON object")
        missing = [k for k in ("m", "n", "field", "entries") if k not in doc]
        if missing:
            raise TensorDataError(f"tensor document is missing keys: {', '.join(missing)}")
        layout = doc.get("layout", "row-major")
        if layout != "row-major":
            raise TensorDataError(f"unsupported layout {layout!r}; only 'row-major' is accepted")
        m, n = doc["m"], doc["n"]
        if not (isinstance(m, int) and isinstance(n, int)) or m < 1 or n < 1:
            raise TensorDataError("'m' and 'n' must be positive integers")
        try:
            fld = as_field(doc["field"])
        except DomainError as exc:
            raise TensorDataError(str(exc)) from None
        entries = doc["entries"]
        expected = n**m
        if not isinstance(entries, list) or len(entries) != expected:
            got = len(entries) if isinstance(entries, list) else type(entries).__name__
            raise TensorDataError(f"expected n^m = {expected} entries, got {got}")
        try:
            if fld is Field.COMPLEX:
                pairs = np.asarray(entries, dtype=float)
                if pairs.shape != (expected, 2):
                    raise ValueError
                arr = pairs[:, 0] + 1j * pairs[:, 1]
            else:
                arr = np.asarray(entries, dtype=float)
                if arr.shape != (expected,):
                    raise ValueError
        except (TypeError, ValueError):
            shape = "[re, im] pairs" if fld is Field.COMPLEX else "numbers"
            raise TensorDataError(f"entries must be a flat list of {shape}") from None
        return cls(arr.reshape((n,) * m), fld)

    @classmethod
    def from_json(cls, text: str) -> "CoefficientTensor":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise TensorDataError(f"invalid JSON: {exc}") from None
        return cls.from_dict(doc)


@dataclass(frozen=True)
class NormEstimate:
    value: float
    kind: str  # "EXACT" | "LOWER_BOUND" | "UPPER_BOUND"
    method: str
    iterations: int = 0
    seed: Optional[int] = None


def _require_nonzero(t: CoefficientTensor):
    if t.is_zero():
        raise TensorDataError("tensor is identically zero")


def _exponents(q) -> list[float]:
    if isinstance(q, MultiExponent):
        return list(q.q)
    return [math.inf if str(x).strip().lower() == "inf" else parse_exponent(x) for x in q]


def _lq_reduce(a: np.ndarray, r: float) -> np.ndarray:
    """``l_r`` norm over the last axis of a nonnegative array."""
    if math.isinf(r):
        return a.max(axis=-1)
    if r == 1.0:
        return a.sum(axis=-1)
    if r == 2.0:
        return np.sqrt(np.einsum("...i,...i->...", a, a))
    # rescale by the max to avoid under/overflow in a**r
    scale = a.max(axis=-1, keepdims=True)
    safe = np.where(scale > 0, scale, 1.0)
    return safe[..., 0] * ((a / safe) ** r).sum(axis=-1) ** (1.0 / r)


def mixed_norm(t: CoefficientTensor, q) -> float:
    """Nested norm with ``q[-1]`` on the innermost index and ``q[0]`` outermost.

    Examples
    --------
    >>> t = CoefficientTensor(np.array([[1.0, 1.0], [1.0, -1.0]]))
    >>> round(mixed_norm(t, [2, 2]), 12)
    2.0
    """
    qs = _exponents(q)
    if len(qs) != t.m:
        raise TensorDataError(f"dimension mismatch: tensor has m = {t.m}, exponent has {len(qs)} entries")
    for r in qs:
        if not r >= 1.0:
            raise DomainError(f"mixed-norm exponents must be >= 1, got {r}")
    a = np.abs(t.entries)
    for r in reversed(qs):
        a = _lq_reduce(a, r)
    return float(a)


@lru_cache(maxsize=32)
def _sign_matrix(n: int) -> np.ndarray:
    """All sign vectors in ``{-1, 1}^n`` with first coordinate +1, one per row."""
    k = n - 1
    codes = np.arange(1 << k, dtype=np.int64)
    bits = (codes[:, None] >> np.arange(k, dtype=np.int64)) & 1
    out = np.hstack([np.ones((1 << k, 1)), 1.0 - 2.0 * bits])
    out.flags.writeable = False
    return out


def _exact_linf(arr: np.ndarray, signs: np.ndarray) -> float:
    # arr: (batch, n, ..., n).  Each remaining argument but the last is
    # enumerated over sign vectors; the last is resolved as sum |c_j|.
    if arr.ndim == 2:
        return float(np.abs(arr).sum(axis=1).max())
    batch = arr.shape[0]
    rest = int(np.prod(arr.shape[2:]))
    per_row = signs.shape[0] * rest
    step = max(1, _CHUNK // max(per_row, 1))
    best = 0.0
    for start in range(0, batch, step):
        block = arr[start : start + step]
        contracted = np.tensordot(block, signs, axes=([1], [1]))  # (b, rest..., S)
        contracted = np.moveaxis(contracted, -1, 1)
        nxt = contracted.reshape((-1,) + arr.shape[2:])
        best = max(best, _exact_linf(nxt, signs))
    return best


def sup_norm_exact_real_linf(t: CoefficientTensor, cap: int = DEFAULT_CAP) -> NormEstimate:
    """Exact norm of a real form on ``l_inf^n x ... x l_inf^n``.

    The first ``m - 1`` arguments range over sign vectors (with one global
    sign fixed per argument, since flipping a whole argument only flips the
    sign of the inner sums); the last argument is optimal at
    ``x_j = sign(c_j)``, giving ``sum_j |c_j|``.
    """
    if t.field is not Field.REAL:
        raise DomainError("exact enumeration is only available for real tensors")
    if cap > HARD_CAP:
        raise CapExceededError(f"cap {cap} exceeds the hard limit {HARD_CAP}")
    if t.n * (t.m - 1) > cap:
        raise CapExceededError(f"n(m-1) = {t.n * (t.m - 1)} exceeds the enumeration cap {cap}")
    if t.m == 1:
        value = float(np.abs(t.entries).sum())
        patterns = 1
    else:
        signs = _sign_matrix(t.n)
        value = _exact_linf(t.entries[None, ...], signs)
        patterns = signs.shape[0] ** (t.m - 1)
    return NormEstimate(value, "EXACT", "sign-enumeration", iterations=patterns)


def _dual_exponent(p: ExtendedReal) -> float:
    if p.is_infinite:
        return 1.0
    if p.value == 1.0:
        return math.inf
    return p.value / (p.value - 1.0)


def sup_norm_upper_holder(t: CoefficientTensor, p) -> NormEstimate:
    """Upper bound on the ``l_p`` operator norm from ``m`` nested Hölder steps."""
    p = as_extended(p)
    if not p.at_least(2.0):
        raise DomainError(f"Hölder bound implemented for p >= 2, got p = {p}")
    r = _dual_exponent(p)
    value = mixed_norm(t, [r] * t.m)
    return NormEstimate(value, "UPPER_BOUND", f"nested Hölder, exponent {r!r}")


def _contract_except(arr: np.ndarray, xs: Sequence[np.ndarray], k: int) -> np.ndarray:
    # contract trailing modes first so axis indices stay valid
    out = arr
    for i in range(len(xs) - 1, -1, -1):
        if i != k:
            out = np.tensordot(out, xs[i], axes=([i], [0]))
    return out


def _ball_maximizer(c: np.ndarray, p: ExtendedReal, complex_field: bool) -> np.ndarray:
    """Point of the unit ``l_p`` ball maximizing ``|sum c_j x_j|``."""
    mag = np.abs(c)
    if complex_field:
        phase = np.where(mag > 0, np.conj(c) / np.where(mag > 0, mag, 1.0), 1.0)
    else:
        phase = np.where(c < 0, -1.0, 1.0)
    if p.is_infinite:
        return phase
    if p.value == 1.0:
        x = np.zeros_like(phase)
        j = int(np.argmax(mag))
        x[j] = phase[j]
        return x
    r = _dual_exponent(p)
    norm = float(np.sum(mag**r) ** (1.0 / r))
    if norm == 0.0:
        x = np.zeros_like(phase)
        x[0] = 1.0
        return x
    return phase * (mag / norm) ** (r - 1.0)


def _random_ball_point(rng: np.random.Generator, n: int, p: ExtendedReal, complex_field: bool):
    if complex_field:
        x = rng.uniform(0.2, 1.0, n) * np.exp(2j * np.pi * rng.uniform(size=n))
    else:
        x = rng.uniform(-1.0, 1.0, n)
    if p.is_infinite:
        return x
    norm = np.sum(np.abs(x) ** p.value) ** (1.0 / p.value)
    return x / norm


def _form_value(arr: np.ndarray, xs: Sequence[np.ndarray]) -> float:
    out = arr
    for x in reversed(xs):
        out = np.tensordot(out, x, axes=([out.ndim - 1], [0]))
    return float(abs(out))


def ascent_run(t: CoefficientTensor, p, xs: Sequence[np.ndarray], max_sweeps: int = 500, rel_tol: float = 1e-10):
    """Alternating maximization from given starting vectors.

    Each half-step replaces one argument by the exact maximizer over the
    ``l_p`` ball with the others frozen, so the recorded objective sequence
    is nondecreasing.

    Returns
    -------
    value : float
    xs : list of ndarray
        Final arguments.
    history : list of float
        Objective after each sweep (entry 0 is the starting value).
    """
    p = as_extended(p)
    complex_field = t.field is Field.COMPLEX
    xs = [np.array(x, dtype=complex if complex_field else float) for x in xs]
    value = _form_value(t.entries, xs)
    history = [value]
    for _ in range(max_sweeps):
        prev = value
        for k in range(t.m):
            c = _contract_except(t.entries, xs, k)
            xs[k] = _ball_maximizer(c, p, complex_field)
        value = _form_value(t.entries, xs)
        history.append(value)
        if value - prev <= rel_tol * max(value, 1e-300):
            break
    return value, xs, history


def sup_norm_ascent(
    t: CoefficientTensor,
    p,
    starts: int = 32,
    max_sweeps: int = 500,
    rel_tol: float = 1e-10,
    seed: int = 0,
) -> NormEstimate:
    """Multi-start alternating maximization; a lower bound on ``||T||``.

    Start ``i`` draws from its own child of ``SeedSequence(seed)``, so the
    result does not depend on the order in which starts are evaluated; ties
    go to the lowest start index.
    """
    p = as_extended(p)
    if not p.at_least(1.0):
        raise DomainError(f"need p >= 1, got p = {p}")
    if starts < 1:
        raise DomainError("starts must be >= 1")
    complex_field = t.field is Field.COMPLEX
    children = np.random.SeedSequence(seed).spawn(starts)
    best = -1.0
    sweeps = 0
    for child in children:
        rng = np.random.default_rng(child)
        xs = [_random_ball_point(rng, t.n, p, complex_field) for _ in range(t.m)]
        value, _, history = ascent_run(t, p, xs, max_sweeps, rel_tol)
        sweeps += len(history) - 1
        if value > best:
            best = value
    return NormEstimate(best, "LOWER_BOUND", "alternating maximization", iterations=sweeps, seed=seed)


@dataclass(frozen=True)
class CertifiedRatio:
    value: float
    numerator: float
    denominator: NormEstimate
    q: tuple
    p: ExtendedReal


def certify_ratio(t: CoefficientTensor, q, p, cap: int = DEFAULT_CAP, require_exact: bool = False) -> CertifiedRatio:
    """``mixed_norm(t, q) / D`` with ``D`` exact or a certified upper bound.

    ``D`` is exact for real tensors at ``p = inf`` within the enumeration
    cap and the nested Hölder bound otherwise; with ``require_exact`` a cap
    overflow raises :class:`CapExceededError` instead of falling back.
    """
    p = as_extended(p)
    _require_nonzero(t)
    num = mixed_norm(t, q)
    exact_ok = t.field is Field.REAL and p.is_infinite
    if exact_ok and t.n * (t.m - 1) <= cap:
        den = sup_norm_exact_real_linf(t, cap)
    elif exact_ok and require_exact:
        raise CapExceededError(f"n(m-1) = {t.n * (t.m - 1)} exceeds the enumeration cap {cap}")
    else:
        den = sup_norm_upper_holder(t, p)
    return CertifiedRatio(num / den.value, num, den, tuple(_exponents(q)), p)


def certified_ratio(t: CoefficientTensor, q, p, cap: int = DEFAULT_CAP) -> float:
    return certify_ratio(t, q, p, cap).value


def applicable_upper_bound(m: int, p, q, field=Field.REAL, tol: float = 1e-9) -> Optional[float]:
    """Best proved upper bound on the constant for ``(m, p, q)``, or None.

    All-equal critical exponents use the classical BH/HL bounds; other
    border-case admissible exponents use the generalized HL bound.
    """
    p = as_extended(p)
    field = as_field(field)
    qs = _exponents(q)
    if m < 2 or len(qs) != m or not p.at_least(2 * m):
        return None
    crit = hl_critical_exponent(m, p)
    if all(abs(x - crit) <= tol for x in qs):
        if p.is_infinite:
            return bh_upper(m, field).value
        return hl_upper_best(m, p, field).value
    if p.exceeds(2 * m) and all(1.0 <= x <= 2.0 for x in qs) and hl_admissible(qs, p, tol):
        return gen_hl_upper(qs, p, field, tol).value
    return None


def hadamard_block_form(m: int) -> CoefficientTensor:
    """Real ``m``-linear form with exact ``l_inf`` norm ``2^(m-1)``.

    Built recursively from ``T_2 = [[1, 1], [1, -1]]`` by
    ``T_m(x^1..x^m) = (x^m_1 + x^m_2) T_{m-1}(first halves)
    + (x^m_1 - x^m_2) T_{m-1}(second halves)``; smaller native slots are
    zero-padded up to the common dimension ``2^(m-1)``.
    """
    # m = 6 would need a dense 32^6 array (8 GiB)
    if isinstance(m, bool) or int(m) != m or not 2 <= m <= HADAMARD_MAX_M:
        raise DomainError(f"hadamard_block_form needs 2 <= m <= {HADAMARD_MAX_M}, got {m!r}")
    block = np.array([[1.0, 1.0], [1.0, -1.0]])
    for k in range(3, m + 1):
        prev = block
        shape = tuple(2 * d for d in prev.shape) + (2,)
        nxt = np.zeros(shape)
        lo = tuple(slice(0, d) for d in prev.shape)
        hi = tuple(slice(d, 2 * d) for d in prev.shape)
        nxt[lo + (0,)] = prev
        nxt[lo + (1,)] = prev
        nxt[hi + (0,)] = prev
        nxt[hi + (1,)] = -prev
        block = nxt
    n = 2 ** (m - 1)
    out = np.zeros((n,) * m)
    out[tuple(slice(0, d) for d in block.shape)] = block
    return CoefficientTensor(out, Field.REAL)


def random_tensor(m: int, n: int, rng: np.random.Generator, field=Field.REAL) -> CoefficientTensor:
    """Independent uniform entries in [-1, 1] (real and imaginary parts for complex)."""
    field = as_field(field)
    shape = (n,) * m
    arr = rng.uniform(-1.0, 1.0, shape)
    if field is Field.COMPLEX:
        arr = arr + 1j * rng.uniform(-1.0, 1.0, shape)
    return CoefficientTensor(arr, field)


@dataclass
class SearchResult:
    tensor: CoefficientTensor
    ratio: float
    bound: Optional[float]
    seed: int
    iterations: int
    accepted: int
    restarts: int = 0
    history: list = dc_field(default_factory=list, repr=False)

    @property
    def gap(self) -> Optional[float]:
        return None if self.bound is None else self.bound - self.ratio

    def __iter__(self):
        # unpacks as (tensor, ratio)
        return iter((self.tensor, self.ratio))


def _propose(a: np.ndarray, rng: np.random.Generator, step: float) -> np.ndarray:
    b = a.copy()
    flat = b.reshape(-1)
    j = rng.integers(flat.size)
    move = rng.integers(4)
    scale = float(np.abs(flat).max()) or 1.0
    if move == 0:
        flat[j] += step * scale * rng.standard_normal()
    elif move == 1:
        flat[j] = scale * (1.0 if rng.random() < 0.5 else -1.0)
    elif move == 2:
        flat[j] = -flat[j]
    else:
        flat[j] = 0.0
    return b


def search_extremal(
    m: int,
    n: int,
    p,
    q,
    iters: int = 10_000,
    seed: int = 0,
    cap: int = DEFAULT_CAP,
    step: float = 0.3,
) -> SearchResult:
    """Randomized hill climbing over real coefficient tensors.

    Maximizes :func:`certified_ratio`; accepts a proposal when the ratio does
    not decrease.  The result is deterministic for a given seed.  If a ratio
    ever exceeds the applicable proved upper bound by more than 1e-9 a
    :class:`BoundViolationError` is raised.
    """
    p = as_extended(p)
    qs = _exponents(q)
    if len(qs) != m:
        raise TensorDataError(f"dimension mismatch: m = {m} but exponent has {len(qs)} entries")
    if p.is_infinite and n * (m - 1) > cap:
        raise CapExceededError(f"n(m-1) = {n * (m - 1)} exceeds the enumeration cap {cap}")
    bound = applicable_upper_bound(m, p, qs, Field.REAL)
    rng = np.random.default_rng(seed)

    signs = _sign_matrix(n) if p.is_infinite and m > 1 else None
    holder = [_dual_exponent(p)] * m

    def score(arr):
        # same quantity as certify_ratio, minus the per-call validation
        a = np.abs(arr)
        if not a.any():
            return -1.0
        num = a
        for r in reversed(qs):
            num = _lq_reduce(num, r)
        if signs is not None:
            den = _exact_linf(arr[None, ...], signs)
        elif p.is_infinite:
            den = float(a.sum())
        else:
            den = a
            for r in holder:
                den = _lq_reduce(den, r)
        return float(num) / float(den)

    patience = max(200, iters // 20)
    current = rng.choice([-1.0, 1.0], size=(n,) * m)
    cur_score = score(current)
    best, best_score = current.copy(), cur_score
    history = [cur_score]
    accepted = 0
    restarts = 0
    stale = 0
    for _ in range(iters):
        cand = _propose(current, rng, step)
        s = score(cand)
        stale += 1
        if s >= cur_score:
            if s > cur_score:
                accepted += 1
                stale = 0
            current, cur_score = cand, s
            if s > best_score:
                best, best_score = cand.copy(), s
        if stale >= patience:
            # plateaus like a lone nonzero entry trap pure ascent
            current = rng.choice([-1.0, 1.0], size=(n,) * m)
            cur_score = score(current)
            restarts += 1
            stale = 0
            if cur_score > best_score:
                best, best_score = current.copy(), cur_score
        history.append(best_score)
    if bound is not None and best_score > bound + 1e-9:
        raise BoundViolationError(
            f"certified ratio {best_score!r} exceeds the proved bound {bound!r}; the norm code is wrong"
        )
    return SearchResult(CoefficientTensor(best), best_score, bound, seed, iters, accepted, restarts, history)
