"""Radial heat kernels q_d(t, r) on d-dimensional hyperbolic space.

Closed forms exist for the two base dimensions,

  q_3(t,r) = e^{-t/2} (2 pi t)^{-3/2} (r / sinh r) e^{-r^2/(2t)}
  q_2(t,r) = 2^{1/2} e^{-t/8} (2 pi t)^{-3/2}
             int_r^inf s e^{-s^2/(2t)} (cosh s - cosh r)^{-1/2} ds,

and every other dimension follows from the Millson recursion

  q_d(t,r) = - e^{-(d-2)t/2} / (2 pi sinh r) * d q_{d-2}/dr (t,r).

Odd dimensions iterate the recursion symbolically: the term family
c * t^{-i} r^p cosh^a(r) sinh^{-b}(r) e^{-r^2/(2t)} is closed under it with
exact integer coefficients, so q_5, q_7, ... evaluate like closed forms.
Even dimensions >= 4 differentiate numerically (5-point stencil on
log q_{d-2}, i.e. one Richardson step), nesting down to the q_2 quadrature
with tolerances tightened two decades per nesting level.

All kernels return LogValue: prefactors like e^{-m^2 t/2} underflow doubles
by hundreds of orders across the supported (t, r) ranges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable

import mpmath as mp
import numpy as np

from .logspace import LN2, LN2PI, LogValue, log_sinhc, log_sum, logcosh, logsinh, vlogsinh
from .quadrature import DEFAULT_SPEC, QuadratureSpec, integrate_adaptive

_EPS = float(np.finfo(float).eps)


class KernelError(RuntimeError):
    """Kernel evaluation failed (step underflow, cancellation, ...)."""


@dataclass(frozen=True)
class Dimension:
    """Dimension d >= 2 with its parity decomposition d = 2n or d = 2n+1."""

    d: int

    def __post_init__(self) -> None:
        if not isinstance(self.d, int) or self.d < 2:
            raise ValueError(f"dimension must be an integer >= 2, got {self.d!r}")

    @property
    def n(self) -> int:
        return self.d // 2

    @property
    def is_odd(self) -> bool:
        return self.d % 2 == 1


@dataclass(frozen=True)
class EvaluationPoint:
    """Process time t > 0 and hyperbolic distance r >= 0 from the pole."""

    t: float
    r: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.t) and self.t > 0.0):
            raise ValueError(f"t must be finite and positive, got {self.t}")
        if not (math.isfinite(self.r) and self.r >= 0.0):
            raise ValueError(f"r must be finite and nonnegative, got {self.r}")


# --------------------------------------------------------------------------
# odd dimensions: symbolic recursion
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class OddKernelExpression:
    """q_d for odd d as exact terms under a shared log prefactor.

    value = exp(log_prefactor(t)) * e^{-r^2/(2t)}
            * sum c * t^{-i} * r^p * cosh^a(r) * sinh^{-b}(r)

    with log_prefactor(t) = -m^2 t/2 - (3/2) log(2 pi t) - (m-1) log(2 pi)
    for d = 2m+1. Terms: (c, i, p, a, b), b >= 1, coefficients exact ints.
    """

    d: int
    terms: tuple[tuple[int, int, int, int, int], ...]

    @property
    def m(self) -> int:
        return (self.d - 1) // 2

    def log_prefactor(self, t: float) -> float:
        m = self.m
        return -0.5 * m * m * t - 1.5 * math.log(2.0 * math.pi * t) - (m - 1) * LN2PI


def millson_step_symbolic(expr: OddKernelExpression) -> OddKernelExpression:
    """Apply the dimension-raising recursion d -> d+2 to the term family.

    d/dr of t^{-i} r^p cosh^a sinh^{-b} e^{-r^2/(2t)} produces four term
    shapes; the -1/(2 pi sinh r) factor then bumps every sinh inverse power
    and flips signs, while e^{-(d)t/2} folds into the prefactor.
    """
    acc: dict[tuple[int, int, int], int] = {}

    def add(c: int, i: int, p: int, a: int, b: int) -> None:
        if c:
            key = (i, p, a, b)
            acc[key] = acc.get(key, 0) + c

    for c, i, p, a, b in expr.terms:
        add(-c * p, i, p - 1, a, b + 1)
        add(-c * a, i, p, a - 1, b)
        add(c * b, i, p, a + 1, b + 2)
        add(c, i + 1, p + 1, a, b + 1)
    terms = tuple(
        (c, i, p, a, b)
        for (i, p, a, b), c in sorted(acc.items())
        if c
    )
    return OddKernelExpression(expr.d + 2, terms)


@lru_cache(maxsize=None)
def build_odd_kernel(d: int) -> OddKernelExpression:
    """Exact symbolic kernel for odd d >= 3 (single term r/sinh r at d=3)."""
    if d < 3 or d % 2 == 0:
        raise ValueError(f"odd dimension >= 3 required, got {d}")
    expr = OddKernelExpression(3, ((1, 0, 1, 0, 1),))
    while expr.d < d:
        expr = millson_step_symbolic(expr)
    return expr


def q3(p: EvaluationPoint) -> LogValue:
    """Closed-form d=3 kernel; r/sinh r extended continuously to 1 at r=0."""
    lg = -0.5 * p.t - 1.5 * math.log(2.0 * math.pi * p.t) - log_sinhc(p.r) - p.r * p.r / (2.0 * p.t)
    return LogValue(1, lg)


def _bracket_digits_lost(d: int, r: float) -> float:
    # term magnitudes near the origin scale like r^{-(d-3)} against an O(1) sum
    if r >= 1.0:
        return 0.0
    return (d - 3) * (-math.log10(r))


def _eval_odd_bracket_float(expr: OddKernelExpression, t: float, r: float) -> LogValue:
    lc = logcosh(r)
    ls = logsinh(r)
    lt = math.log(t)
    lr = math.log(r)
    parts = []
    for c, i, p, a, b in expr.terms:
        lg = math.log(abs(c)) - i * lt + p * lr + a * lc - b * ls
        parts.append(LogValue(1 if c > 0 else -1, lg))
    return log_sum(parts)


def _eval_odd_bracket_mp(expr: OddKernelExpression, t: float, r: float, digits: float) -> LogValue:
    with mp.workdps(int(25 + digits)):
        rt, tt = mp.mpf(r), mp.mpf(t)
        ch, sh = mp.cosh(rt), mp.sinh(rt)
        total = mp.mpf(0)
        for c, i, p, a, b in expr.terms:
            total += c * rt**p * ch**a / (tt**i * sh**b)
        if total == 0:
            return LogValue.zero()
        return LogValue(1 if total > 0 else -1, float(mp.log(abs(total))))


def q_odd(d: int, p: EvaluationPoint) -> LogValue:
    """Kernel for odd d >= 3 via the exact symbolic expression."""
    if d == 3:
        return q3(p)
    expr = build_odd_kernel(d)
    r = max(p.r, 1e-6)  # kernel is even in r; O(r^2) flat extension at the origin
    lost = _bracket_digits_lost(d, r)
    if lost > 5.0:
        bracket = _eval_odd_bracket_mp(expr, p.t, r, lost)
    else:
        bracket = _eval_odd_bracket_float(expr, p.t, r)
        if bracket.sign <= 0:
            bracket = _eval_odd_bracket_mp(expr, p.t, r, 30.0)
    if bracket.sign <= 0:
        raise KernelError(f"kernel bracket not positive at d={d}, t={p.t}, r={p.r}")
    return LogValue(1, expr.log_prefactor(p.t) - r * r / (2.0 * p.t) + bracket.log)


# --------------------------------------------------------------------------
# even dimensions: q2 quadrature plus nested numerical recursion
# --------------------------------------------------------------------------

def q2(p: EvaluationPoint, spec: QuadratureSpec = DEFAULT_SPEC) -> LogValue:
    """d=2 kernel by singularity-regularized, magnitude-shifted quadrature.

    With s = r + w^2 the integrand becomes smooth; factoring out
    e^{-r^2/(2t) - r/2} keeps the working integrand O(1) for any (t, r) in
    range, so the result is assembled entirely in log space.
    """
    t, r = p.t, p.r
    sqrt_t = math.sqrt(t)
    mult = spec.tail_sigma_multiplier
    s_max = math.hypot(r, mult * sqrt_t) + sqrt_t
    w_hi = math.sqrt(s_max - r)

    def fw(w: np.ndarray) -> np.ndarray:
        w = np.asarray(w, dtype=float)
        ww = w * w
        with np.errstate(divide="ignore"):
            log_j = (
                np.log(2.0 * w)
                + np.log(r + ww)
                - (2.0 * r * ww + ww * ww) / (2.0 * t)
                + 0.5 * r
                - 0.5 * (LN2 + vlogsinh(r + 0.5 * ww) + vlogsinh(0.5 * ww))
            )
        return np.exp(log_j)

    res = integrate_adaptive(fw, 0.0, w_hi, spec)
    if res.value <= 0.0:
        raise KernelError(f"q2 integral not positive at t={t}, r={r}")
    lg = (
        0.5 * LN2
        - t / 8.0
        - 1.5 * math.log(2.0 * math.pi * t)
        - r * r / (2.0 * t)
        - 0.5 * r
        + math.log(res.value)
    )
    return LogValue(1, lg)


def millson_step_numeric(
    q_lower: Callable[[float], LogValue],
    d: int,
    p: EvaluationPoint,
    h: float | None = None,
) -> LogValue:
    """One numerical recursion step: q_d from q_{d-2} by differentiating log q.

    Uses the 4th-order 5-point stencil (central differences with one
    Richardson extrapolation step) on g = log q_{d-2}, then
    q_d = e^{-(d-2)t/2} / (2 pi sinh r) * q_{d-2}(r) * (-g'(r)).
    """
    t, r = p.t, p.r
    if r <= 0.0:
        raise KernelError(f"recursion step requires r > 0, got r={r}")
    if h is None:
        h = _EPS ** (1.0 / 3.0) * (1.0 + r)
    h = min(h, 0.25 * r)
    if h < 1e-12:
        raise KernelError(f"step underflow at r={r} (h={h})")
    g = [q_lower(r + k * h).log for k in (-2, -1, 0, 1, 2)]
    gprime = (g[0] - 8.0 * g[1] + 8.0 * g[3] - g[4]) / (12.0 * h)
    if not (gprime < 0.0):
        raise KernelError(f"kernel not decreasing at d={d}, t={t}, r={r} (g'={gprime})")
    lg = -(d - 2) * t / 2.0 - LN2PI - logsinh(r) + g[2] + math.log(-gprime)
    return LogValue(1, lg)


def _tightened(spec: QuadratureSpec, levels: int) -> QuadratureSpec:
    f = 100.0 ** levels
    return replace(
        spec,
        abs_tol=max(spec.abs_tol / f, 1e-14),
        rel_tol=max(spec.rel_tol / f, 1e-13),
    )


def _even_kernel_fn(d: int, t: float, spec: QuadratureSpec) -> tuple[Callable[[float], LogValue], float]:
    """(callable r -> LogValue, noise level) for even d, recursive in d."""
    if d == 2:
        base_spec = spec
        return (lambda r: q2(EvaluationPoint(t, r), base_spec)), base_spec.rel_tol
    lower, noise = _even_kernel_fn(d - 2, t, spec)
    level = (d - 2) // 2
    exponent = 1.0 / 3.0 if level == 1 else 1.0 / 5.0

    def fn(r: float) -> LogValue:
        h = min(noise ** exponent * (1.0 + r), 0.25 * r)
        return millson_step_numeric(lower, d, EvaluationPoint(t, r), h=h)

    h_typ = noise ** exponent
    out_noise = 1.5 * noise / h_typ + h_typ ** 4
    return fn, out_noise


def even_kernel_noise(d: int, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Relative accuracy estimate of q_even at even dimension d."""
    if d < 2 or d % 2 == 1:
        raise ValueError(f"even dimension >= 2 required, got {d}")
    levels = (d - 2) // 2
    _, noise = _even_kernel_fn(d, 1.0, _tightened(spec, levels))
    return noise


def q_even(d: int, p: EvaluationPoint, spec: QuadratureSpec = DEFAULT_SPEC) -> LogValue:
    """Kernel for even d >= 2; d >= 4 nests numerical recursion onto q2.

    Below r_min(d) = 2^{levels-1} * 1e-3 the kernel is evaluated by
    quadratic extrapolation in r^2 from [r_min, 3 r_min] (it is even in r);
    the 1/sinh r factor otherwise amplifies differencing noise without bound.
    """
    if d < 2 or d % 2 == 1:
        raise ValueError(f"even dimension >= 2 required, got {d}")
    if d == 2:
        return q2(p, spec)
    levels = (d - 2) // 2
    fn, _ = _even_kernel_fn(d, p.t, _tightened(spec, levels))
    r_min = (1 << (levels - 1)) * 1e-3
    if p.r >= r_min:
        return fn(p.r)
    nodes = [r_min, 2.0 * r_min, 3.0 * r_min]
    logs = [fn(rr).log for rr in nodes]
    us = [rr * rr for rr in nodes]
    u = p.r * p.r
    # quadratic Lagrange interpolation of log q in u = r^2 (kernel is even in
    # r and strictly positive, so log q is as smooth as q here)
    out = 0.0
    for j in range(3):
        w = logs[j]
        for kk in range(3):
            if kk != j:
                w *= (u - us[kk]) / (us[j] - us[kk])
        out += w
    return LogValue(1, out)


def heat_kernel(d: Dimension | int, p: EvaluationPoint, spec: QuadratureSpec = DEFAULT_SPEC) -> LogValue:
    """q_d(t, r) for any d >= 2, dispatching on parity."""
    dd = d.d if isinstance(d, Dimension) else int(d)
    if dd % 2 == 1:
        return q_odd(dd, p)
    return q_even(dd, p, spec)


def davies_envelope(d: Dimension | int, p: EvaluationPoint) -> LogValue:
    """Two-sided comparison envelope for q_d:

    t^{-d/2} exp(-(d-1)^2 t/8 - (d-1) r/2 - r^2/(2t)) (1+r+t)^{(d-3)/2} (1+r)
    """
    dd = d.d if isinstance(d, Dimension) else int(d)
    if dd < 2:
        raise ValueError(f"dimension must be >= 2, got {dd}")
    t, r = p.t, p.r
    lg = (
        -0.5 * dd * math.log(t)
        - (dd - 1) ** 2 * t / 8.0
        - (dd - 1) * r / 2.0
        - r * r / (2.0 * t)
        + 0.5 * (dd - 3) * math.log1p(r + t)
        + math.log1p(r)
    )
    return LogValue(1, lg)
