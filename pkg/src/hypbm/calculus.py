"""Exact combinatorics of the radial operator D = (1/sinh r) d/dr on sinh powers.

Repeated application of D to sinh^n r stays inside the family
c * cosh^a(r) * sinh^b(r) with integer coefficients, and the coefficients
admit closed forms:

  D^{2k}   sinh^n = sum_{l=0}^{k}   (2k)!   / (2^{k-l}(k-l)!(2l)!)
                     * prod_{m=0}^{k+l-1}(n-2m) * cosh^{2l}   sinh^{n-2k-2l}
  D^{2k+1} sinh^n = sum_{l=1}^{k+1} (2k+1)! / (2^{k+1-l}(k+1-l)!(2l-1)!)
                     * prod_{m=0}^{k+l-1}(n-2m) * cosh^{2l-1} sinh^{n-2k-2l}

For odd powers n = 2l+1 the l-fold application collapses to the single
closed form (2l+1)!!/(l+1) * sinh((l+1) r), which is what drives the
odd-dimension kernel reductions elsewhere in this package.

Coefficients are kept as exact Python ints (factorials up to 128! appear);
conversion to floating point happens only at evaluation, in log space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .logspace import LN2, LogValue, log_sum, logcosh, logsinh


def double_factorial(m: int) -> int:
    """m!! = m (m-2) (m-4) ... down to 2 or 1, with 0!! = (-1)!! = 1."""
    if m < -1:
        raise ValueError(f"double factorial undefined for m={m}")
    out = 1
    while m > 1:
        out *= m
        m -= 2
    return out


def surface_area(d: int) -> float:
    """Surface area of the unit sphere S^{d-1}: 2 pi^{d/2} / Gamma(d/2)."""
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)


def log_surface_area(d: int) -> float:
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    return LN2 + (d / 2.0) * math.log(math.pi) - math.lgamma(d / 2.0)


@dataclass(frozen=True)
class SinhPowerExpansion:
    """Exact expansion of D^k sinh^n r as sum of c * cosh^a r * sinh^b r.

    Terms are ordered by ascending cosh exponent with zero coefficients
    dropped, so equality of expansions is equality of term tuples.
    """

    base_power: int
    operator_applications: int
    terms: tuple[tuple[int, int, int], ...]  # (coefficient, cosh_exp, sinh_exp)

    @property
    def exceeds_base_power(self) -> bool:
        # beyond k <= n the nonnegative-sinh-exponent guarantee is waived
        return self.operator_applications > self.base_power

    def min_sinh_exponent(self) -> int:
        return min((b for _, _, b in self.terms), default=0)


def _falling_even_product(n: int, count: int) -> int:
    """prod_{m=0}^{count-1} (n - 2m); empty product is 1."""
    out = 1
    for m in range(count):
        out *= n - 2 * m
    return out


@lru_cache(maxsize=None)
def sinh_power_derivative(n: int, k: int) -> SinhPowerExpansion:
    """Exact expansion of D^k sinh^n r, D = (1/sinh r) d/dr."""
    if n < 1:
        raise ValueError(f"base power must be >= 1, got {n}")
    if k < 0:
        raise ValueError(f"operator applications must be >= 0, got {k}")
    if k == 0:
        return SinhPowerExpansion(n, 0, ((1, 0, n),))

    terms: list[tuple[int, int, int]] = []
    if k % 2 == 0:
        kk = k // 2
        for l in range(0, kk + 1):
            num = math.factorial(2 * kk) * _falling_even_product(n, kk + l)
            den = (1 << (kk - l)) * math.factorial(kk - l) * math.factorial(2 * l)
            c, rem = divmod(num, den)
            if rem:
                raise AssertionError("noninteger expansion coefficient")
            if c:
                terms.append((c, 2 * l, n - 2 * kk - 2 * l))
    else:
        kk = (k - 1) // 2
        for l in range(1, kk + 2):
            num = math.factorial(2 * kk + 1) * _falling_even_product(n, kk + l)
            den = (1 << (kk + 1 - l)) * math.factorial(kk + 1 - l) * math.factorial(2 * l - 1)
            c, rem = divmod(num, den)
            if rem:
                raise AssertionError("noninteger expansion coefficient")
            if c:
                terms.append((c, 2 * l - 1, n - 2 * kk - 2 * l))
    return SinhPowerExpansion(n, k, tuple(terms))


def evaluate_expansion_log(e: SinhPowerExpansion, r: float) -> LogValue:
    """Evaluate an expansion at r >= 0 in sign/log form.

    Each term contributes log|c| + a*log cosh r + b*log sinh r; the signed
    log-sum keeps cosh^a sinh^b products finite far beyond the double
    overflow threshold (r up to 1e4 and more).
    """
    if r < 0.0:
        raise ValueError(f"evaluation requires r >= 0, got {r}")
    if r == 0.0:
        if e.min_sinh_exponent() < 0:
            raise ValueError("expansion has negative sinh powers; r = 0 is outside its domain")
        # only sinh^0 terms survive at the origin
        const = sum(c for c, _, b in e.terms if b == 0)
        return LogValue.from_value(float(const))
    lc = logcosh(r)
    ls = logsinh(r)
    parts = []
    for c, a, b in e.terms:
        parts.append(LogValue(1 if c > 0 else -1, math.log(abs(c)) + a * lc + b * ls))
    return log_sum(parts)


def evaluate_expansion(e: SinhPowerExpansion, r: float) -> float:
    """Float value of the expansion at r; may overflow to inf for huge r."""
    return evaluate_expansion_log(e, r).value


def millson_identity_value(l: int, r: float) -> float:
    """Closed form (2l+1)!!/(l+1) * sinh((l+1) r) that D^l sinh^{2l+1} must equal."""
    if l < 1:
        raise ValueError(f"l must be >= 1, got {l}")
    return double_factorial(2 * l + 1) / (l + 1) * math.sinh((l + 1) * r)


def log_millson_identity_value(l: int, r: float) -> float:
    """log of the closed form above, overflow-safe for large (l+1) r."""
    if l < 1:
        raise ValueError(f"l must be >= 1, got {l}")
    return math.log(double_factorial(2 * l + 1) / (l + 1)) + logsinh((l + 1) * r)
