"""Named verification suites backing the `verify` CLI subcommand.

Each suite returns a list of CheckResult rows; a suite passes iff every row
does. These are the same invariants the test suite pins down, packaged for
scripted use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .calculus import (
    double_factorial,
    evaluate_expansion,
    log_surface_area,
    millson_identity_value,
    sinh_power_derivative,
)
from .kernels import (
    EvaluationPoint,
    davies_envelope,
    heat_kernel,
    millson_step_numeric,
    q_odd,
)
from .logspace import logsinh
from .quadrature import DEFAULT_SPEC, QuadratureSpec, integrate_adaptive
from .tails import direct_kernel_quadrature, tail


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def identities_suite(spec: QuadratureSpec = DEFAULT_SPEC) -> list[CheckResult]:
    """Operator-calculus identity checks on an r-grid over [0, 10]."""
    out = []
    grid = np.linspace(0.0, 10.0, 41)
    worst = 0.0
    for l in range(1, 9):
        e = sinh_power_derivative(2 * l + 1, l)
        for r in grid:
            want = millson_identity_value(l, float(r))
            got = evaluate_expansion(e, float(r))
            worst = max(worst, abs(got - want) / (1.0 + abs(want)))
    out.append(CheckResult("odd-power collapse l=1..8", worst <= 1e-10, f"max rel err {worst:.2e}"))
    worst = 0.0
    for k in range(1, 5):
        e1 = sinh_power_derivative(4 * k - 1, 2 * k - 1)
        e2 = sinh_power_derivative(4 * k + 1, 2 * k)
        for r in grid:
            w1 = double_factorial(4 * k - 1) / (2 * k) * math.sinh(2 * k * float(r))
            w2 = double_factorial(4 * k + 1) / (2 * k + 1) * math.sinh((2 * k + 1) * float(r))
            worst = max(
                worst,
                abs(evaluate_expansion(e1, float(r)) - w1) / (1.0 + abs(w1)),
                abs(evaluate_expansion(e2, float(r)) - w2) / (1.0 + abs(w2)),
            )
    out.append(CheckResult("split-parity collapses k=1..4", worst <= 1e-10, f"max rel err {worst:.2e}"))
    const_ok = all(
        sinh_power_derivative(n, n).terms == ((math.factorial(n), 0, 0),) for n in (2, 4, 6, 8)
    )
    out.append(CheckResult("terminal constancy even n", const_ok, "D^n sinh^n = n!"))
    vanish_ok = all(
        evaluate_expansion(sinh_power_derivative(n, k), 0.0) == 0.0
        for n in range(2, 9)
        for k in range(0, (n + 1) // 2)
        if 2 * k < n
    )
    out.append(CheckResult("vanishing at origin (2k < n)", vanish_ok, "exact zeros"))
    return out


def normalization_suite(
    ds: Sequence[int] = (2, 3, 4, 5, 6, 7),
    ts: Sequence[float] = (0.5, 1.0, 5.0, 20.0),
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> list[CheckResult]:
    """Total radial mass omega_d int q_d sinh^{d-1} = 1 for each (d, t)."""
    out = []
    for d in ds:
        tol = 1e-5 if (d % 2 == 0 and d >= 4) else 1e-6
        for t in ts:
            defect = abs(_normalization(d, float(t), spec) - 1.0)
            out.append(
                CheckResult(f"normalization d={d} t={t}", defect <= tol, f"|mass-1| = {defect:.2e} (tol {tol:g})")
            )
    return out


def _normalization(d: int, t: float, spec: QuadratureSpec) -> float:
    om = log_surface_area(d)

    def f(rs: np.ndarray) -> np.ndarray:
        out = np.empty(len(rs))
        for j, r in enumerate(np.asarray(rs, dtype=float)):
            if r <= 0.0:
                out[j] = 0.0
                continue
            q = heat_kernel(d, EvaluationPoint(t, float(r)), spec)
            out[j] = math.exp(om + q.log + (d - 1) * logsinh(float(r)))
        return out

    center = 0.5 * (d - 1) * t
    sqrt_t = math.sqrt(t)
    upper = max(0.0, center) + spec.tail_sigma_multiplier * sqrt_t
    seeds = [p for p in (center - spec.tail_sigma_multiplier * sqrt_t, center - sqrt_t, center, center + sqrt_t) if 0.0 < p < upper]
    return integrate_adaptive(f, 0.0, upper, spec, seed_points=seeds).value


def millson_suite(spec: QuadratureSpec = DEFAULT_SPEC) -> list[CheckResult]:
    """Symbolic odd kernels against one numerical recursion step."""
    out = []
    ts = (0.5, 1.0, 2.0, 5.0, 20.0)
    rs = (0.5, 1.0, 2.0, 4.0, 8.0)
    for d in (5, 7):
        worst = 0.0
        for t in ts:
            for r in rs:
                p = EvaluationPoint(t, r)
                sym = q_odd(d, p)
                num = millson_step_numeric(lambda rr, t=t: q_odd(d - 2, EvaluationPoint(t, rr)), d, p)
                worst = max(worst, abs(math.expm1(sym.log - num.log)))
        out.append(CheckResult(f"recursion consistency d={d}", worst <= 1e-6, f"max rel err {worst:.2e}"))
    return out


def davies_suite(
    ds: Sequence[int] = (2, 3, 4, 5, 6), spec: QuadratureSpec = DEFAULT_SPEC
) -> list[CheckResult]:
    """Kernel/envelope log-ratio bounded and stable under grid refinement."""
    out = []
    for d in ds:
        widths = []
        for nt, nr in ((8, 9), (15, 17)):
            lo, hi = math.inf, -math.inf
            for t in np.geomspace(0.1, 50.0, nt):
                for r in np.linspace(0.0, 40.0, nr):
                    p = EvaluationPoint(float(t), float(r))
                    lr = heat_kernel(d, p, spec).log - davies_envelope(d, p).log
                    lo, hi = min(lo, lr), max(hi, lr)
            widths.append(hi - lo)
        change = abs(widths[1] - widths[0]) / widths[0]
        ok = math.isfinite(widths[1]) and change < 0.05
        out.append(
            CheckResult(
                f"envelope ratio d={d}",
                ok,
                f"width {widths[0]:.3f} -> {widths[1]:.3f} ({100*change:.1f}% change)",
            )
        )
    return out


def cross_oracle_suite(
    ds: Sequence[int] = (2, 3, 4, 5),
    ts: Sequence[float] = (1.0, 5.0, 20.0),
    xs: Sequence[float] = (-3.0, -1.0, 0.0, 1.0, 3.0),
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> list[CheckResult]:
    """Reduction tails against brute-force density integration."""
    out = []
    for d in ds:
        tol = 1e-4 if (d % 2 == 0 and d >= 4) else 1e-5
        worst = 0.0
        for t in ts:
            for x in xs:
                a = tail(d, float(t), float(x), spec).value
                b = direct_kernel_quadrature(d, float(t), float(x), spec).value
                worst = max(worst, abs(a - b))
        out.append(CheckResult(f"cross-oracle d={d}", worst <= tol, f"max |diff| = {worst:.2e} (tol {tol:g})"))
    return out


SUITES: dict[str, Callable[..., list[CheckResult]]] = {
    "identities": identities_suite,
    "normalization": normalization_suite,
    "millson": millson_suite,
    "davies": davies_suite,
    "cross-oracle": cross_oracle_suite,
}
