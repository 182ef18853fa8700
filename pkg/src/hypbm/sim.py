"""Monte Carlo oracle: Euler-Maruyama for the radial diffusion.

The radial part of the driving process solves

  dR = dB + (d-1)/2 * coth(R) dt,

a Bessel-like repulsion from the origin with unit linear drift at infinity.
The scheme is fixed-step Euler-Maruyama with the singular part of the drift
taken implicitly: writing coth(R) = 1/R + (coth R - 1/R), the bounded
remainder and the noise go in explicitly,

  a_k = R_k + nu dt (coth R_k - 1/R_k) + sqrt(dt) xi_k,     nu = (d-1)/2,

and the 1/R part is resolved by the positive root of
R_{k+1} = a_k + nu dt / R_{k+1}:

  R_{k+1} = (a_k + sqrt(a_k^2 + 4 nu dt)) / 2.

Fully explicit Euler is useless here: one step from R ~ r0 = 1e-3 kicks the
path by nu dt coth(r0) ~ nu, and any path clipped at a small floor takes a
~nu dt/floor teleport; both effects bias the terminal law by tens of Monte
Carlo standard errors. The implicit root is always positive, is exact for
the dominant 1/R repulsion, and keeps the scheme weak order 1; the floor at
r_floor = 1e-6 remains as a safeguard only (it is essentially never hit).

Starting exactly at the origin is ill-posed for any discretization, so paths
start at r0 = 1e-3 by default; for t below ~0.1 the surrogate start is a
known limitation of the simulator, while at the horizons used for
cross-checks (t >= 1) the law is insensitive to r0 at the tested tolerances.

Reproducibility: path i's noise is a fixed function of (seed, i). Paths are
grouped into fixed blocks of 32768; block b draws from a counter-based
Philox stream keyed (seed, b) in a fixed slab layout, so results do not
depend on scheduling, thread count, or the total number of paths requested.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

try:
    from numba import njit, prange

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is optional
    _HAVE_NUMBA = False

_BLOCK = 32768
_SLAB = 128
R_FLOOR = 1e-6

# drift lookups: linear interpolation errors (~5e-7) are invisible under the
# nu*dt weighting. Below _IMPLICIT_CUT the singular 1/r part goes implicit
# and uses the bounded remainder coth(r) - 1/r; above it, plain coth. Grid
# nodes sit exactly at k / _TAB_STEP (dyadic), matching the k = int(u) lookup.
_TAB_STEP = 2048.0
_IMPLICIT_CUT = 0.5
_COTH_ONE = 8.0  # coth(8) - 1 = 2.3e-7, below the interpolation tier
_reg_grid = np.arange(int(_IMPLICIT_CUT * _TAB_STEP) + 2) / _TAB_STEP
with np.errstate(divide="ignore", invalid="ignore"):
    _REG_TABLE = np.where(_reg_grid > 1e-4, 1.0 / np.tanh(_reg_grid) - 1.0 / _reg_grid, _reg_grid / 3.0)
_coth_grid = _IMPLICIT_CUT + np.arange(int((_COTH_ONE - _IMPLICIT_CUT) * _TAB_STEP) + 2) / _TAB_STEP
_COTH_TABLE = 1.0 / np.tanh(_coth_grid)


@dataclass(frozen=True)
class SimulationConfig:
    d: int
    t: float
    paths: int
    seed: int
    step: float = 1e-3
    r0: float = 1e-3

    def __post_init__(self) -> None:
        if self.d < 2:
            raise ValueError(f"dimension must be >= 2, got {self.d}")
        if not (self.t > 0.0 and math.isfinite(self.t)):
            raise ValueError(f"horizon must be positive, got {self.t}")
        if not (0.0 < self.step <= self.t):
            raise ValueError(f"step must lie in (0, t], got {self.step}")
        if not (1 <= self.paths <= 10**8):
            raise ValueError(f"paths must lie in [1, 1e8], got {self.paths}")
        if not (0 <= self.seed < 2**64):
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if not (0.0 < self.r0 <= 1.0):
            raise ValueError(f"r0 must lie in (0, 1], got {self.r0}")


@dataclass(frozen=True)
class SimStats:
    steps: int
    reflections_after_unit_time: int
    path_steps_after_unit_time: int

    @property
    def reflection_fraction(self) -> float:
        if self.path_steps_after_unit_time == 0:
            return 0.0
        return self.reflections_after_unit_time / self.path_steps_after_unit_time


def _step_sizes(t: float, step: float) -> np.ndarray:
    n_full = int(math.floor(t / step + 1e-9))
    rem = t - n_full * step
    if rem > 1e-12 * max(t, 1.0):
        return np.concatenate([np.full(n_full, step), [rem]])
    return np.full(n_full, step)


def _advance_numpy(r: np.ndarray, dt: float, noise: np.ndarray, nu: float) -> np.ndarray:
    reg = np.where(r > 1e-4, 1.0 / np.tanh(r) - 1.0 / r, r / 3.0)
    a = r + nu * dt * reg + noise
    return np.maximum(0.5 * (a + np.sqrt(a * a + 4.0 * nu * dt)), R_FLOOR)


def _step_slab_numpy(r: np.ndarray, xi: np.ndarray, dts: np.ndarray, sqrt_dts: np.ndarray, nu: float) -> None:
    # xi is path-major (paths x steps)
    for j in range(xi.shape[1]):
        np.copyto(r, _advance_numpy(r, dts[j], sqrt_dts[j] * xi[:, j], nu))


def _pair_slab_numpy(rc: np.ndarray, rf: np.ndarray, xi: np.ndarray, dt: float, nu: float) -> None:
    half = 0.5 * dt
    sq_half = math.sqrt(half)
    for j in range(0, xi.shape[1], 2):
        e1 = xi[:, j]
        e2 = xi[:, j + 1]
        np.copyto(rf, _advance_numpy(rf, half, sq_half * e1, nu))
        np.copyto(rf, _advance_numpy(rf, half, sq_half * e2, nu))
        np.copyto(rc, _advance_numpy(rc, dt, sq_half * (e1 + e2), nu))


if _HAVE_NUMBA:

    @njit(cache=True, inline="always")
    def _advance(ri, dt, noise, nu, reg_tab, coth_tab):  # pragma: no cover - via driver
        # The implicit root only matters near the origin; past _IMPLICIT_CUT
        # the path cannot diffuse anywhere near zero in one step, so plain
        # Euler with tabulated coth is used there (coth = 1 past _COTH_ONE).
        if ri >= _COTH_ONE:
            return ri + nu * dt + noise
        if ri >= _IMPLICIT_CUT:
            u = (ri - _IMPLICIT_CUT) * _TAB_STEP
            k = int(u)
            coth = coth_tab[k] + (u - k) * (coth_tab[k + 1] - coth_tab[k])
            ri = ri + nu * dt * coth + noise
            return ri if ri > R_FLOOR else R_FLOOR
        u = ri * _TAB_STEP
        k = int(u)
        reg = reg_tab[k] + (u - k) * (reg_tab[k + 1] - reg_tab[k])
        a = ri + nu * dt * reg + noise
        rr = 0.5 * (a + math.sqrt(a * a + 4.0 * nu * dt))
        return rr if rr > R_FLOOR else R_FLOOR

    @njit(cache=True, parallel=True)
    def _step_slab_jit(r, xi, dts, sqrt_dts, nu, reg_tab, coth_tab):  # pragma: no cover - via driver
        # xi is path-major (paths x steps); each path advances independently,
        # so the parallel split over paths is schedule-independent
        for i in prange(r.shape[0]):
            ri = r[i]
            for j in range(xi.shape[1]):
                ri = _advance(ri, dts[j], sqrt_dts[j] * xi[i, j], nu, reg_tab, coth_tab)
            r[i] = ri

    @njit(cache=True, parallel=True)
    def _pair_slab_jit(rc, rf, xi, dt, nu, reg_tab, coth_tab):  # pragma: no cover - via driver
        # coupled coarse/fine chains on one Brownian path: fine takes two
        # dt/2 steps with draws (e1, e2), coarse one dt step with (e1+e2)
        half = 0.5 * dt
        sq_half = math.sqrt(half)
        for i in prange(rc.shape[0]):
            ri_c = rc[i]
            ri_f = rf[i]
            for j in range(0, xi.shape[1], 2):
                e1 = xi[i, j]
                e2 = xi[i, j + 1]
                ri_f = _advance(ri_f, half, sq_half * e1, nu, reg_tab, coth_tab)
                ri_f = _advance(ri_f, half, sq_half * e2, nu, reg_tab, coth_tab)
                ri_c = _advance(ri_c, dt, sq_half * (e1 + e2), nu, reg_tab, coth_tab)
            rc[i] = ri_c
            rf[i] = ri_f


def simulate_radial(cfg: SimulationConfig, collect_stats: bool = False):
    """Terminal radii R_t for cfg.paths independent paths (one float each).

    Deterministic for a fixed config; with collect_stats=True returns
    (samples, SimStats) including reflection counts past unit time.
    """
    dts = _step_sizes(cfg.t, cfg.step)
    sqrt_dts = np.sqrt(dts)
    nu = 0.5 * (cfg.d - 1)
    times = np.cumsum(dts)

    n_blocks = (cfg.paths + _BLOCK - 1) // _BLOCK
    out = np.empty(cfg.paths)
    reflections = 0
    late_steps = 0
    for b in range(n_blocks):
        rng = np.random.Generator(
            np.random.Philox(key=np.array([cfg.seed, b], dtype=np.uint64))
        )
        r = np.full(_BLOCK, cfg.r0)
        k = 0
        while k < len(dts):
            chunk = min(_SLAB, len(dts) - k)
            xi = rng.standard_normal((_BLOCK, chunk))  # path-major slab
            if collect_stats:
                for j in range(chunk):
                    dt = dts[k + j]
                    # coth R - 1/R is bounded on (0, inf): ~R/3 at 0, ->1 at inf
                    reg = np.where(r > 1e-4, 1.0 / np.tanh(r) - 1.0 / r, r / 3.0)
                    a = r + nu * dt * reg + sqrt_dts[k + j] * xi[:, j]
                    r = 0.5 * (a + np.sqrt(a * a + 4.0 * nu * dt))
                    if times[k + j] >= 1.0:
                        reflections += int(np.count_nonzero(r < R_FLOOR))
                        late_steps += _BLOCK
                    np.maximum(r, R_FLOOR, out=r)
            elif _HAVE_NUMBA:
                _step_slab_jit(r, xi, dts[k : k + chunk], sqrt_dts[k : k + chunk], nu, _REG_TABLE, _COTH_TABLE)
            else:
                _step_slab_numpy(r, xi, dts[k : k + chunk], sqrt_dts[k : k + chunk], nu)
            k += chunk
        lo = b * _BLOCK
        hi = min(lo + _BLOCK, cfg.paths)
        out[lo:hi] = r[: hi - lo]
    if collect_stats:
        return out, SimStats(len(dts), reflections, late_steps)
    return out


def simulate_radial_pair(cfg: SimulationConfig) -> tuple[np.ndarray, np.ndarray]:
    """Coupled terminal samples at cfg.step and cfg.step/2.

    Both chains ride the same Brownian path (the coarse increment over a step
    is the sum of the two fine ones), so their difference isolates the
    discretization bias instead of drowning it in Monte Carlo noise. Each
    returned sample set is marginally a valid simulation at its step size.
    Requires t to be an integral multiple of step.
    """
    n = round(cfg.t / cfg.step)
    if n < 1 or abs(n * cfg.step - cfg.t) > 1e-9 * max(cfg.t, 1.0):
        raise ValueError("paired run requires t to be an integral multiple of step")
    nu = 0.5 * (cfg.d - 1)
    n_blocks = (cfg.paths + _BLOCK - 1) // _BLOCK
    out_c = np.empty(cfg.paths)
    out_f = np.empty(cfg.paths)
    for b in range(n_blocks):
        rng = np.random.Generator(
            np.random.Philox(key=np.array([cfg.seed, b], dtype=np.uint64))
        )
        rc = np.full(_BLOCK, cfg.r0)
        rf = np.full(_BLOCK, cfg.r0)
        k = 0
        while k < n:
            chunk = min(_SLAB, n - k)
            xi = rng.standard_normal((_BLOCK, 2 * chunk))
            if _HAVE_NUMBA:
                _pair_slab_jit(rc, rf, xi, cfg.step, nu, _REG_TABLE, _COTH_TABLE)
            else:
                _pair_slab_numpy(rc, rf, xi, cfg.step, nu)
            k += chunk
        lo = b * _BLOCK
        hi = min(lo + _BLOCK, cfg.paths)
        out_c[lo:hi] = rc[: hi - lo]
        out_f[lo:hi] = rf[: hi - lo]
    return out_c, out_f


@dataclass(frozen=True)
class EmpiricalTail:
    x: float
    estimate: float
    standard_error: float
    paths: int


def empirical_tail(samples: np.ndarray, d: int, t: float, x: float) -> EmpiricalTail:
    """Fraction of normalized samples >= x, with binomial standard error."""
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0:
        raise ValueError("empirical_tail requires at least one sample")
    z = (samples - 0.5 * (d - 1) * t) / math.sqrt(t)
    p = float(np.mean(z >= x))
    se = math.sqrt(p * (1.0 - p) / samples.size)
    return EmpiricalTail(x, p, se, int(samples.size))


def ks_distance_to_normal(samples: np.ndarray, d: int, t: float) -> float:
    """Kolmogorov-Smirnov distance of normalized samples to the standard normal."""
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0:
        raise ValueError("ks distance requires at least one sample")
    z = np.sort((samples - 0.5 * (d - 1) * t) / math.sqrt(t))
    cdf = ndtr(z)
    n = z.size
    hi = np.max(np.arange(1, n + 1) / n - cdf)
    lo = np.max(cdf - np.arange(0, n) / n)
    return float(max(hi, lo))
