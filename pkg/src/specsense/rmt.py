"""Random-matrix numerics: Tracy-Widom order-1 CDF, Gaussian Q function,
and the Wishart extreme-eigenvalue constants.

The order-1 Tracy-Widom distribution function is

    F1(t) = exp(-1/2 * integral_t^inf [q(u) + (u - t) q(u)^2] du),

where q solves the Painleve II equation q'' = u q + 2 q^3 with the
Hastings-McLeod boundary condition q(u) ~ Ai(u) as u -> +inf. The table
builder integrates the ODE backward from Airy initial data with an
adaptive Runge-Kutta scheme and evaluates the integral with the
trapezoid rule on the solution grid; the tail beyond the starting point
is added from fixed quadratures of Ai. A pre-generated table ships with
the package and a test regenerates it to guard against drift.

The order-1 law is stated for real-valued noise, but it is applied to
complex input as well; for complex data the mathematically correct limit
is the order-2 law, so thresholds there are a deliberate approximation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Dict, Union

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.special import airy, erfcinv

from .errors import NumericError, RegimeError

DEFAULT_TABLE_RESOURCE = "tracy_widom_f1.txt"
CDF_CLAMP = 1e-12
_Q_BLOWUP = 8.0


@dataclass(frozen=True)
class TracyWidomTable:
    """Tabulated F1 on a strictly increasing grid, with generation metadata."""

    grid: np.ndarray
    cdf: np.ndarray
    meta: Dict[str, float]

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=float)
        c = np.asarray(self.cdf, dtype=float)
        if g.ndim != 1 or g.size < 8 or g.shape != c.shape:
            raise ValueError("grid and cdf must be matching 1-D arrays")
        if np.any(np.diff(g) <= 0.0):
            raise ValueError("grid must be strictly increasing")
        if np.any(np.diff(c) <= 0.0):
            raise ValueError("cdf must be strictly increasing")
        if c[0] <= 0.0 or c[-1] >= 1.0:
            raise ValueError("cdf values must lie strictly inside (0, 1)")
        object.__setattr__(self, "grid", g)
        object.__setattr__(self, "cdf", c)


@dataclass(frozen=True)
class WishartGeometry:
    """Centering and scaling constants for the largest eigenvalue law."""

    num_samples: int
    dim: int
    mu: float
    nu: float
    y: float

    def __post_init__(self):
        if not (0.0 < self.y < 1.0):
            raise ValueError(f"aspect ratio y must be in (0, 1), got {self.y}")
        if self.mu <= 0.0 or self.nu <= 0.0:
            raise ValueError("mu and nu must be positive")


_STITCH_POINT = -6.0


def _painleve_rhs(u, state):
    q, dq = state
    return (dq, u * q + 2.0 * q**3)


def _hastings_mcleod_left(u: np.ndarray) -> np.ndarray:
    """Left-tail asymptotic of the Hastings-McLeod Painleve II solution."""
    inv3 = u**-3.0
    return np.sqrt(-u / 2.0) * (1.0 + inv3 / 8.0 - 73.0 / 128.0 * inv3**2)


def build_tw_table(
    t_min: float = -10.0,
    t_max: float = 6.0,
    step: float = 0.02,
    ode_tol: float = 1e-9,
) -> TracyWidomTable:
    """Generate the F1 table by solving Painleve II backward from t_max.

    Preconditions keep the table usable for threshold setting: the grid
    must reach well into both tails and be fine enough for linear
    interpolation.
    """
    if not t_min < -6.0:
        raise ValueError(f"t_min must be < -6, got {t_min}")
    if not t_max > 5.0:
        raise ValueError(f"t_max must be > 5, got {t_max}")
    if not 0.0 < step <= 0.05:
        raise ValueError(f"step must be in (0, 0.05], got {step}")

    count = int(round((t_max - t_min) / step)) + 1
    grid = np.linspace(t_min, t_max, count)

    # Backward integration of the Hastings-McLeod solution is unstable:
    # perturbations grow like exp(integral of sqrt(-2u)), so the ODE is
    # only trusted down to the stitch point and the two-term left
    # asymptotic q(u) = sqrt(-u/2)(1 + u^-3/8 - 73 u^-6/128) takes over
    # below it. A continuity check at the stitch guards both branches.
    stitch_idx = int(np.searchsorted(grid, _STITCH_POINT, side="left"))
    ode_grid = grid[stitch_idx:]

    ai0, aip0, _, _ = airy(t_max)

    def blowup(u, state):
        return abs(state[0]) - _Q_BLOWUP

    blowup.terminal = True

    sol = solve_ivp(
        _painleve_rhs,
        (t_max, float(ode_grid[0])),
        [float(ai0), float(aip0)],
        method="RK45",
        rtol=ode_tol,
        atol=ode_tol * 1e-6,
        t_eval=ode_grid[::-1],
        events=blowup,
    )
    if not sol.success or sol.t.size != ode_grid.size:
        raise NumericError(
            "Painleve II integration diverged before reaching "
            f"{ode_grid[0]:.3f} (stopped at u = {sol.t[-1] if sol.t.size else t_max:.3f})"
        )

    q = np.empty_like(grid)
    q[stitch_idx:] = sol.y[0][::-1]
    if stitch_idx > 0:
        q[:stitch_idx] = _hastings_mcleod_left(grid[:stitch_idx])
        q_ode_at_stitch = q[stitch_idx]
        q_asym_at_stitch = float(_hastings_mcleod_left(np.array([grid[stitch_idx]]))[0])
        if abs(q_ode_at_stitch - q_asym_at_stitch) > 1e-3 * abs(q_asym_at_stitch):
            raise NumericError(
                "Painleve II solution drifted from the left asymptotic at the stitch "
                f"point ({q_ode_at_stitch:.6e} vs {q_asym_at_stitch:.6e}); tighten ode_tol"
            )

    # Trapezoid segments on the uniform grid, accumulated from the right.
    def cum_from_right(f):
        seg = 0.5 * (f[:-1] + f[1:]) * step
        rev = np.cumsum(seg[::-1])[::-1]
        return np.concatenate([rev, [0.0]])

    int_q = cum_from_right(q)
    int_q2 = cum_from_right(q**2)
    int_uq2 = cum_from_right(grid * q**2)

    # Tail contributions above t_max, where q(u) = Ai(u) to solver accuracy.
    tail_q = quad(lambda u: airy(u)[0], t_max, t_max + 20.0)[0]
    tail_q2 = quad(lambda u: airy(u)[0] ** 2, t_max, t_max + 20.0)[0]
    tail_uq2 = quad(lambda u: u * airy(u)[0] ** 2, t_max, t_max + 20.0)[0]

    exponent = (int_q + tail_q) + (int_uq2 + tail_uq2) - grid * (int_q2 + tail_q2)
    cdf = np.exp(-0.5 * exponent)

    meta = {
        "t_min": float(t_min),
        "t_max": float(t_max),
        "step": float(step),
        "ode_tol": float(ode_tol),
        "u0": float(t_max),
    }
    return TracyWidomTable(grid=grid, cdf=cdf, meta=meta)


def save_table(table: TracyWidomTable, path: Union[str, Path]) -> None:
    """Write the two-column (t, F1) text format with a metadata header."""
    lines = ["# specsense tracy-widom order-1 cdf table"]
    meta = " ".join(f"{k}={table.meta[k]!r}" for k in sorted(table.meta))
    lines.append(f"# {meta}")
    lines.append("# columns: t F1")
    for t, f in zip(table.grid, table.cdf):
        lines.append(f"{t:.17g} {f:.17e}")
    Path(path).write_text("\n".join(lines) + "\n")


def load_table(path: Union[str, Path]) -> TracyWidomTable:
    """Read a table written by :func:`save_table`."""
    meta: Dict[str, float] = {}
    ts, fs = [], []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            for token in line[1:].split():
                if "=" in token:
                    key, _, val = token.partition("=")
                    try:
                        meta[key] = float(val)
                    except ValueError:
                        pass
            continue
        t_str, f_str = line.split()
        ts.append(float(t_str))
        fs.append(float(f_str))
    if not ts:
        raise ValueError(f"no table rows found in {path}")
    return TracyWidomTable(grid=np.array(ts), cdf=np.array(fs), meta=meta)


_DEFAULT_TABLE: TracyWidomTable | None = None


def default_table() -> TracyWidomTable:
    """The table shipped with the package (cached)."""
    global _DEFAULT_TABLE
    if _DEFAULT_TABLE is None:
        resource = resources.files("specsense").joinpath("data").joinpath(DEFAULT_TABLE_RESOURCE)
        with resources.as_file(resource) as p:
            _DEFAULT_TABLE = load_table(p)
    return _DEFAULT_TABLE


def tw_cdf(table: TracyWidomTable, t) -> Union[float, np.ndarray]:
    """F1(t) by linear interpolation; clamps outside the tabulated range."""
    vals = np.interp(t, table.grid, table.cdf, left=CDF_CLAMP, right=1.0 - CDF_CLAMP)
    if np.isscalar(t):
        return float(vals)
    return vals


def tw_quantile(table: TracyWidomTable, p: float) -> float:
    """Inverse CDF by bisection on the interpolated table, 1e-6 abscissa tolerance."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"probability must be in (0, 1), got {p}")
    lo, hi = float(table.grid[0]), float(table.grid[-1])
    if p <= table.cdf[0]:
        return lo
    if p >= table.cdf[-1]:
        return hi
    while hi - lo > 1e-6:
        mid = 0.5 * (lo + hi)
        if tw_cdf(table, mid) < p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def q_function(t: float) -> float:
    """Gaussian tail probability Q(t) = P(N(0,1) > t)."""
    return 0.5 * math.erfc(t / math.sqrt(2.0))


def q_inverse(p: float) -> float:
    """Inverse of the Gaussian tail probability."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"probability must be in (0, 1), got {p}")
    return float(math.sqrt(2.0) * erfcinv(2.0 * p))


def wishart_geometry(num_samples: int, channels: int, smoothing: int) -> WishartGeometry:
    """Largest-eigenvalue centering mu and scaling nu for an ML x ML
    sample covariance built from Ns stacked vectors (unit variance,
    unnormalized by Ns)."""
    dim = channels * smoothing
    if num_samples <= dim:
        raise RegimeError(f"need Ns > M*L, got Ns = {num_samples}, M*L = {dim}")
    root_n = math.sqrt(num_samples - 1)
    root_d = math.sqrt(dim)
    mu = (root_n + root_d) ** 2
    nu = (root_n + root_d) * (1.0 / root_n + 1.0 / root_d) ** (1.0 / 3.0)
    return WishartGeometry(
        num_samples=num_samples,
        dim=dim,
        mu=mu,
        nu=nu,
        y=dim / num_samples,
    )


def bai_yin_lambda_min(sigma2: float, y: float) -> float:
    """Almost-sure limit of the smallest sample-covariance eigenvalue."""
    if sigma2 <= 0.0:
        raise ValueError(f"sigma2 must be positive, got {sigma2}")
    if not 0.0 < y < 1.0:
        raise ValueError(f"aspect ratio y must be in (0, 1), got {y}")
    return sigma2 * (1.0 - math.sqrt(y)) ** 2
