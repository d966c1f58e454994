"""Finite-difference cross-check for the switching-rate valuation.

Solves the backward PDE with repo-rate drift and a sign-dependent
discount term on a uniform log-price grid.  The nonlinearity (the rate
depends on the sign of the value) is handled explicitly by freezing the
rate from the previous time level, which is validated by a fixed-point
re-solve in the test suite.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.linalg import solve_banded

from .discounting import Switching
from .lattice import NumericalError
from .market import CollateralScheme, PartyRates
from .payoff import Portfolio, terminal_payoff


class FdScheme(str, Enum):
    EXPLICIT = "explicit"
    CRANK_NICOLSON = "crank_nicolson"


@dataclass(frozen=True)
class GridSpec:
    space_steps: int = 400
    time_steps: int = 400
    s_max_mult: float | None = None  # defaults to 5*exp(4*sigma*sqrt(T))
    scheme: FdScheme = FdScheme.CRANK_NICOLSON

    def __post_init__(self):
        if not isinstance(self.scheme, FdScheme):
            object.__setattr__(self, "scheme", FdScheme(self.scheme))
        if self.space_steps < 4 or self.time_steps < 4:
            raise ValueError("grid needs at least 4 steps in each direction")
        if self.s_max_mult is not None and self.s_max_mult <= 1.0:
            raise ValueError("s_max_mult must exceed 1")


@dataclass(frozen=True)
class PdeSolution:
    value: float
    stock_grid: np.ndarray
    levels: tuple[np.ndarray, ...] | None
    rate_levels: tuple[np.ndarray, ...] | None


def _operator_bands(x: np.ndarray, r_vec: np.ndarray, sigma: float,
                    drift: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Tridiagonal bands of the spatial operator in log price.

    Interior rows are central differences of
        b V_x + a V_xx - r V,   a = sigma^2/2,  b = drift - sigma^2/2.
    Boundary rows impose zero second derivative in the stock price,
    which in log coordinates means V_xx = V_x, collapsing the operator
    to drift * V_x - r V with a one-sided first derivative.
    """
    n = len(x) - 1
    dx = x[1] - x[0]
    a = 0.5 * sigma * sigma
    b = drift - a

    lower = np.zeros(n + 1)
    diag = np.zeros(n + 1)
    upper = np.zeros(n + 1)

    lower[1:n] = a / dx**2 - b / (2 * dx)
    diag[1:n] = -2 * a / dx**2 - r_vec[1:n]
    upper[1:n] = a / dx**2 + b / (2 * dx)

    diag[0] = -drift / dx - r_vec[0]
    upper[0] = drift / dx
    lower[n] = -drift / dx
    diag[n] = drift / dx - r_vec[n]
    return lower, diag, upper


def _apply(lower, diag, upper, v):
    out = diag * v
    out[:-1] += upper[:-1] * v[1:]
    out[1:] += lower[1:] * v[:-1]
    return out


def _solve_implicit(lower, diag, upper, rhs, theta_dt):
    """Solve (I - theta_dt * L) v = rhs with banded LU."""
    n = len(rhs)
    ab = np.zeros((3, n))
    ab[0, 1:] = -theta_dt * upper[:-1]
    ab[1, :] = 1.0 - theta_dt * diag
    ab[2, :-1] = -theta_dt * lower[1:]
    return solve_banded((1, 1), ab, rhs)


def _cell_averaged_payoff(portfolio: Portfolio, x: np.ndarray,
                          dx: float, points: int = 9) -> np.ndarray:
    """Average the terminal payoff over each grid cell.

    Smooths the strike kinks so Crank-Nicolson keeps its second-order
    behavior regardless of where the strikes fall between nodes.
    """
    offsets = ((np.arange(points) + 0.5) / points - 0.5) * dx
    sampled = np.exp(x[:, None] + offsets[None, :])
    return np.asarray(terminal_payoff(portfolio, sampled), dtype=float).mean(axis=1)


def solve_pde(s0: float, sigma: float, rates: PartyRates, scheme: CollateralScheme,
              portfolio: Portfolio, grid: GridSpec,
              frozen_rates: tuple[np.ndarray, ...] | None = None,
              store_levels: bool = False) -> PdeSolution:
    """Solve backward from the terminal payoff; value read at the spot.

    The per-node discount rate switches between the asset-side and
    liability-side effective rates on the sign of the previous time
    level's solution, unless `frozen_rates` supplies one rate vector per
    time step (later-time first) to pin the nonlinearity.

    Raises NumericalError if the explicit scheme violates its stability
    bound dt <= dx^2 / sigma^2.
    """
    if portfolio.has_american:
        raise ValueError("the PDE solver handles European legs only")
    if s0 <= 0 or sigma <= 0:
        raise ValueError("spot and sigma must be positive")

    mode = Switching(rates, scheme)
    r_asset, r_liab = mode.asset_rate, mode.liability_rate
    drift = rates.repo_rate - rates.dividend_yield

    t = portfolio.expiry
    mult = grid.s_max_mult
    if mult is None:
        mult = 5.0 * math.exp(4.0 * sigma * math.sqrt(t))
    x_max = math.log(s0 * mult)
    x_min = 2.0 * math.log(s0) - x_max
    n = grid.space_steps
    m = grid.time_steps
    x = np.linspace(x_min, x_max, n + 1)
    dx = x[1] - x[0]
    dt = t / m

    if grid.scheme is FdScheme.EXPLICIT and dt > dx * dx / (sigma * sigma):
        raise NumericalError(
            f"explicit scheme unstable: dt={dt:.3e} exceeds dx^2/sigma^2="
            f"{dx * dx / (sigma * sigma):.3e}; refine time or coarsen space")

    s_grid = np.exp(x)
    v = _cell_averaged_payoff(portfolio, x, dx)

    levels = [v.copy()] if store_levels else None
    rate_levels: list[np.ndarray] = []

    for step in range(m):
        if frozen_rates is not None:
            r_vec = np.asarray(frozen_rates[step], dtype=float)
        else:
            r_vec = np.where(v > 0, r_asset, r_liab)
        rate_levels.append(r_vec)
        lower, diag, upper = _operator_bands(x, r_vec, sigma, drift)

        if grid.scheme is FdScheme.EXPLICIT:
            v = v + dt * _apply(lower, diag, upper, v)
        elif step < 2:
            # Rannacher start-up: two implicit-Euler half steps damp the
            # payoff-kink oscillation before Crank-Nicolson takes over
            v = _solve_implicit(lower, diag, upper, v, 0.5 * dt)
            v = _solve_implicit(lower, diag, upper, v, 0.5 * dt)
        else:
            rhs = v + 0.5 * dt * _apply(lower, diag, upper, v)
            v = _solve_implicit(lower, diag, upper, rhs, 0.5 * dt)

        if store_levels:
            levels.append(v.copy())

    value = float(np.interp(math.log(s0), x, v))
    return PdeSolution(
        value=value,
        stock_grid=s_grid,
        levels=tuple(levels) if store_levels else None,
        rate_levels=tuple(rate_levels),
    )
