"""Cox-Ross-Rubinstein binomial lattice with repo-rate stock drift."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class NumericalError(ValueError):
    """A numerical precondition failed (probability range, stability bound)."""


@dataclass(frozen=True)
class Lattice:
    """Recombining CRR tree: u = exp(sigma*sqrt(dt)), d = 1/u.

    Node (i, j) holds the stock price after j up moves in i steps,
    spot * u**(2j - i).  The risk-neutral up probability uses the
    stock financing (repo) drift r_s - q rather than a riskfree rate.
    """

    n_steps: int
    dt: float
    up: float
    down: float
    p_up: float
    spot: float

    def node_price(self, i: int, j: int) -> float:
        if not (0 <= j <= i <= self.n_steps):
            raise IndexError(f"node ({i}, {j}) outside lattice with {self.n_steps} steps")
        return self.spot * self.up ** (2 * j - i)

    def level_prices(self, i: int) -> np.ndarray:
        """Stock prices at step i, ordered by up-count j = 0..i."""
        if not 0 <= i <= self.n_steps:
            raise IndexError(f"step {i} outside lattice with {self.n_steps} steps")
        return self.spot * self.up ** (2 * np.arange(i + 1) - i)

    @property
    def horizon(self) -> float:
        return self.n_steps * self.dt


@dataclass(frozen=True)
class LatticeSpec:
    """Build inputs for a lattice; kept separate so Greeks can re-bump."""

    spot: float
    sigma: float
    repo_rate: float
    dividend_yield: float
    expiry: float
    n_steps: int

    def build(self) -> Lattice:
        return build_lattice(self.spot, self.sigma, self.repo_rate,
                             self.dividend_yield, self.expiry, self.n_steps)


def build_lattice(s0: float, sigma: float, r_s: float, q: float,
                  t: float, n: int) -> Lattice:
    """Build an n-step CRR lattice over [0, t].

    Parameters
    ----------
    s0 : initial stock price (> 0)
    sigma : volatility (> 0)
    r_s : stock repo (financing) rate
    q : dividend yield
    t : horizon in year fractions (> 0)
    n : number of steps (>= 1)

    Raises
    ------
    NumericalError
        If the up probability falls outside (0, 1); the caller must
        raise the step count.
    """
    if s0 <= 0:
        raise ValueError("spot must be positive")
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    if t <= 0:
        raise ValueError("horizon must be positive")
    if n < 1:
        raise ValueError("step count must be at least 1")

    dt = t / n
    u = math.exp(sigma * math.sqrt(dt))
    d = 1.0 / u
    p = (math.exp((r_s - q) * dt) - d) / (u - d)
    if not 0.0 < p < 1.0:
        raise NumericalError(
            f"step count too small for drift/volatility (p={p:.6f} outside (0, 1))")
    return Lattice(n_steps=n, dt=dt, up=u, down=d, p_up=p, spot=s0)
