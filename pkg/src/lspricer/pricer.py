"""Backward-induction valuation on the lattice, closed forms, and Greeks."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.stats import norm

from .discounting import Constant, DiscountMode, RatePair, Riskfree, Switching
from .lattice import Lattice, LatticeSpec
from .payoff import Exercise, LegKind, Portfolio, terminal_payoff

_HORIZON_TOL = 1e-9


@dataclass(frozen=True)
class ValuedTree:
    """Rollback result: one value array per level plus per-node diagnostics.

    values[i] has i+1 entries ordered by up-count; rates[i] (for i < n)
    holds the effective discount rate applied at each step-i node, and
    exercised[i] flags early exercise there.
    """

    lattice: Lattice
    values: tuple[np.ndarray, ...]
    rates: tuple[np.ndarray, ...]
    exercised: tuple[np.ndarray, ...]

    @property
    def fair_value(self) -> float:
        return float(self.values[0][0])


@dataclass(frozen=True)
class Greeks:
    delta: float
    gamma: float
    vega: float


def _check_american(portfolio: Portfolio) -> bool:
    """American portfolios must be entirely B-held American call/put legs."""
    if not portfolio.has_american:
        return False
    for leg in portfolio.legs:
        if leg.exercise is not Exercise.AMERICAN:
            raise ValueError("mixed American/European portfolios are not supported")
        if leg.quantity <= 0:
            raise ValueError("American exercise is supported only when party B holds the right "
                             "(all quantities positive)")
    return True


def _rate_fn(mode: DiscountMode) -> Callable[[np.ndarray], np.ndarray]:
    if isinstance(mode, (Switching, RatePair)):
        ra = mode.asset_rate
        rb = mode.liability_rate
        return lambda e: np.where(e > 0, ra, rb)
    if isinstance(mode, (Constant, Riskfree)):
        r = mode.rate
        return lambda e: np.full_like(e, r)
    raise TypeError(f"unknown discount mode: {mode!r}")


def rollback(lattice: Lattice, portfolio: Portfolio, mode: DiscountMode) -> ValuedTree:
    """Value the portfolio by backward induction under a discount mode.

    The terminal layer equals the terminal payoff exactly.  At each
    interior node the expected continuation E = p*V_up + (1-p)*V_down is
    discounted over one step at the node's rate; in switching mode the
    rate side is chosen from the sign of E, which decouples the
    rate/value recursion.  American portfolios additionally floor the
    value at intrinsic.
    """
    if abs(lattice.horizon - portfolio.expiry) > _HORIZON_TOL * max(1.0, portfolio.expiry):
        raise ValueError(f"lattice horizon {lattice.horizon} does not match "
                         f"portfolio expiry {portfolio.expiry}")
    american = _check_american(portfolio)
    rate_of = _rate_fn(mode)

    n, dt, p = lattice.n_steps, lattice.dt, lattice.p_up
    values: list[np.ndarray] = [None] * (n + 1)
    rates: list[np.ndarray] = [None] * n
    exercised: list[np.ndarray] = [np.zeros(i + 1, dtype=bool) for i in range(n + 1)]

    values[n] = np.atleast_1d(np.asarray(
        terminal_payoff(portfolio, lattice.level_prices(n)), dtype=float))
    for i in range(n - 1, -1, -1):
        child = values[i + 1]
        expected = p * child[1:] + (1.0 - p) * child[:-1]
        rate = rate_of(expected)
        value = expected * np.exp(-rate * dt)
        if american:
            intrinsic = np.atleast_1d(np.asarray(
                terminal_payoff(portfolio, lattice.level_prices(i)), dtype=float))
            exercised[i] = intrinsic > value
            value = np.maximum(value, intrinsic)
        values[i] = value
        rates[i] = rate
    return ValuedTree(lattice=lattice, values=tuple(values),
                      rates=tuple(rates), exercised=tuple(exercised))


def price(lattice: Lattice, portfolio: Portfolio, mode: DiscountMode) -> float:
    """Root value of the rollback."""
    return rollback(lattice, portfolio, mode).fair_value


def closed_form_vanilla(s0: float, strike: float, sigma: float, t: float,
                        r_s: float, q: float, r_d: float, kind: LegKind) -> float:
    """Black-Scholes value with repo-rate drift and a detached discount rate.

    The forward uses the stock financing drift r_s - q while discounting
    happens at the derivatives financing rate r_d:
        call = exp(-r_d t) * (F N(d1) - K N(d2)),  F = s0 exp((r_s - q) t).
    """
    if min(s0, strike, sigma, t) <= 0:
        raise ValueError("s0, strike, sigma, and t must all be positive")
    kind = LegKind(kind)
    if kind not in (LegKind.CALL, LegKind.PUT):
        raise ValueError("closed form covers call and put only")
    fwd = s0 * math.exp((r_s - q) * t)
    vol = sigma * math.sqrt(t)
    d1 = (math.log(s0 / strike) + (r_s - q + 0.5 * sigma * sigma) * t) / vol
    d2 = d1 - vol
    df = math.exp(-r_d * t)
    if kind is LegKind.CALL:
        return df * (fwd * norm.cdf(d1) - strike * norm.cdf(d2))
    return df * (strike * norm.cdf(-d2) - fwd * norm.cdf(-d1))


def closed_form_delta(s0: float, strike: float, sigma: float, t: float,
                      r_s: float, q: float, r_d: float, kind: LegKind) -> float:
    """d(closed_form_vanilla)/d(s0)."""
    kind = LegKind(kind)
    vol = sigma * math.sqrt(t)
    d1 = (math.log(s0 / strike) + (r_s - q + 0.5 * sigma * sigma) * t) / vol
    growth = math.exp((r_s - q - r_d) * t)
    if kind is LegKind.CALL:
        return growth * norm.cdf(d1)
    return -growth * norm.cdf(-d1)


def greeks(spec: LatticeSpec, portfolio: Portfolio, mode: DiscountMode,
           ds: float | None = None, dsigma: float = 1e-4) -> Greeks:
    """Bump-and-reprice delta, gamma, and vega by central differences.

    Each spot bump rebuilds the lattice so the tree geometry follows the
    bumped spot.  Defaults balance truncation against round-off.
    """
    if ds is None:
        ds = 1e-4 * spec.spot
    if ds <= 0 or dsigma <= 0:
        raise ValueError("bump sizes must be positive")
    if spec.spot - ds <= 0:
        raise ValueError("spot bump too large: s0 - ds must stay positive")

    def reprice(s0: float, sigma: float) -> float:
        bumped = LatticeSpec(s0, sigma, spec.repo_rate, spec.dividend_yield,
                             spec.expiry, spec.n_steps)
        return price(bumped.build(), portfolio, mode)

    base = reprice(spec.spot, spec.sigma)
    up = reprice(spec.spot + ds, spec.sigma)
    down = reprice(spec.spot - ds, spec.sigma)
    vega_up = reprice(spec.spot, spec.sigma + dsigma)
    vega_down = reprice(spec.spot, spec.sigma - dsigma)

    return Greeks(
        delta=(up - down) / (2.0 * ds),
        gamma=(up - 2.0 * base + down) / (ds * ds),
        vega=(vega_up - vega_down) / (2.0 * dsigma),
    )
