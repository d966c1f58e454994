"""Counterparty risk adjustment and its coherent cva/cfa/dva/dfa split.

The total adjustment is the gap between the riskfree value (discounted at
the benchmark rate on the same tree) and the fair value (discounted at
the switching effective rate).  Two decompositions are provided: a
backward recursion that accumulates each component alongside the two
rollbacks, and a sequential rate-shift that prices five progressively
shifted rate environments.  Both conserve

    cva + cfa - dva - dfa = riskfree_value - fair_value

to floating-point round-off; the individual components may differ
slightly between methods.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import binom

from .discounting import RatePair, Riskfree, Switching
from .lattice import Lattice
from .market import CollateralScheme, CreditCurve, PartyRates, SurvivalConvention
from .payoff import Portfolio, terminal_payoff
from .pricer import price, rollback


@dataclass(frozen=True)
class XvaBreakdown:
    fair_value: float
    riskfree_value: float
    cra: float
    cva: float
    cfa: float
    dva: float
    dfa: float
    method: str

    @property
    def conservation_residual(self) -> float:
        """cva + cfa - dva - dfa - cra; zero up to round-off."""
        return self.cva + self.cfa - self.dva - self.dfa - self.cra


def cra(riskfree_value: float, fair_value: float) -> float:
    """Total counterparty risk adjustment: riskfree value minus fair value."""
    return riskfree_value - fair_value


def _side_spreads(rates: PartyRates, scheme: CollateralScheme):
    """Per-side (credit, funding) spread pairs over the benchmark rate.

    On each side the effective rate exceeds the benchmark by a credit
    spread (r - mu on the unsecured fraction) plus a funding spread (the
    liquidity basis on the unfunded fractions and the cash-rate gap on
    the funded fraction).  The two spreads sum exactly to r_e - r.
    """
    r = rates.ois_rate
    credit_c = (1.0 - scheme.eta_c) * (rates.unsecured_c - rates.liquidity_c)
    funding_c = ((1.0 - scheme.eta_c) * (rates.liquidity_c - r)
                 + scheme.eta_c * (1 - scheme.chi_c) * (rates.liquidity_c - r)
                 + scheme.eta_c * scheme.chi_c * (rates.collateral_rate - r))
    credit_b = (1.0 - scheme.eta_b) * (rates.unsecured_b - rates.liquidity_b)
    funding_b = ((1.0 - scheme.eta_b) * (rates.liquidity_b - r)
                 + scheme.eta_b * (1 - scheme.chi_b) * (rates.liquidity_b - r)
                 + scheme.eta_b * scheme.chi_b * (rates.collateral_rate - r))
    return (credit_c, funding_c), (credit_b, funding_b)


def _reject_american(portfolio: Portfolio) -> None:
    if portfolio.has_american:
        raise ValueError("XVA decomposition supports European portfolios only")


def xva_on_tree(lattice: Lattice, portfolio: Portfolio, rates: PartyRates,
                scheme: CollateralScheme) -> XvaBreakdown:
    """Backward-recursive decomposition on one pass over the tree.

    Runs the switching and riskfree rollbacks level by level and carries
    four component accumulators with them.  At each node the one-step
    adjustment (1 - exp((r - r_e) dt)) * V*_node is apportioned to the
    components in proportion to their spread share of r_e - r, then the
    accumulators are discounted through the same per-node effective rate
    as the fair value.  At expiry all components are zero.
    """
    _reject_american(portfolio)
    mode = Switching(rates, scheme)
    r_asset = mode.asset_rate
    r_liab = mode.liability_rate
    r = rates.ois_rate
    (credit_c, funding_c), (credit_b, funding_b) = _side_spreads(rates, scheme)

    n, dt, p = lattice.n_steps, lattice.dt, lattice.p_up
    terminal = np.atleast_1d(np.asarray(
        terminal_payoff(portfolio, lattice.level_prices(n)), dtype=float))
    v = terminal.copy()
    v_star = terminal.copy()
    comp = {name: np.zeros_like(terminal) for name in ("cva", "cfa", "dva", "dfa")}

    for i in range(n - 1, -1, -1):
        ev = p * v[1:] + (1.0 - p) * v[:-1]
        ev_star = p * v_star[1:] + (1.0 - p) * v_star[:-1]
        asset = ev > 0
        r_e = np.where(asset, r_asset, r_liab)
        df_e = np.exp(-r_e * dt)
        v = ev * df_e
        v_star = ev_star * math.exp(-r * dt)

        # exact one-step adjustment, split pro rata by spread so the
        # component sum telescopes to V* - V without discretization drift
        total_spread = r_e - r
        adjustment = v_star * -np.expm1((r - r_e) * dt)
        with np.errstate(divide="ignore", invalid="ignore"):
            unit = np.where(total_spread != 0.0, adjustment / total_spread, 0.0)

        contrib = {
            "cva": np.where(asset, credit_c * unit, 0.0),
            "cfa": np.where(asset, funding_c * unit, 0.0),
            "dva": np.where(asset, 0.0, -credit_b * unit),
            "dfa": np.where(asset, 0.0, -funding_b * unit),
        }
        for name in comp:
            rolled = p * comp[name][1:] + (1.0 - p) * comp[name][:-1]
            comp[name] = contrib[name] + df_e * rolled

    fair = float(v[0])
    riskfree = float(v_star[0])
    return XvaBreakdown(
        fair_value=fair, riskfree_value=riskfree, cra=riskfree - fair,
        cva=float(comp["cva"][0]), cfa=float(comp["cfa"][0]),
        dva=float(comp["dva"][0]), dfa=float(comp["dfa"][0]),
        method="recursive",
    )


def xva_by_rate_shift(lattice: Lattice, portfolio: Portfolio, rates: PartyRates,
                      scheme: CollateralScheme) -> XvaBreakdown:
    """Decomposition by five rollbacks with progressively shifted rates.

    Starting from both sides at the benchmark, C's side is shifted first
    to its liquidity blend (cfa), then to its full unsecured blend (cva);
    B's side follows likewise (dfa, then dva).  Differences of successive
    prices telescope, so conservation holds exactly by construction.
    """
    _reject_american(portfolio)
    r = rates.ois_rate
    mode = Switching(rates, scheme)
    r_ec = mode.asset_rate
    r_eb = mode.liability_rate
    # the liquidity-shifted blends replace the unsecured rate with the
    # liquidity rate, leaving the collateral legs untouched
    r_ec_mu = (rates.liquidity_c * (1.0 - scheme.eta_c)
               + scheme.eta_c * ((1 - scheme.chi_c) * rates.liquidity_c
                                 + scheme.chi_c * rates.collateral_rate))
    r_eb_mu = (rates.liquidity_b * (1.0 - scheme.eta_b)
               + scheme.eta_b * ((1 - scheme.chi_b) * rates.liquidity_b
                                 + scheme.chi_b * rates.collateral_rate))

    v_star = price(lattice, portfolio, RatePair(r, r))
    v1 = price(lattice, portfolio, RatePair(r_ec_mu, r))
    v2 = price(lattice, portfolio, RatePair(r_ec, r))
    v3 = price(lattice, portfolio, RatePair(r_ec, r_eb_mu))
    v = price(lattice, portfolio, RatePair(r_ec, r_eb))

    return XvaBreakdown(
        fair_value=v, riskfree_value=v_star, cra=v_star - v,
        cfa=v_star - v1, cva=v1 - v2, dfa=v3 - v2, dva=v - v3,
        method="rate_shift",
    )


def expected_exposure_profile(lattice: Lattice, portfolio: Portfolio,
                              ois_rate: float) -> np.ndarray:
    """Per-step expected riskfree values E[V*(t_i)], i = 0..n.

    Runs the riskfree rollback and weights each level by the binomial
    node probabilities.  Feeds the practitioner/industry comparators.
    """
    tree = rollback(lattice, portfolio, Riskfree(ois_rate))
    n, p = lattice.n_steps, lattice.p_up
    profile = np.empty(n + 1)
    for i in range(n + 1):
        weights = binom.pmf(np.arange(i + 1), i, p)
        profile[i] = float(np.dot(weights, tree.values[i]))
    return profile


def practitioner_fva(v_star_profile: np.ndarray, funding_spread: float, dt: float,
                     convention: str, ois_rate: float,
                     curve_b: CreditCurve | None = None,
                     curve_c: CreditCurve | None = None) -> float:
    """Textbook-style FVA: spread times expected riskfree exposure.

    Sums (r_b - r) * V*(t_i) * dt * D(t_i) over step starts, where the
    debatable discount factor D is the riskfree factor alone
    ("riskfree_discount"), times B's survival ("own_survival"), or times
    the joint survival of B and C ("joint_survival").
    """
    profile = np.asarray(v_star_profile, dtype=float)
    n = len(profile) - 1
    t = dt * np.arange(n)
    d = np.exp(-ois_rate * t)
    if convention == "riskfree_discount":
        pass
    elif convention == "own_survival":
        if curve_b is None:
            raise ValueError("own_survival requires party B's credit curve")
        d = d * np.exp(-curve_b.hazard_rate * t)
    elif convention == "joint_survival":
        if curve_b is None or curve_c is None:
            raise ValueError("joint_survival requires both parties' credit curves")
        d = d * np.exp(-(curve_b.hazard_rate + curve_c.hazard_rate) * t)
    else:
        raise ValueError(f"unknown discount convention: {convention!r}")
    return float(np.sum(funding_spread * profile[:n] * dt * d))


def _survival_factor(curve: CreditCurve, t: np.ndarray,
                     curve_b: CreditCurve | None) -> np.ndarray:
    if curve.survival_convention is SurvivalConvention.OWN:
        return np.exp(-curve.hazard_rate * t)
    if curve_b is None:
        raise ValueError("joint_survival requires party B's credit curve")
    return np.exp(-(curve.hazard_rate + curve_b.hazard_rate) * t)


def industry_cva(v_star_profile: np.ndarray, dt: float, curve: CreditCurve,
                 ois_rate: float, curve_b: CreditCurve | None = None) -> float:
    """Reduced-form unilateral CVA: loss-given-default times default density.

    Sums (1 - R) * V*(t_i) * exp(-r t_i) * Q(t_i) * lambda * dt; the
    riskfree-discount-times-survival kernel is what keeps this comparator
    from repricing a simple bond, unlike the coherent decomposition.
    """
    profile = np.asarray(v_star_profile, dtype=float)
    n = len(profile) - 1
    t = dt * np.arange(n)
    q = _survival_factor(curve, t, curve_b)
    kernel = np.exp(-ois_rate * t) * q * curve.hazard_rate
    return float(np.sum((1.0 - curve.recovery) * profile[:n] * kernel * dt))


def industry_fva(v_star_profile: np.ndarray, dt: float, basis: float,
                 curve: CreditCurve, ois_rate: float,
                 curve_b: CreditCurve | None = None) -> float:
    """Reduced-form FVA on the liquidity basis with the same kernel as CVA."""
    profile = np.asarray(v_star_profile, dtype=float)
    n = len(profile) - 1
    t = dt * np.arange(n)
    q = _survival_factor(curve, t, curve_b)
    kernel = np.exp(-ois_rate * t) * q * curve.hazard_rate
    return float(np.sum(basis * profile[:n] * kernel * dt))
