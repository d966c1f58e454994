"""The effective derivative financing rate for every collateralization scheme.

The discount rate switches on the sign of the value: the asset part of a
derivative is discounted at the counterparty's side, the liability part at
one's own side, each blended across the unsecured, liquidity, and cash
collateral rates according to the collateralized fraction and segregation
flag.  Party B's perspective: positive value = asset to B, C is on the
liability side.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .market import CollateralScheme, PartyRates


class ValueSide(Enum):
    ASSET_TO_B = "asset_to_b"
    LIABILITY_TO_B = "liability_to_b"


def effective_rate(value_sign: ValueSide, rates: PartyRates,
                   scheme: CollateralScheme) -> float:
    """Sign- and scheme-dependent effective discount rate.

    For an asset to B the rate blends C's rates:
        r_ec = r_c*(1-eta_c) + eta_c*((1-chi_c)*mu_c + chi_c*r_L)
    and symmetrically with B's rates on the liability side.  The
    unsecured fraction pays the unsecured rate, the segregated fraction
    the liquidity rate (protection without funding), and the commingled
    fraction the cash collateral rate.
    """
    if value_sign is ValueSide.ASSET_TO_B:
        eta, chi = scheme.eta_c, scheme.chi_c
        r_unsec, mu = rates.unsecured_c, rates.liquidity_c
    else:
        eta, chi = scheme.eta_b, scheme.chi_b
        r_unsec, mu = rates.unsecured_b, rates.liquidity_b
    return r_unsec * (1.0 - eta) + eta * ((1 - chi) * mu + chi * rates.collateral_rate)


def switching_rate_from_expectation(expected_continuation: float,
                                    rates: PartyRates,
                                    scheme: CollateralScheme) -> float:
    """Pick the discount side from the sign of the expected continuation.

    Valid because the discount factor is positive, so the sign of the
    node value equals the sign of p*H_u + (1-p)*H_d; no trial-and-error
    repricing is needed.  A zero expectation is treated as a liability
    (own-rate branch), where the value is zero either way.
    """
    if not math.isfinite(expected_continuation):
        raise ValueError("expected continuation must be finite")
    side = ValueSide.ASSET_TO_B if expected_continuation > 0 else ValueSide.LIABILITY_TO_B
    return effective_rate(side, rates, scheme)


def discount_factor(rate: float, dt: float) -> float:
    """Continuous-compounding discount factor exp(-rate*dt) over one step."""
    if dt < 0:
        raise ValueError("dt must be nonnegative")
    return math.exp(-rate * dt)


@dataclass(frozen=True)
class Switching:
    """Liability-side switching discounting under a collateral scheme."""

    rates: PartyRates
    scheme: CollateralScheme

    @property
    def asset_rate(self) -> float:
        return effective_rate(ValueSide.ASSET_TO_B, self.rates, self.scheme)

    @property
    def liability_rate(self) -> float:
        return effective_rate(ValueSide.LIABILITY_TO_B, self.rates, self.scheme)


@dataclass(frozen=True)
class RatePair:
    """Switching discounting with explicitly given side rates.

    Used by the rate-shift decomposition, where intermediate rollbacks
    hold one side at the benchmark while the other side is shifted.
    """

    asset_rate: float
    liability_rate: float


@dataclass(frozen=True)
class Constant:
    """Discount everything at one hypothetical derivatives repo rate."""

    rate: float

    def __post_init__(self):
        if not math.isfinite(self.rate):
            raise ValueError("constant discount rate must be finite")


@dataclass(frozen=True)
class Riskfree:
    """Discount everything at the riskfree benchmark (OIS) rate."""

    rate: float


DiscountMode = Switching | RatePair | Constant | Riskfree
