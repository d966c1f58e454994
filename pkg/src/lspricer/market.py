"""Rate environment, party credit inputs, and collateral scheme.

All rates are annualized, continuously compounded decimals (0.085 = 8.5%)
and flat over the trade horizon.  Sign conventions are party B's
perspective throughout: positive value means the trade is an asset to B.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum


class SurvivalConvention(str, Enum):
    OWN = "own_survival"
    JOINT = "joint_survival"


def _require_finite(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class PartyRates:
    """The full rate environment for a bilateral trade between B and C.

    ois_rate is the riskfree benchmark used for the riskfree companion
    value, collateral_rate is earned on commingled cash collateral,
    repo_rate drives the stock drift, and each party carries a senior
    unsecured rate and a liquidity rate (unsecured minus CDS premium).
    """

    ois_rate: float
    collateral_rate: float
    repo_rate: float
    dividend_yield: float
    unsecured_b: float
    unsecured_c: float
    liquidity_b: float
    liquidity_c: float

    def __post_init__(self):
        for name in ("ois_rate", "collateral_rate", "repo_rate", "dividend_yield",
                     "unsecured_b", "unsecured_c", "liquidity_b", "liquidity_c"):
            _require_finite(name, getattr(self, name))


@dataclass(frozen=True)
class CreditCurve:
    """Flat hazard-rate credit inputs used by the industry comparators."""

    hazard_rate: float
    recovery: float
    survival_convention: SurvivalConvention = SurvivalConvention.OWN

    def __post_init__(self):
        _require_finite("hazard_rate", self.hazard_rate)
        _require_finite("recovery", self.recovery)
        if self.hazard_rate < 0:
            raise ValueError("hazard_rate must be nonnegative")
        if not 0.0 <= self.recovery <= 1.0:
            raise ValueError("recovery must lie in [0, 1]")
        if not isinstance(self.survival_convention, SurvivalConvention):
            object.__setattr__(self, "survival_convention",
                               SurvivalConvention(self.survival_convention))

    def survival(self, t: float) -> float:
        return math.exp(-self.hazard_rate * t)


@dataclass(frozen=True)
class CollateralScheme:
    """Per-party collateralized fraction (eta) and segregation flag (chi).

    chi = 0 means segregated collateral (credit protection only),
    chi = 1 means commingled (protection plus funding at the cash rate).
    """

    eta_b: float = 0.0
    eta_c: float = 0.0
    chi_b: int = 1
    chi_c: int = 1

    def __post_init__(self):
        for name in ("eta_b", "eta_c"):
            value = getattr(self, name)
            _require_finite(name, value)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")
        for name in ("chi_b", "chi_c"):
            if getattr(self, name) not in (0, 1):
                raise ValueError(f"{name} must be 0 (segregated) or 1 (commingled)")

    @classmethod
    def uncollateralized(cls) -> "CollateralScheme":
        return cls(eta_b=0.0, eta_c=0.0, chi_b=1, chi_c=1)


def blended_funding_rate(h: float, r_b: float, r_p: float) -> float:
    """Overall stock funding cost when a haircut h is funded unsecured.

    Returns h*r_b + (1-h)*r_p, the repo rate blended with the unsecured
    rate applied to the haircut portion.
    """
    _require_finite("r_b", r_b)
    _require_finite("r_p", r_p)
    if not 0.0 <= h <= 1.0:
        raise ValueError(f"haircut must lie in [0, 1], got {h}")
    return h * r_b + (1.0 - h) * r_p


def liquidity_rate_from_basis(r_unsecured: float, cds_premium: float) -> float:
    """Liquidity rate mu implied by a bond/CDS basis trade: r - x.

    The CDS premium strips the default-risk component from the unsecured
    bond rate; what remains prices liquidity and structural factors.
    """
    _require_finite("r_unsecured", r_unsecured)
    _require_finite("cds_premium", cds_premium)
    if cds_premium < 0:
        raise ValueError("cds_premium must be nonnegative")
    return r_unsecured - cds_premium


@dataclass(frozen=True)
class ValidationReport:
    errors: tuple[str, ...]
    warnings: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.errors


def validate(rates: PartyRates, curve: CreditCurve | None = None,
             scheme: CollateralScheme | None = None) -> ValidationReport:
    """Check cross-field rate invariants; returns errors and soft warnings.

    Hard errors: a liquidity rate exceeding the party's unsecured rate
    (the credit component r - mu must be nonnegative).  Warnings: a
    benchmark or collateral rate above a liquidity rate, i.e. a negative
    funding basis, which is unusual but not impossible.
    """
    errors: list[str] = []
    warnings: list[str] = []

    if rates.liquidity_b > rates.unsecured_b:
        errors.append("liquidity rate exceeds unsecured rate for party B")
    if rates.liquidity_c > rates.unsecured_c:
        errors.append("liquidity rate exceeds unsecured rate for party C")

    if rates.ois_rate > rates.liquidity_b:
        warnings.append("ois_rate exceeds party B liquidity rate (negative funding basis)")
    if rates.ois_rate > rates.liquidity_c:
        warnings.append("ois_rate exceeds party C liquidity rate (negative funding basis)")
    if rates.collateral_rate > rates.liquidity_b:
        warnings.append("collateral_rate exceeds party B liquidity rate")
    if rates.collateral_rate > rates.liquidity_c:
        warnings.append("collateral_rate exceeds party C liquidity rate")

    return ValidationReport(errors=tuple(errors), warnings=tuple(warnings))
