"""Terminal payoffs of one netting set as a signed portfolio of vanilla legs."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np


class LegKind(str, Enum):
    CALL = "call"
    PUT = "put"
    FORWARD = "forward"
    FIXED_CASH = "fixed_cash"


class Exercise(str, Enum):
    EUROPEAN = "european"
    AMERICAN = "american"


@dataclass(frozen=True)
class PayoffLeg:
    """One signed vanilla leg; positive quantity means party B is long."""

    kind: LegKind
    quantity: float
    strike: float = 0.0
    exercise: Exercise = Exercise.EUROPEAN

    def __post_init__(self):
        if not isinstance(self.kind, LegKind):
            object.__setattr__(self, "kind", LegKind(self.kind))
        if not isinstance(self.exercise, Exercise):
            object.__setattr__(self, "exercise", Exercise(self.exercise))
        if self.quantity == 0:
            raise ValueError("leg quantity must be nonzero")
        if self.kind in (LegKind.CALL, LegKind.PUT, LegKind.FORWARD) and self.strike <= 0:
            raise ValueError(f"{self.kind.value} leg requires a positive strike")
        if self.exercise is Exercise.AMERICAN and self.kind not in (LegKind.CALL, LegKind.PUT):
            raise ValueError("american exercise is valid for call/put legs only")


@dataclass(frozen=True)
class Portfolio:
    """Ordered legs sharing a single expiry (one netting set, one horizon)."""

    legs: tuple[PayoffLeg, ...]
    expiry: float

    def __post_init__(self):
        object.__setattr__(self, "legs", tuple(self.legs))
        if self.expiry <= 0:
            raise ValueError("expiry must be positive")

    @property
    def has_american(self) -> bool:
        return any(leg.exercise is Exercise.AMERICAN for leg in self.legs)

    def scaled(self, c: float) -> "Portfolio":
        return Portfolio(
            legs=tuple(PayoffLeg(leg.kind, leg.quantity * c, leg.strike, leg.exercise)
                       for leg in self.legs),
            expiry=self.expiry,
        )


def _leg_intrinsic(leg: PayoffLeg, s):
    if leg.kind is LegKind.CALL:
        return np.maximum(s - leg.strike, 0.0)
    if leg.kind is LegKind.PUT:
        return np.maximum(leg.strike - s, 0.0)
    if leg.kind is LegKind.FORWARD:
        return s - leg.strike
    # fixed_cash pays one unit per quantity regardless of the stock price
    return np.ones_like(np.asarray(s, dtype=float))


def terminal_payoff(portfolio: Portfolio, s_terminal):
    """Signed payoff of the whole netting set at terminal stock price(s).

    Accepts a scalar or an array of terminal prices; returns the same shape.
    """
    s = np.asarray(s_terminal, dtype=float)
    if np.any(s < 0):
        raise ValueError("terminal stock price must be nonnegative")
    total = np.zeros_like(s)
    for leg in portfolio.legs:
        total = total + leg.quantity * _leg_intrinsic(leg, s)
    if np.isscalar(s_terminal):
        return float(total)
    return total


def shifted_forward(strike_call: float, strike_put: float, expiry: float,
                    quantity: float = 1.0) -> Portfolio:
    """Long call at the lower strike plus short put at the higher strike."""
    return Portfolio(
        legs=(
            PayoffLeg(LegKind.CALL, quantity, strike_call),
            PayoffLeg(LegKind.PUT, -quantity, strike_put),
        ),
        expiry=expiry,
    )
