"""Binomial-tree pricing of bilateral defaultable derivatives.

Fair values are obtained by discounting at a collateralization-dependent,
sign-switching effective financing rate on a CRR lattice with repo-rate
stock drift; the counterparty risk adjustment decomposes coherently into
cva/cfa/dva/dfa on the same tree.
"""

from .discounting import (Constant, DiscountMode, RatePair, Riskfree, Switching,
                          ValueSide, discount_factor, effective_rate,
                          switching_rate_from_expectation)
from .lattice import Lattice, LatticeSpec, NumericalError, build_lattice
from .market import (CollateralScheme, CreditCurve, PartyRates,
                     SurvivalConvention, ValidationReport, blended_funding_rate,
                     liquidity_rate_from_basis, validate)
from .payoff import (Exercise, LegKind, PayoffLeg, Portfolio, shifted_forward,
                     terminal_payoff)
from .pde import FdScheme, GridSpec, PdeSolution, solve_pde
from .pricer import (Greeks, ValuedTree, closed_form_delta, closed_form_vanilla,
                     greeks, price, rollback)
from .xva import (XvaBreakdown, cra, expected_exposure_profile, industry_cva,
                  industry_fva, practitioner_fva, xva_by_rate_shift, xva_on_tree)

__version__ = "0.1.0"

__all__ = [
    "Constant", "DiscountMode", "RatePair", "Riskfree", "Switching", "ValueSide",
    "discount_factor", "effective_rate", "switching_rate_from_expectation",
    "Lattice", "LatticeSpec", "NumericalError", "build_lattice",
    "CollateralScheme", "CreditCurve", "PartyRates", "SurvivalConvention",
    "ValidationReport", "blended_funding_rate", "liquidity_rate_from_basis",
    "validate",
    "Exercise", "LegKind", "PayoffLeg", "Portfolio", "shifted_forward",
    "terminal_payoff",
    "FdScheme", "GridSpec", "PdeSolution", "solve_pde",
    "Greeks", "ValuedTree", "closed_form_delta", "closed_form_vanilla",
    "greeks", "price", "rollback",
    "XvaBreakdown", "cra", "expected_exposure_profile", "industry_cva",
    "industry_fva", "practitioner_fva", "xva_by_rate_shift", "xva_on_tree",
]
