import pytest

from lspricer import (CollateralScheme, PartyRates, Portfolio, PayoffLeg,
                      build_lattice, shifted_forward)


@pytest.fixture
def table1_rates():
    """Rate set from the two-party worked example: B at 5.7%/5.2%, C at 8.5%/5.5%."""
    return PartyRates(
        ois_rate=0.046,
        collateral_rate=0.02,
        repo_rate=0.055,
        dividend_yield=0.0,
        unsecured_b=0.057,
        unsecured_c=0.085,
        liquidity_b=0.052,
        liquidity_c=0.055,
    )


@pytest.fixture
def uncollateralized():
    return CollateralScheme.uncollateralized()


@pytest.fixture
def call_50():
    return Portfolio(legs=(PayoffLeg("call", 1.0, 50.0),), expiry=0.25)


@pytest.fixture
def fwd_45_55():
    return shifted_forward(45.0, 55.0, expiry=0.5)


@pytest.fixture
def lattice_1step():
    return build_lattice(50.0, 0.5, 0.055, 0.0, 0.25, 1)


@pytest.fixture
def lattice_2step():
    return build_lattice(50.0, 0.5, 0.055, 0.0, 0.5, 2)
