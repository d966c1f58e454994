"""Command-line front end: price | xva | tree | converge.

Reads a JSON configuration describing the market, collateral scheme,
portfolio, and engine settings; prints a human-readable report and,
on request, a machine-readable JSON mirror, a CSV tree dump, and
rendered figures.

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 convergence acceptance failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

from .discounting import Constant, DiscountMode, Riskfree, Switching
from .lattice import LatticeSpec, NumericalError
from .market import (CollateralScheme, CreditCurve, PartyRates, validate)
from .payoff import LegKind, PayoffLeg, Portfolio
from .pde import FdScheme, GridSpec, solve_pde
from .pricer import closed_form_vanilla, greeks, price, rollback
from .xva import XvaBreakdown, xva_by_rate_shift, xva_on_tree

CONVERGE_STEPS = (16, 64, 256, 512)


class ConfigError(Exception):
    pass


def _take(section: dict, name: str, allowed: set, required: set) -> None:
    unknown = set(section) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) in {name}: {', '.join(sorted(unknown))}")
    missing = required - set(section)
    if missing:
        raise ConfigError(f"missing key(s) in {name}: {', '.join(sorted(missing))}")


@dataclass
class RunConfig:
    spot: float
    sigma: float
    rates: PartyRates
    curve: CreditCurve | None
    scheme: CollateralScheme
    portfolio: Portfolio
    steps: int
    mode_name: str
    constant_rate: float | None
    xva_method: str
    grid: GridSpec

    def lattice_spec(self) -> LatticeSpec:
        return LatticeSpec(self.spot, self.sigma, self.rates.repo_rate,
                           self.rates.dividend_yield, self.portfolio.expiry,
                           self.steps)

    def mode(self) -> DiscountMode:
        if self.mode_name == "switching":
            return Switching(self.rates, self.scheme)
        if self.mode_name == "constant":
            return Constant(self.constant_rate)
        return Riskfree(self.rates.ois_rate)


_RATE_KEYS = {"ois_rate", "collateral_rate", "repo_rate", "dividend_yield",
              "unsecured_b", "unsecured_c", "liquidity_b", "liquidity_c"}
_CREDIT_KEYS = {"hazard_rate", "recovery", "survival_convention"}


def parse_config(raw: dict) -> RunConfig:
    _take(raw, "config", {"market", "scheme", "portfolio", "engine"},
          {"market", "portfolio", "engine"})

    market = raw["market"]
    _take(market, "market", {"spot", "volatility"} | _RATE_KEYS | _CREDIT_KEYS,
          {"spot", "volatility"} | _RATE_KEYS)
    try:
        rates = PartyRates(**{k: float(market[k]) for k in _RATE_KEYS})
        curve = None
        if "hazard_rate" in market or "recovery" in market:
            curve = CreditCurve(
                hazard_rate=float(market.get("hazard_rate", 0.0)),
                recovery=float(market.get("recovery", 0.0)),
                survival_convention=market.get("survival_convention", "own_survival"),
            )
        spot = float(market["spot"])
        sigma = float(market["volatility"])
        if spot <= 0 or sigma <= 0:
            raise ValueError("spot and volatility must be positive")

        scheme_raw = raw.get("scheme", {})
        _take(scheme_raw, "scheme", {"eta_b", "eta_c", "chi_b", "chi_c"}, set())
        scheme = CollateralScheme(
            eta_b=float(scheme_raw.get("eta_b", 0.0)),
            eta_c=float(scheme_raw.get("eta_c", 0.0)),
            chi_b=int(scheme_raw.get("chi_b", 1)),
            chi_c=int(scheme_raw.get("chi_c", 1)),
        )

        pf = raw["portfolio"]
        _take(pf, "portfolio", {"expiry", "legs"}, {"expiry", "legs"})
        legs = []
        for k, leg in enumerate(pf["legs"]):
            _take(leg, f"portfolio.legs[{k}]",
                  {"kind", "strike", "quantity", "exercise"}, {"kind", "quantity"})
            legs.append(PayoffLeg(
                kind=leg["kind"],
                quantity=float(leg["quantity"]),
                strike=float(leg.get("strike", 0.0)),
                exercise=leg.get("exercise", "european"),
            ))
        portfolio = Portfolio(legs=tuple(legs), expiry=float(pf["expiry"]))

        engine = raw["engine"]
        _take(engine, "engine",
              {"steps", "mode", "constant_rate", "xva_method", "grid"}, {"steps"})
        steps = int(engine["steps"])
        mode_name = engine.get("mode", "switching")
        if mode_name not in ("switching", "constant", "riskfree"):
            raise ValueError(f"unknown discount mode {mode_name!r}")
        constant_rate = engine.get("constant_rate")
        if mode_name == "constant":
            if constant_rate is None:
                raise ValueError("constant mode requires engine.constant_rate")
            constant_rate = float(constant_rate)
        xva_method = engine.get("xva_method", "recursive")
        if xva_method not in ("recursive", "rate_shift", "rate-shift"):
            raise ValueError(f"unknown xva method {xva_method!r}")
        xva_method = xva_method.replace("-", "_")

        grid_raw = engine.get("grid", {})
        _take(grid_raw, "engine.grid",
              {"space_steps", "time_steps", "s_max_mult", "scheme"}, set())
        grid = GridSpec(
            space_steps=int(grid_raw.get("space_steps", 400)),
            time_steps=int(grid_raw.get("time_steps", 400)),
            s_max_mult=(float(grid_raw["s_max_mult"])
                        if "s_max_mult" in grid_raw else None),
            scheme=grid_raw.get("scheme", "crank_nicolson"),
        )
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc

    report = validate(rates, curve, scheme)
    if not report.ok:
        raise ConfigError("; ".join(report.errors))

    return RunConfig(spot=spot, sigma=sigma, rates=rates, curve=curve,
                     scheme=scheme, portfolio=portfolio, steps=steps,
                     mode_name=mode_name, constant_rate=constant_rate,
                     xva_method=xva_method, grid=grid)


def load_config(path: str) -> RunConfig:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in config: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    return parse_config(raw)


def _fmt17(value: float) -> float:
    # round-trippable: 17 significant digits preserve every double exactly
    return float(f"{value:.17g}")


def dump_json(payload: dict) -> str:
    return json.dumps(
        {k: _fmt17(v) if isinstance(v, float) else v for k, v in payload.items()},
        sort_keys=True, separators=(", ", ": "))


def write_tree_csv(tree, fh) -> None:
    writer = csv.writer(fh)
    writer.writerow(["step", "up_count", "stock_price", "value",
                     "effective_rate", "exercised"])
    lat = tree.lattice
    for i in range(lat.n_steps + 1):
        prices = lat.level_prices(i)
        for j in range(i + 1):
            rate = f"{tree.rates[i][j]:.17g}" if i < lat.n_steps else ""
            writer.writerow([i, j, f"{prices[j]:.17g}",
                             f"{tree.values[i][j]:.17g}", rate,
                             str(bool(tree.exercised[i][j]))])


def read_tree_csv(fh) -> list[dict]:
    rows = []
    for row in csv.DictReader(fh):
        rows.append({
            "step": int(row["step"]),
            "up_count": int(row["up_count"]),
            "stock_price": float(row["stock_price"]),
            "value": float(row["value"]),
            "effective_rate": float(row["effective_rate"]) if row["effective_rate"] else None,
            "exercised": row["exercised"] == "True",
        })
    return rows


def _emit(args, text_report: str, payload: dict) -> None:
    if args.json:
        print(dump_json(payload))
    else:
        print(text_report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(dump_json(payload) + "\n")


def cmd_price(cfg: RunConfig, args) -> int:
    spec = cfg.lattice_spec()
    lattice = spec.build()
    mode = cfg.mode()
    fair = price(lattice, cfg.portfolio, mode)
    rf = price(lattice, cfg.portfolio, Riskfree(cfg.rates.ois_rate))
    g = greeks(spec, cfg.portfolio, mode)
    payload = {"fair_value": fair, "riskfree_value": rf, "cra": rf - fair,
               "delta": g.delta, "gamma": g.gamma, "vega": g.vega}
    text = "\n".join([
        f"fair value      {fair:12.6f}",
        f"riskfree value  {rf:12.6f}",
        f"CRA             {rf - fair:12.6f}",
        f"delta           {g.delta:12.6f}",
        f"gamma           {g.gamma:12.6f}",
        f"vega            {g.vega:12.6f}",
    ])
    _emit(args, text, payload)
    if args.figure:
        from . import plots
        plots.save_figure(plots.tree_figure(rollback(lattice, cfg.portfolio, mode)),
                          args.figure)
    return 0


def _run_xva(cfg: RunConfig, method: str) -> XvaBreakdown:
    lattice = cfg.lattice_spec().build()
    if method == "recursive":
        return xva_on_tree(lattice, cfg.portfolio, cfg.rates, cfg.scheme)
    return xva_by_rate_shift(lattice, cfg.portfolio, cfg.rates, cfg.scheme)


def cmd_xva(cfg: RunConfig, args) -> int:
    method = (args.method or cfg.xva_method).replace("-", "_")
    bd = _run_xva(cfg, method)
    payload = {"fair_value": bd.fair_value, "riskfree_value": bd.riskfree_value,
               "cra": bd.cra, "cva": bd.cva, "cfa": bd.cfa, "dva": bd.dva,
               "dfa": bd.dfa, "method": bd.method,
               "conservation_residual": bd.conservation_residual}
    text = "\n".join([
        f"method          {bd.method}",
        f"final prc       {bd.fair_value:12.6f}",
        f"riskfree prc    {bd.riskfree_value:12.6f}",
        f"cva             {bd.cva:12.6f}",
        f"cfa             {bd.cfa:12.6f}",
        f"dva             {bd.dva:12.6f}",
        f"dfa             {bd.dfa:12.6f}",
        f"CRA             {bd.cra:12.6f}",
        f"conservation    {bd.conservation_residual:12.3e}",
    ])
    _emit(args, text, payload)
    if args.figure:
        from . import plots
        plots.save_figure(plots.xva_figure(bd), args.figure)
    return 0


def cmd_tree(cfg: RunConfig, args) -> int:
    lattice = cfg.lattice_spec().build()
    tree = rollback(lattice, cfg.portfolio, cfg.mode())
    buf = io.StringIO()
    write_tree_csv(tree, buf)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    if args.figure:
        from . import plots
        plots.save_figure(plots.tree_figure(tree), args.figure)
    return 0


def _single_vanilla(portfolio: Portfolio) -> PayoffLeg:
    if len(portfolio.legs) != 1 or portfolio.legs[0].kind not in (LegKind.CALL,
                                                                  LegKind.PUT):
        raise ConfigError("converge requires a single call or put leg")
    return portfolio.legs[0]


def cmd_converge(cfg: RunConfig, args) -> int:
    import numpy as np

    if cfg.mode_name == "constant":
        leg = _single_vanilla(cfg.portfolio)
        exact = leg.quantity * closed_form_vanilla(
            cfg.spot, leg.strike, cfg.sigma, cfg.portfolio.expiry,
            cfg.rates.repo_rate, cfg.rates.dividend_yield, cfg.constant_rate,
            leg.kind)
        rows = []
        for n in CONVERGE_STEPS:
            spec = LatticeSpec(cfg.spot, cfg.sigma, cfg.rates.repo_rate,
                               cfg.rates.dividend_yield, cfg.portfolio.expiry, n)
            err = abs(price(spec.build(), cfg.portfolio, cfg.mode()) - exact)
            rows.append((n, err))
        flat = PartyRates(ois_rate=cfg.constant_rate, collateral_rate=cfg.constant_rate,
                          repo_rate=cfg.rates.repo_rate,
                          dividend_yield=cfg.rates.dividend_yield,
                          unsecured_b=cfg.constant_rate, unsecured_c=cfg.constant_rate,
                          liquidity_b=cfg.constant_rate, liquidity_c=cfg.constant_rate)
        pde_err = abs(solve_pde(cfg.spot, cfg.sigma, flat, cfg.scheme,
                                cfg.portfolio, cfg.grid).value - exact)
        lines = ["steps  |tree - closed_form|"]
        lines += [f"{n:5d}  {err:.6e}" for n, err in rows]
        lines.append(f"PDE ({cfg.grid.scheme.value} "
                     f"{cfg.grid.space_steps}x{cfg.grid.time_steps})  {pde_err:.6e}")
        errs = [err for _, err in rows]
        ok = all(b < a for a, b in zip(errs, errs[1:]))
        lines.append(f"monotone decreasing: {ok}")
        payload = {"closed_form": exact, "pde_error": pde_err, "monotone": ok}
        payload.update({f"tree_error_n{n}": err for n, err in rows})
        _emit(args, "\n".join(lines), payload)
        if args.figure:
            from . import plots
            plots.save_figure(
                plots.convergence_figure([n for n, _ in rows], errs, pde_err),
                args.figure)
        return 0 if ok else 4

    # switching mode: cross-check a fine tree against the PDE oracle
    spec = LatticeSpec(cfg.spot, cfg.sigma, cfg.rates.repo_rate,
                       cfg.rates.dividend_yield, cfg.portfolio.expiry, 512)
    tree_value = price(spec.build(), cfg.portfolio, cfg.mode())
    pde_value = solve_pde(cfg.spot, cfg.sigma, cfg.rates, cfg.scheme,
                          cfg.portfolio, cfg.grid).value
    diff = abs(tree_value - pde_value)
    ok = diff <= 5e-3
    payload = {"tree_512": tree_value, "pde": pde_value, "abs_diff": diff,
               "within_tolerance": ok}
    text = (f"tree(512)  {tree_value:.6f}\nPDE        {pde_value:.6f}\n"
            f"|diff|     {diff:.3e}  (tolerance 5e-03)")
    _emit(args, text, payload)
    return 0 if ok else 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lspricer",
        description="Binomial-tree pricing with liability-side discounting and XVA")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("price", "fair value, riskfree value, CRA, and Greeks"),
        ("xva", "coherent cva/cfa/dva/dfa decomposition"),
        ("tree", "per-node CSV dump of the valued lattice"),
        ("converge", "tree and PDE convergence checks"),
    ]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="JSON configuration file")
        p.add_argument("--json", action="store_true",
                       help="print machine-readable JSON instead of text")
        p.add_argument("--method", choices=["recursive", "rate-shift"],
                       help="XVA method override (xva subcommand)")
        p.add_argument("--steps", type=int, help="override engine.steps")
        p.add_argument("--out", help="write the report (JSON/CSV) to this path")
        p.add_argument("--figure", help="render a matplotlib figure to this path")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.steps is not None:
            cfg.steps = args.steps
            if cfg.steps < 1:
                raise ConfigError("steps must be at least 1")
        if cfg.steps < 1:
            raise ConfigError("engine.steps must be at least 1")
        handler = {"price": cmd_price, "xva": cmd_xva,
                   "tree": cmd_tree, "converge": cmd_converge}[args.command]
        return handler(cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
