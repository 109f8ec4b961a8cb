#!/usr/bin/python

# Copyright (C) 2019 The tclab Developers.

# This Source Code Form is subject to the terms of the
# Mozilla Public License, v. 2.0. If a copy of the MPL was not distributed
# with this file, You can obtain one at http://mozilla.org/MPL/2.0/.

from fractions import Fraction
import math
import os

import numpy as np
import pytest


ONE_PERIOD = [[1.0, 0.5], [1.0, 1.5]]


def small_config(**changes):
    from tclab.solver import SolverConfig
    settings = {"holding_step": 0.25, "holding_bound": 0.5,
                "cost_step": 0.005, "cost_span": 5.0}
    settings.update(changes)
    return SolverConfig(**settings)


################################################################################
# Configuration
################################################################################


def test_solver_config():
    print("Testing solver.SolverConfig")
    from tclab.errors import ValidationError
    from tclab.solver import SolverConfig
    config = SolverConfig(holding_step=0.25, holding_bound=0.5)
    assert list(config.holding_grid(np.ones((2, 2)), 0.1, 0.1)) == [-0.5, -0.25, 0.0, 0.25, 0.5]

    cost_min, levels, start = SolverConfig(cost_step=0.5, cost_span=1.0).cost_grid(2.0)
    assert (cost_min, levels, start) == (-1.0, 9, 2)

    # x / (2 kappa min S) = 0.5, inside the cap of 20 steps
    auto = SolverConfig(holding_step=0.05)
    assert auto.resolve_bound(np.ones((2, 2)), 0.1, 0.1) == pytest.approx(0.5)
    assert auto.resolve_bound(np.ones((2, 2)), 0.1, 0.0) == pytest.approx(1.0)
    assert auto.resolve_bound(np.ones((2, 2)), 10.0, 0.1) == pytest.approx(1.0)

    for bad in [{"holding_step": 0}, {"cost_step": -1}, {"cost_span": -0.1},
                {"holding_step": 0.5, "holding_bound": 0.25}, {"max_holdings": 0}]:
        with pytest.raises(ValidationError):
            SolverConfig(**bad)
    with pytest.raises(ValidationError):
        SolverConfig(cost_max=0.5).cost_grid(1.0)


def test_solver_rejects():
    from tclab.errors import ValidationError
    from tclab.market import enumerate_tree
    from tclab.solver import Solver
    tree = enumerate_tree(2)
    with pytest.raises(ValidationError):
        Solver(tree, "shortfall:K=1", 0.0, 0.1)
    with pytest.raises(ValidationError):
        Solver(tree, "shortfall:K=1", 0.1, 1.0)
    with pytest.raises(ValidationError):
        Solver(tree, "quadratic", 0.1, 0.1)


################################################################################
# Value functions
################################################################################


def test_trivial_grid():
    print("Testing dp and brute force where only holding 0 is admissible")
    from tclab.market import enumerate_tree
    from tclab.solver import Solver, SolverConfig
    config = SolverConfig(holding_step=10.0, holding_bound=10.0, cost_step=0.01)
    solver = Solver(enumerate_tree(2), "shortfall:K=1", 0.1, 0.05, config)
    no_trade = solver.no_trade_value()

    dp = solver.dp_value()
    brute = solver.brute_force_value()
    assert brute.value == pytest.approx(no_trade, abs=1e-12)
    assert dp.value == pytest.approx(no_trade, abs=1e-12)
    assert not any(s.holdings.any() for s in dp.policy)


def test_one_period_brute_force():
    print("Testing brute_force_value on a one period market")
    from tclab.market import ScenarioTree
    from tclab.solver import SolverConfig, brute_force_value
    tree = ScenarioTree.from_prices(ONE_PERIOD)
    config = SolverConfig(holding_step=1e-4, holding_bound=0.5)

    report = brute_force_value(tree, "shortfall:K=1", 0.1, 0.1, config)
    assert report.value == pytest.approx(-0.18077, abs=1e-3)
    assert report.solver == "brute"
    assert report.states_visited == 10001
    assert report.admissible

    # the best hedge buys until the down state is exactly ruined
    assert report.policy[0].holdings[0] == pytest.approx(0.1 / 0.65, abs=1e-4)

    frictionless = brute_force_value(tree, "shortfall:K=1", 0.1, 0.0, config)
    assert frictionless.value == pytest.approx(-0.15, abs=1e-6)
    assert frictionless.value > report.value


def test_one_period_dp():
    print("Testing dp_value on a one period market")
    from tclab.market import ScenarioTree
    from tclab.solver import SolverConfig, dp_value
    tree = ScenarioTree.from_prices(ONE_PERIOD)
    config = SolverConfig(holding_step=0.002, holding_bound=0.5,
                          cost_step=2e-4, cost_span=0.5)
    report = dp_value(tree, "shortfall:K=1", 0.1, 0.1, config)
    assert report.value == pytest.approx(-0.18077, abs=1e-3)
    assert report.lower_bound
    assert not report.fallback
    assert report.admissible
    assert report.policy_value >= report.value - 1e-12


def test_dp_against_brute_force():
    print("Testing dp_value between two brute force values")
    from tclab.market import enumerate_tree
    from tclab.solver import Solver
    rng = np.random.default_rng(2019)
    config = small_config()
    utilities = ["shortfall:K=1", "shortfall:K=0.8", "shortfall:K=1.2", "power:alpha=0.5"]

    for _ in range(20):
        n = int(rng.integers(1, 4))
        tree = enumerate_tree(n)
        kappa = float(rng.uniform(0.01, 0.2))
        x = float(rng.uniform(0.1, 0.5))
        utility = utilities[int(rng.integers(len(utilities)))]

        dp = Solver(tree, utility, x, kappa, config).dp_value()
        upper = Solver(tree, utility, x, kappa, config).brute_force_value()
        shrunk = x - (n + 1) * config.cost_step
        lower = Solver(tree, utility, shrunk, kappa, config).brute_force_value()

        assert lower.value - 1e-12 <= dp.value <= upper.value + 1e-12
        assert dp.policy_value >= dp.value - 1e-12
        assert dp.admissible and upper.admissible


def test_dp_monotone():
    print("Testing dp_value monotonicity in x and kappa")
    from tclab.market import enumerate_tree
    from tclab.solver import dp_value
    tree = enumerate_tree(3)
    config = small_config(holding_step=0.1, holding_bound=0.5)

    by_x = [dp_value(tree, "shortfall:K=1", x, 0.05, config).value for x in (0.1, 0.2, 0.4, 0.8)]
    assert all(a <= b + 1e-12 for a, b in zip(by_x, by_x[1:]))

    by_kappa = [dp_value(tree, "shortfall:K=1", 0.2, k, config).value for k in (0.0, 0.02, 0.1, 0.3)]
    assert all(a >= b - 1e-12 for a, b in zip(by_kappa, by_kappa[1:]))


def test_value_concave_in_x():
    print("Testing dp_value is nondecreasing and concave in x")
    from tclab.market import enumerate_tree
    from tclab.solver import dp_value
    tree = enumerate_tree(4)
    xs = np.linspace(0.05, 0.6, 12)
    values = np.array([dp_value(tree, "shortfall:K=1", x, 0.05).value for x in xs])
    assert values[0] == pytest.approx(-0.3983081484, abs=1e-9)
    assert values[-1] == pytest.approx(-0.2925461158, abs=1e-9)
    assert np.all(np.diff(values) >= 0)
    assert np.all(np.diff(values, 2) <= 1e-12)


def test_dp_dominates_no_trade():
    from tclab.market import enumerate_tree
    from tclab.solver import Solver
    for n in (1, 2, 4, 6):
        for utility in ("shortfall:K=1", "power:alpha=0.3", "log"):
            solver = Solver(enumerate_tree(n), utility, 0.3, 0.05, small_config(holding_step=0.1))
            report = solver.dp_value()
            assert report.value >= solver.no_trade_value() - 1e-12
            assert report.no_trade_value == solver.no_trade_value()


def test_dp_report():
    print("Testing solver.ValueReport")
    import json
    from tclab.market import enumerate_tree
    from tclab.solver import dp_value
    report = dp_value(enumerate_tree(2), "shortfall:K=1", 0.2, 0.05, small_config())
    record = report.to_dict()
    assert record["schema_version"] == "1.0"
    assert record["solver"] == "dp"
    assert record["grid"]["holdings"] == 5
    assert len(record["policy"]) == 4
    json.dumps(record)

    assert "policy" not in report.to_dict(include_policy=False)
    frame = report.policy_frame()
    assert list(frame.columns) == ["scenario_id", "k", "t", "S_k", "gamma_k", "V_k"]
    assert len(frame) == 4 * 3

    # the policy is adapted: scenarios through one node share the holding
    holdings = np.array([s.holdings for s in report.policy])
    assert len(set(holdings[:, 0])) == 1
    assert holdings[0, 1] == holdings[1, 1] and holdings[2, 1] == holdings[3, 1]


def test_log_report_at_ruin():
    from tclab.solver import ValueReport
    report = ValueReport(n=1, x=0.1, kappa=0.1, utility="log", value=-math.inf, solver="dp")
    assert report.to_dict()["value"] == "-inf"
    assert report.admissible is None


def test_tv_bound_for_dp_policies():
    print("Testing cps.tv_bound_check on dp policies")
    from tclab.cps import tv_bound_check
    from tclab.market import enumerate_tree
    from tclab.solver import dp_value
    kappa, x = 0.1, 0.2
    for n in (2, 4, 6):
        tree = enumerate_tree(n)
        report = dp_value(tree, "shortfall:K=1", x, kappa, small_config(holding_step=0.1, holding_bound=1.0))
        check = tv_bound_check(report.policy, tree.prices, None, x, kappa / 2, tree, kappa)
        assert check.holds


def test_resource_limits():
    print("Testing solver resource limits")
    from tclab.errors import ResourceLimitError
    from tclab.market import enumerate_tree
    from tclab.solver import SolverConfig, brute_force_value, dp_value
    with pytest.raises(ResourceLimitError):
        dp_value(enumerate_tree(4), "shortfall:K=1", 0.1, 0.1, SolverConfig(max_n=3))
    with pytest.raises(ResourceLimitError):
        brute_force_value(enumerate_tree(4), "shortfall:K=1", 0.1, 0.1, small_config())
    with pytest.raises(ResourceLimitError):
        brute_force_value(enumerate_tree(3), "shortfall:K=1", 0.1, 0.1,
                          SolverConfig(holding_step=0.05, holding_bound=1.0))


def test_dp_workers():
    print("Testing dp_value with a process pool")
    from tclab.market import enumerate_tree
    from tclab.solver import dp_value
    tree = enumerate_tree(5)
    serial = dp_value(tree, "shortfall:K=1", 0.2, 0.05, small_config(workers=1))
    pooled = dp_value(tree, "shortfall:K=1", 0.2, 0.05, small_config(workers=3))
    assert serial.value == pooled.value
    assert serial.states_visited == pooled.states_visited
    for one, two in zip(serial.policy, pooled.policy):
        assert np.array_equal(one.holdings, two.holdings)


def test_split_level():
    from tclab.solver.dp import split_level
    assert split_level(1, 6) is None
    assert split_level(2, 6) == 1
    assert split_level(3, 6) == 2
    assert split_level(64, 3) == 3


################################################################################
# Replication
################################################################################


def test_replication_constant():
    print("Testing frictionless_replication_price")
    from tclab.market import enumerate_tree
    from tclab.solver import frictionless_replication_price
    tree = enumerate_tree(3)
    price, hedges = frictionless_replication_price(tree, np.full(tree.size, 0.3))
    assert price == 0.3
    assert [len(h) for h in hedges] == [1, 2, 4]
    assert all(not np.any(h) for h in hedges)


def test_replication_call():
    from tclab.market import enumerate_tree
    from tclab.solver import frictionless_replication_price
    tree = enumerate_tree(2)
    call = lambda s: np.maximum(s - 1.0, 0.0)
    price, hedges = frictionless_replication_price(tree, call)
    assert price == pytest.approx(0.30512, abs=1e-4)
    assert price == pytest.approx(np.mean(call(tree.prices[:, -1])), rel=1e-12)
    assert hedges[0][0] > 0


def test_replication_random_payoffs():
    from tclab.market import enumerate_tree
    from tclab.solver import frictionless_replication_price
    rng = np.random.default_rng(6)
    tree = enumerate_tree(6)
    for _ in range(20):
        first, second = rng.normal(size=tree.size), rng.normal(size=tree.size)
        price, _ = frictionless_replication_price(tree, first)
        assert price == pytest.approx(np.sum(first * tree.weights), rel=1e-12, abs=1e-12)

        scale = float(rng.uniform(-2, 2))
        combined, _ = frictionless_replication_price(tree, scale * first + second)
        other, _ = frictionless_replication_price(tree, second)
        assert combined == pytest.approx(scale * price + other, rel=1e-10, abs=1e-12)


def test_replication_exact():
    from tclab.market import enumerate_tree
    from tclab.solver import frictionless_replication_price
    tree = enumerate_tree(3, exact=True)
    price, hedges = frictionless_replication_price(tree, lambda s: s)
    assert price == 1
    assert isinstance(price, Fraction)
    assert all(h == 1 for level in hedges for h in level)


def test_replication_rejects():
    from tclab.errors import IncompleteMarketError, ValidationError
    from tclab.market import enumerate_tree
    from tclab.solver import frictionless_replication_price
    with pytest.raises(IncompleteMarketError):
        frictionless_replication_price(enumerate_tree(1), lambda s: s)
    with pytest.raises(ValidationError):
        frictionless_replication_price(enumerate_tree(2), [1.0, 2.0])


################################################################################
# Convergence
################################################################################


def test_convergence_table():
    print("Testing solver.convergence_table")
    from tclab.market import enumerate_tree
    from tclab.solver import convergence_table, dp_value
    config = small_config()
    frame, reports = convergence_table([1, 2, 3, 4], "shortfall:K=1", 0.2, 0.05, config)
    assert list(frame.columns) == ["n", "kappa", "x", "value", "diff_prev",
                                   "runtime_ms", "states_visited"]
    assert list(frame["n"]) == [1, 2, 3, 4]
    assert math.isnan(frame["diff_prev"].iloc[0])
    assert frame["runtime_ms"].isna().all()
    assert all(r.policy is None for r in reports)

    direct = dp_value(enumerate_tree(2), "shortfall:K=1", 0.2, 0.05, config)
    assert frame["value"].iloc[1] == direct.value
    assert frame["diff_prev"].iloc[1] == pytest.approx(abs(direct.value - frame["value"].iloc[0]))

    frame, _ = convergence_table([1, 2], "shortfall:K=1", 0.2, 0.05, config, timings=True)
    assert frame["runtime_ms"].notna().all()


def test_convergence_rejects():
    from tclab.errors import ResourceLimitError, ValidationError
    from tclab.solver import SolverConfig, convergence_table
    with pytest.raises(ValidationError):
        convergence_table([], "shortfall:K=1", 0.2, 0.05)
    with pytest.raises(ValidationError):
        convergence_table([4, 2], "shortfall:K=1", 0.2, 0.05)
    with pytest.raises(ResourceLimitError):
        convergence_table([2, 8], "shortfall:K=1", 0.2, 0.05, SolverConfig(max_n=4))


def test_no_trade_dominance():
    print("Testing that large costs make trading worthless")
    from tclab.market import enumerate_tree
    from tclab.solver import Solver, convergence_table
    config = small_config()
    frame, reports = convergence_table([1, 2], "shortfall:K=1", 0.1, 0.6, config)
    for n, report in zip([1, 2], reports):
        solver = Solver(enumerate_tree(n), "shortfall:K=1", 0.1, 0.6, config)
        assert report.value == pytest.approx(solver.no_trade_value(), abs=1e-12)
        assert solver.brute_force_value().value == pytest.approx(solver.no_trade_value(), abs=1e-12)


def test_decreasing_tail():
    import pandas
    from tclab.solver import decreasing_tail
    frame = pandas.DataFrame({"diff_prev": [np.nan, 0.3, 0.2, 0.1, 0.05]})
    assert decreasing_tail(frame)
    assert not decreasing_tail(frame, count=5)
    frame = pandas.DataFrame({"diff_prev": [np.nan, 0.3, 0.1, 0.2]})
    assert not decreasing_tail(frame)


# u_n(0.1) at kappa=0.05, shortfall K=1, default grids
CONVERGENCE_PINS = {2: -0.2351211626, 4: -0.3517456484, 6: -0.3539502009,
                    8: -0.3485157454, 10: -0.3410536024, 12: -0.3330200164,
                    14: -0.3301000545}


def test_convergence_default_grids():
    print("Testing convergence_table on the default grids")
    from tclab.solver import convergence_table
    frame, reports = convergence_table([2, 4, 6, 8], "shortfall:K=1", 0.1, 0.05)
    for n, value in zip(frame["n"], frame["value"]):
        assert value == pytest.approx(CONVERGENCE_PINS[n], abs=1e-9)
    assert int(frame["states_visited"].iloc[-1]) == 4539050
    assert reports[-1].grid["holdings"] == 41
    assert reports[-1].grid["cost_levels"] == 421


def test_no_trade_law_oscillates():
    print("Testing the no-trade values along n")
    from tclab.market import enumerate_tree
    from tclab.solver import Solver
    pins = {6: -0.4086907162, 8: -0.3936301799, 10: -0.3838821142, 12: -0.3719617904}
    values = {n: Solver(enumerate_tree(n), "shortfall:K=1", 0.1, 0.05).no_trade_value()
              for n in pins}
    for n, value in pins.items():
        assert values[n] == pytest.approx(value, abs=1e-9)

    # the law of S_n alone moves by more from 10 to 12 than from 8 to 10
    assert abs(values[12] - values[10]) > abs(values[10] - values[8])


@pytest.mark.skipif(not os.environ.get("TCLAB_SLOW_TESTS"), reason="set TCLAB_SLOW_TESTS=1")
def test_convergence_long():
    print("Testing convergence_table up to n=14")
    from tclab.solver import convergence_table, decreasing_tail
    n_list = [2, 4, 6, 8, 10, 12, 14]
    frame, reports = convergence_table(n_list, "shortfall:K=1", 0.1, 0.05)
    for n, value in zip(frame["n"], frame["value"]):
        assert value == pytest.approx(CONVERGENCE_PINS[n], abs=1e-9)
    for report in reports:
        assert report.value >= report.no_trade_value - 1e-12

    diffs = frame["diff_prev"].values
    assert int(np.argmax(diffs[2:])) + 2 == 5
    assert diffs[-1] < 0.5 * diffs[-2]
    assert decreasing_tail(frame, count=2)


################################################################################
# Lookahead arbitrage
################################################################################


def test_lookahead_example():
    print("Testing lookahead_arbitrage")
    from tclab.market import build_market
    from tclab.solver import lookahead_arbitrage, lookahead_prices
    market = build_market(2, 1.0, (1, -1))
    prices = lookahead_prices(market)
    assert len(prices) == 5
    assert prices[0] == 1.0 and prices[1] == prices[2] == market.s_tilde[1]

    strategy, trace = lookahead_arbitrage(market, 0.0)
    assert strategy.grid.n == 4
    assert list(strategy.holdings) == [1, 0, -1, 0, 0]
    assert trace.terminal_wealth == pytest.approx(1.22041, abs=1e-3)
    assert np.all(trace.v >= -1e-12)


def test_lookahead_exact_profit():
    from tclab.market import enumerate_tree
    from tclab.solver import lookahead_arbitrage
    for market in enumerate_tree(3, exact=True).markets():
        _, trace = lookahead_arbitrage(market, 0)
        assert isinstance(trace.terminal_wealth, Fraction)
        assert trace.terminal_wealth > 0


def test_lookahead_profit():
    from tclab.market import enumerate_tree
    from tclab.solver import lookahead_arbitrage, lookahead_profit
    for n in range(2, 7):
        tree = enumerate_tree(n)
        assert np.all(lookahead_profit(tree.prices, 0.0) > 0)

        profits = lookahead_profit(tree.prices, 0.05)
        for index, market in enumerate(tree.markets()):
            _, trace = lookahead_arbitrage(market, 0.05)
            assert trace.terminal_wealth == pytest.approx(profits[index], rel=1e-12, abs=1e-12)


def test_lookahead_costs():
    print("Testing lookahead_profit with costs on sampled markets")
    from tclab.market import sample_markets
    from tclab.solver import lookahead_profit
    sample = sample_markets(256, 1.0, 1000, seed=64)
    assert np.mean(lookahead_profit(sample.prices, 0.05)) < 0
    assert np.mean(lookahead_profit(sample.prices, 0.0)) > 0
