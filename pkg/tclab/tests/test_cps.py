#!/usr/bin/python

# Copyright (C) 2019 The tclab Developers.

# This Source Code Form is subject to the terms of the
# Mozilla Public License, v. 2.0. If a copy of the MPL was not distributed
# with this file, You can obtain one at http://mozilla.org/MPL/2.0/.

import math

import numpy as np
import pytest


def test_shadow_martingale():
    print("Testing cps.shadow_martingale")
    from tclab.cps import shadow_martingale
    from tclab.market import build_market
    for xi in [(1,), (-1,)]:
        system = shadow_martingale(build_market(1, 1.0, xi))
        assert list(system.m.values) == [1.0, 1.0]
        assert system.epsilon_margin == 0

    market = build_market(2, 1.0, (1, -1))
    system = shadow_martingale(market)
    assert system.m(0.25) == 1.0
    assert system.m(0.5) == pytest.approx(1.49012, abs=1e-4)
    assert system.epsilon_margin >= 0.49012
    assert system.measure == 0.25


def test_cps_margin_examples():
    from tclab.cps import cps_margin
    from tclab.errors import ValidationError
    from tclab.paths import LinearPath, StepPath, TimeGrid
    grid = TimeGrid(2)
    assert cps_margin(StepPath(grid, [2.0, 2.0, 2.0]), LinearPath(grid, [2.0, 2.0, 2.0])) == 0
    with pytest.raises(ValidationError):
        cps_margin(StepPath(grid, [1.0, 1.0, 1.0]), LinearPath(TimeGrid(2, 2.0), [1.0, 1.0, 1.0]))
    with pytest.raises(ValidationError):
        cps_margin(StepPath(grid, [1.0, 1.0, 1.0]), LinearPath(grid, [1.0, 0.0, 1.0]))


def test_margin_from_prices():
    print("Testing cps.margin_from_prices against cps_margin")
    from tclab.cps import margin_from_prices, shadow_martingale
    from tclab.market import enumerate_tree
    tree = enumerate_tree(6)
    margins = margin_from_prices(tree.prices)
    for index, market in enumerate(tree.markets()):
        assert shadow_martingale(market).epsilon_margin == pytest.approx(margins[index], abs=1e-12)


def test_margin_bound():
    from tclab.cps import margin_from_prices
    from tclab.market import enumerate_tree
    for n in range(2, 13):
        move = math.log(n) * math.sqrt(1.0 / n)
        margins = margin_from_prices(enumerate_tree(n).prices)
        assert np.max(margins) <= move / (1 - move) + 1e-12


def test_verify_martingale():
    print("Testing cps.verify_martingale")
    from tclab.cps import verify_martingale
    from tclab.market import enumerate_tree
    ok, defect = verify_martingale(enumerate_tree(1))
    assert ok and defect == 0

    ok, defect = verify_martingale(enumerate_tree(2))
    assert ok and defect <= 1e-12

    ok, defect = verify_martingale(enumerate_tree(5, exact=True))
    assert ok and defect == 0

    # the square of the walk is a strict submartingale
    tree = enumerate_tree(2)
    ok, defect = verify_martingale(tree, tree.x1 ** 2)
    assert not ok
    assert defect == pytest.approx(0.5)


def test_verify_martingale_large():
    from tclab.cps import verify_martingale
    from tclab.errors import ValidationError
    from tclab.market import enumerate_tree
    tree = enumerate_tree(12)
    ok, defect = verify_martingale(tree)
    assert ok and defect <= 1e-12
    assert verify_martingale(tree, tree.x2)[0]
    with pytest.raises(ValidationError):
        verify_martingale(tree, tree.prices[:, 1:])


def test_margin_statistics():
    from tclab.cps import margin_from_prices, margin_statistics
    from tclab.market import enumerate_tree
    stats = margin_statistics(4)
    assert stats["method"] == "enumeration"
    assert stats["samples"] == 16
    assert stats["margin"] == pytest.approx(np.mean(margin_from_prices(enumerate_tree(4).prices)))

    stats = margin_statistics(20, samples=50, seed=1)
    assert stats["method"] == "monte-carlo"
    assert stats["samples"] == 50
    assert stats["margin"] <= stats["margin_max"]


def test_margin_trend():
    print("Testing cps.margin_table trend")
    from tclab.cps import margin_table
    frame = margin_table([16, 64, 256, 1024, 4096], kappa=0.1, samples=1000, seed=1)
    assert list(frame.columns) == ["n", "margin", "kappa", "margin_ok", "tv_bound", "x_over_eps",
                                   "margin_max", "method", "samples", "target", "tv_holds"]
    assert frame["tv_bound"].isna().all()
    margins = list(frame["margin"])
    assert all(a > b for a, b in zip(margins, margins[1:]))
    assert margins[-1] <= 0.05
    assert bool(frame["margin_ok"].iloc[-1])
    assert list(frame["method"]) == ["enumeration"] + ["monte-carlo"] * 4


def test_margin_table_traded_volume():
    print("Testing cps.margin_table traded volume columns")
    from tclab.cps import margin_table, policy_tv_bound
    frame = margin_table([2, 4], kappa=0.1, x=0.1)
    assert list(frame["kappa"]) == [0.1, 0.1]
    assert np.allclose(frame["x_over_eps"], 2.0)
    assert frame["tv_bound"].notna().all()
    assert all(frame["tv_bound"] <= frame["x_over_eps"])
    assert all(bool(h) for h in frame["tv_holds"])

    report = policy_tv_bound(4, 0.1, x=0.1)
    assert report.expected_volume == pytest.approx(frame["tv_bound"].iloc[1])
    assert report.bound == pytest.approx(2.0)

    frame = margin_table([2, 4], kappa=0.1, tv_max_n=2)
    assert frame["tv_bound"].notna().iloc[0]
    assert frame["tv_bound"].isna().iloc[1]


def test_tv_bound():
    print("Testing cps.tv_bound_check")
    from tclab.cps import tv_bound_check
    from tclab.errors import ValidationError
    from tclab.market import enumerate_tree
    tree = enumerate_tree(1)

    report = tv_bound_check(np.zeros((2, 2)), tree.prices, None, 0.02, 0.05, tree, 0.1)
    assert report.holds and report.expected_volume == 0

    # x + V_0 = 0 exactly, the traded volume is 2h against x / eps = 0.4
    held = np.array([[0.1, 0.0], [0.1, 0.0]])
    report = tv_bound_check(held, tree.prices, None, 0.02, 0.05, tree, 0.1)
    assert report
    assert report.expected_volume == pytest.approx(0.2)
    assert report.bound == pytest.approx(0.4)
    assert report.margin_ok
    assert set(report.to_dict()) == {"expected_volume", "bound", "holds", "margin", "margin_ok"}

    with pytest.raises(ValidationError):
        tv_bound_check(10 * held, tree.prices, None, 0.02, 0.05, tree, 0.1)
    with pytest.raises(ValidationError):
        tv_bound_check(held, tree.prices, None, 0.02, 0.0, tree, 0.1)
    with pytest.raises(ValidationError):
        tv_bound_check(held[:1], tree.prices, None, 0.02, 0.05, tree, 0.1)


def test_moment_condition():
    print("Testing cps.moment_condition")
    from tclab.cps import moment_condition
    from tclab.errors import ValidationError
    half = [0.5, 0.5]
    assert moment_condition([1.0, 1.0], half, 3) == 1
    assert moment_condition([2.0, 0.0], half, 2) == 2
    assert moment_condition([1.5, 0.5], half, 1) == pytest.approx(1.0)

    with pytest.raises(ValidationError):
        moment_condition([2.0, 1.0], half, 2)
    with pytest.raises(ValidationError):
        moment_condition([1.0, 1.0], half, 0.5)
    with pytest.raises(ValidationError):
        moment_condition([1.0], half, 2)
