'''

Copyright (C) 2019 The tclab Developers.

This Source Code Form is subject to the terms of the
Mozilla Public License, v. 2.0. If a copy of the MPL was not distributed
with this file, You can obtain one at http://mozilla.org/MPL/2.0/.

'''

from dataclasses import dataclass
import math

import numpy as np

from tclab.defaults import MARTINGALE_TOL
from tclab.errors import ValidationError
from tclab.logger import bot
from tclab.paths import (
    StepPath,
    check_horizon,
    interpolate_at,
    merged_breaks
)
from tclab.wealth import (
    Strategy,
    admissibility_tol,
    holding_changes,
    wealth_paths
)

MARGIN_COLUMNS = ["n", "margin", "kappa", "margin_ok", "tv_bound", "x_over_eps",
                  "margin_max", "method", "samples", "target", "tv_holds"]


################################################################################
# Types
################################################################################


@dataclass(frozen=True, eq=False)
class PriceSystem:
    '''a shadow price m living inside the spread, with the measure it is a
       martingale under (the tree measure) and its realized margin
       sup |m - S| / S
    '''

    m: StepPath
    measure: object
    epsilon_margin: float

    def __post_init__(self):
        if not all(v > 0 for v in self.m.values):
            raise ValidationError("a price system must be strictly positive")


@dataclass(frozen=True)
class TVBoundReport:
    expected_volume: float
    bound: float
    holds: bool
    margin: float
    margin_ok: bool

    def __bool__(self):
        return self.holds

    def to_dict(self):
        return {"expected_volume": self.expected_volume,
                "bound": self.bound,
                "holds": self.holds,
                "margin": self.margin,
                "margin_ok": self.margin_ok}


################################################################################
# Shadow martingale
################################################################################


def shadow_martingale(market):
    '''shadow_martingale holds S_k on [t_k, t_{k+1}), the martingale that
       stays within the margin of the shifted interpolated price
    '''
    m = StepPath(market.grid, market.s_tilde)
    return PriceSystem(m=m,
                       measure=market.scenario.probability,
                       epsilon_margin=cps_margin(m, market.s_interp))


def cps_margin(m, s):
    '''cps_margin returns sup_t |m(t) - s(t)| / s(t) for a step path m and a
       positive linear path s. On each merged cell m is constant and s is
       linear, so the ratio is monotone and the cell endpoints suffice
       (using the left limit of m at the right end).
    '''
    check_horizon(m.grid, s.grid)
    if not all(v > 0 for v in s.values):
        raise ValidationError("the price path must be strictly positive")

    breaks, common = merged_breaks(m.grid.n, s.grid.n)
    starts, ends = breaks[:-1], breaks[1:]
    held = m.values.astype(float)[starts // (common // m.grid.n)]
    left = interpolate_at(s.values, s.grid.n, starts, common)
    right = interpolate_at(s.values, s.grid.n, ends, common)

    terminal = abs(float(m.terminal) - float(s.terminal)) / float(s.terminal)
    cells = np.maximum(np.abs(held - left) / left, np.abs(held - right) / right)
    return float(max(np.max(cells), terminal))


def margin_from_prices(s_tilde):
    '''per scenario margin of the shadow martingale, computed from the
       trading date prices alone: max_k |S_k / S_{k-1} - 1|
    '''
    s_tilde = np.asarray(s_tilde, dtype=float)
    moves = np.abs(s_tilde[:, 1:] / s_tilde[:, :-1] - 1.0)
    return moves.max(axis=1)


def margin_statistics(n, T=1.0, samples=1000, seed=None, cap=None, workers=None):
    '''margin_statistics summarizes the margin over the scenarios of one n:
       the probability weighted mean and the worst case. Small n are
       enumerated exactly, larger n are sampled (seed required).

       Returns
       =======
       dict with n, margin (mean), margin_max, method, samples
    '''
    from tclab.market import enumerate_tree, sample_markets
    if cap is None:
        from tclab.defaults import TCLAB_ENUMERATION_CAP as cap

    if n <= cap:
        tree = enumerate_tree(n, T)
        margins = margin_from_prices(tree.prices)
        weights = tree.weights
        method, count = "enumeration", tree.size
    else:
        sample = sample_markets(n, T, samples, seed, workers=workers)
        margins = margin_from_prices(sample.prices)
        weights = sample.weights
        method, count = "monte-carlo", sample.size

    bot.debug("margin n=%s by %s over %s scenarios" % (n, method, count))
    return {"n": int(n),
            "margin": float(np.sum(margins * weights)),
            "margin_max": float(np.max(margins)),
            "method": method,
            "samples": int(count)}


def margin_table(n_list, kappa, samples=1000, seed=None, T=1.0, cap=None, workers=None,
                 x=0.1, utility="shortfall:K=1.0", tv_max_n=8, config=None):
    '''the margin trend over n, one row per n with the columns
       (n, margin, kappa, margin_ok, tv_bound, x_over_eps) followed by
       (margin_max, method, samples, target, tv_holds).

       margin_ok compares the mean margin with the target kappa / 2.
       tv_bound is the expected traded volume of the dp policy for capital
       x, filled for n <= tv_max_n, and x_over_eps = x / (kappa / 2) is the
       bound it has to respect.
    '''
    import pandas

    eps = kappa / 2
    rows = []
    for n in n_list:
        row = margin_statistics(n, T, samples=samples, seed=seed, cap=cap, workers=workers)
        row["kappa"] = kappa
        row["target"] = eps
        row["margin_ok"] = row["margin"] <= eps
        row["x_over_eps"] = x / eps if eps > 0 else np.nan
        row["tv_bound"], row["tv_holds"] = np.nan, np.nan
        if eps > 0 and n <= tv_max_n:
            report = policy_tv_bound(n, kappa, x, utility, T, config=config, workers=workers)
            row["tv_bound"], row["tv_holds"] = report.expected_volume, report.holds
        rows.append(row)
    return pandas.DataFrame(rows, columns=MARGIN_COLUMNS)


def policy_tv_bound(n, kappa, x=0.1, utility="shortfall:K=1.0", T=1.0, config=None, workers=None):
    '''tv_bound_check on the dp policy of the n step tree with eps = kappa / 2'''
    from tclab.market import enumerate_tree
    from tclab.solver import Solver, SolverConfig

    if config is None:
        config = SolverConfig(workers=workers)
    tree = enumerate_tree(n, T)
    report = Solver(tree, utility, x, kappa, config).dp_value()
    bot.debug("traded volume of the n=%s dp policy" % n)
    return tv_bound_check(report.policy, report.prices, None, x, kappa / 2, tree, kappa)


################################################################################
# Martingale checks
################################################################################


def verify_martingale(tree, path_values=None, tol=MARTINGALE_TOL):
    '''verify_martingale checks that every internal node value equals the
       probability weighted average of its two children.

       Parameters
       ==========
       tree: the ScenarioTree (probabilities and shape)
       path_values: (scenarios, n+1) adapted values, the prices by default

       Returns
       =======
       (ok, worst defect) where each defect is relative to max(|parent|, 1).
       Exact trees give a defect of 0.
    '''
    values = tree.s_tilde if path_values is None else np.asarray(path_values)
    if values.shape != (tree.size, tree.n + 1):
        raise ValidationError("path values must have shape %s" % ((tree.size, tree.n + 1),))

    probabilities = tree.probabilities
    if values.dtype != object:
        probabilities = probabilities.astype(float)

    worst = 0
    for level in range(tree.n):
        parent = values[::tree.block(level), level]
        children = values[::tree.block(level + 1), level + 1]
        weights = probabilities.reshape(2 ** (level + 1), -1).sum(axis=1)
        down, up = weights[0::2], weights[1::2]
        mean = (children[0::2] * down + children[1::2] * up) / (down + up)

        for defect, value in zip(np.abs(mean - parent), parent):
            scale = max(abs(value), 1)
            worst = max(worst, defect / scale)

    worst = float(worst)
    return worst <= tol, worst


def tv_bound_check(strategies, prices, systems, x, eps, tree, kappa):
    '''tv_bound_check computes the expected traded volume
       E[sum_k S_k |gamma_k - gamma_{k-1}|] of an admissible strategy over
       the tree and compares it with x / eps.

       Parameters
       ==========
       strategies: one Strategy per scenario, or a (scenarios, n+1) array
       prices: (scenarios, n+1) trading date prices
       systems: PriceSystem per scenario (or None to derive the margin
                from the prices)
       x: initial capital
       eps: margin, kappa / 2 by convention
       tree: the ScenarioTree giving the measure
       kappa: cost rate, used for admissibility and the margin condition
    '''
    if not eps > 0:
        raise ValidationError("eps must be positive, got %s" % eps)
    if not x > 0:
        raise ValidationError("initial capital must be positive, got %s" % x)

    holdings = np.asarray([s.holdings if isinstance(s, Strategy) else s
                           for s in strategies], dtype=float)
    prices = np.asarray(prices, dtype=float)
    if holdings.shape != prices.shape or len(prices) != tree.size:
        raise ValidationError("need one strategy and one price path per scenario")

    wealth = wealth_paths(prices, holdings, kappa)
    if np.any(x + wealth < -admissibility_tol(x)):
        raise ValidationError("the bound only applies to admissible strategies")

    volume = np.sum(prices * np.abs(holding_changes(holdings)), axis=1)
    expected = float(np.sum(volume * tree.weights))

    if systems is None:
        margin = float(np.max(margin_from_prices(prices)))
    else:
        margin = float(max(s.epsilon_margin for s in systems))

    bound = x / eps
    return TVBoundReport(expected_volume=expected,
                         bound=bound,
                         holds=expected <= bound + 1e-12 * max(1.0, bound),
                         margin=margin,
                         margin_ok=margin <= kappa - eps)


def moment_condition(ratios, probabilities, q):
    '''the q-th moment E_Q[(dP/dQ)^q] of a density given per scenario.

       Parameters
       ==========
       ratios: dP/dQ per scenario, nonnegative with Q-mean 1
       probabilities: Q per scenario
       q: exponent, at least 1
    '''
    ratios = np.asarray(ratios, dtype=float)
    probabilities = np.asarray(probabilities, dtype=float)
    if ratios.shape != probabilities.shape:
        raise ValidationError("need one ratio per scenario")
    if not q >= 1:
        raise ValidationError("exponent must be at least 1, got %s" % q)
    if np.any(ratios < 0) or np.any(probabilities < 0):
        raise ValidationError("ratios and probabilities must be nonnegative")
    if not math.isclose(np.sum(probabilities), 1.0, rel_tol=1e-12):
        raise ValidationError("probabilities must sum to 1")
    if not math.isclose(np.sum(ratios * probabilities), 1.0, rel_tol=1e-12):
        raise ValidationError("ratios do not define a density (mean is not 1)")
    return float(np.sum(probabilities * ratios ** q))
