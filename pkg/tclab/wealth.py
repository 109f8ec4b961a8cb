'''

Copyright (C) 2019 The tclab Developers.

This Source Code Form is subject to the terms of the
Mozilla Public License, v. 2.0. If a copy of the MPL was not distributed
with this file, You can obtain one at http://mozilla.org/MPL/2.0/.

'''

from dataclasses import dataclass

import numpy as np

from tclab.defaults import ADMISSIBILITY_TOL
from tclab.errors import ValidationError
from tclab.paths import (
    StepPath,
    TimeGrid,
    as_values,
    all_finite,
    check_horizon,
    jordan_decompose
)


################################################################################
# Types
################################################################################


@dataclass(frozen=True, eq=False)
class Strategy:
    '''holdings gamma_0..gamma_n at the trading dates, gamma_{0-} = 0 and
       the position is liquidated at maturity (gamma_n = 0)
    '''

    grid: TimeGrid
    holdings: np.ndarray

    def __post_init__(self):
        holdings = as_values(self.holdings)
        if len(holdings) != self.grid.n + 1:
            raise ValidationError("strategy needs %s holdings, got %s"
                                  % (self.grid.n + 1, len(holdings)))
        if not all_finite(holdings):
            raise ValidationError("holdings must be finite")
        if holdings[-1] != 0:
            raise ValidationError("the terminal holding must be 0, got %s" % holdings[-1])
        object.__setattr__(self, "holdings", holdings)

    @classmethod
    def from_positions(cls, grid, positions):
        '''a strategy from the positions held at t_0..t_{n-1}'''
        positions = as_values(positions)
        return cls(grid, np.concatenate([positions, positions[:1] * 0]))

    @property
    def n(self):
        return self.grid.n

    @property
    def path(self):
        return StepPath(self.grid, self.holdings)

    def to_dict(self):
        return {"n": self.grid.n,
                "T": self.grid.T,
                "holdings": [float(h) for h in self.holdings]}


@dataclass(frozen=True, eq=False)
class WealthTrace:
    '''the portfolio value at every trading date, with the inputs kept so
       the trace can be exported as a table
    '''

    grid: TimeGrid
    v: np.ndarray
    prices: np.ndarray = None
    holdings: np.ndarray = None

    @property
    def terminal_wealth(self):
        return self.v[-1]

    def to_frame(self):
        '''columns frozen as (k, t, S_k, gamma_k, V_k)'''
        import pandas
        n = self.grid.n
        return pandas.DataFrame({"k": np.arange(n + 1),
                                 "t": self.grid.points,
                                 "S_k": np.asarray(self.prices, dtype=float),
                                 "gamma_k": np.asarray(self.holdings, dtype=float),
                                 "V_k": np.asarray(self.v, dtype=float)},
                                columns=["k", "t", "S_k", "gamma_k", "V_k"])


################################################################################
# Wealth
################################################################################


def check_kappa(kappa):
    if not 0 <= kappa < 1:
        raise ValidationError("transaction cost rate must be in [0, 1), got %s" % kappa)


def holding_changes(holdings):
    '''increments along the last axis with gamma_{0-} = 0'''
    holdings = np.asarray(holdings)
    delta = holdings.copy()
    delta[..., 1:] = holdings[..., 1:] - holdings[..., :-1]
    return delta


def wealth_paths(prices, holdings, kappa):
    '''wealth_paths evaluates the portfolio value for many scenarios at
       once. Rows of prices and holdings are scenarios, columns are dates.

       V_k = g_k S_k - sum_{j<=k} S_j dg_j - kappa |g_k| S_k
             - kappa sum_{j<=k} S_j |dg_j|
    '''
    prices = np.asarray(prices)
    holdings = np.asarray(holdings)
    delta = holding_changes(holdings)
    cash = -np.cumsum(prices * delta, axis=-1) - kappa * np.cumsum(prices * np.abs(delta), axis=-1)
    return holdings * prices - kappa * np.abs(holdings) * prices + cash


def _check_prices(prices, grid):
    prices = as_values(prices)
    if len(prices) != grid.n + 1:
        raise ValidationError("need %s prices for the strategy grid, got %s"
                              % (grid.n + 1, len(prices)))
    if not all(p > 0 for p in prices):
        raise ValidationError("prices must be strictly positive")
    return prices


def wealth_process(prices, strategy, kappa):
    '''wealth_process returns the portfolio value of a strategy with
       proportional costs: long positions marked at the bid (1 - kappa) S,
       short positions at the ask (1 + kappa) S, every trade charged
       kappa S per share.

       Parameters
       ==========
       prices: S_0..S_n at the trading dates
       strategy: the Strategy (terminal holding 0)
       kappa: cost rate in [0, 1)
    '''
    check_kappa(kappa)
    prices = _check_prices(prices, strategy.grid)
    v = wealth_paths(prices, strategy.holdings, kappa)
    return WealthTrace(strategy.grid, v, prices, strategy.holdings)


def admissibility_tol(x):
    return ADMISSIBILITY_TOL * max(1.0, abs(float(x)))


def is_admissible(x, trace):
    '''true if x + V_k >= 0 at every trading date (up to a relative
       tolerance). V is affine between dates, so the dates suffice.
    '''
    if not x > 0:
        raise ValidationError("initial capital must be positive, got %s" % x)
    tol = admissibility_tol(x)
    return bool(all(x + v >= -tol for v in trace.v))


def scale_strategy(scale, strategy):
    if not scale > 0:
        raise ValidationError("scale must be positive, got %s" % scale)
    return Strategy(strategy.grid, strategy.holdings * scale)


def discretize_strategy(fine, coarse_n):
    '''discretize_strategy samples a strategy on a coarser grid with a one
       period lag: the holding on [t_k, t_{k+1}) is the fine holding at
       t_{k-1}. The first and last coarse holdings are 0.

       Parameters
       ==========
       fine: Strategy on a grid of m steps
       coarse_n: number of coarse steps on the same horizon, must divide m
    '''
    grid = TimeGrid(coarse_n, fine.grid.T)
    check_horizon(fine.grid, grid)
    m, n = fine.grid.n, grid.n
    if m % n:
        raise ValidationError("coarse grid of %s steps is not nested in %s steps" % (n, m))

    holdings = fine.holdings[:1] * np.zeros(n + 1, dtype=int)
    for k in range(1, n):
        # fine index of time (k-1)T/n
        holdings[k] = fine.holdings[(k - 1) * (m // n)]
    return Strategy(grid, holdings)


def truncate_at_ruin(x, strategy, prices, kappa, eps=0.0):
    '''truncate_at_ruin liquidates a strategy at the first trading date
       where the wealth would fall below eps - x. Both the value of the old
       position at the new price and the value after the planned trade
       are checked, so the truncated wealth never goes below the running
       minimum of the original one.

       Parameters
       ==========
       x: initial capital
       strategy: the Strategy to truncate
       prices: S_0..S_n
       kappa: cost rate
       eps: wealth floor above -x, 0 by default
    '''
    if not x > 0:
        raise ValidationError("initial capital must be positive, got %s" % x)
    check_kappa(kappa)
    prices = _check_prices(prices, strategy.grid)
    tol = admissibility_tol(x)

    holdings = strategy.holdings.copy()
    position = 0 * holdings[0]
    cash = 0 * holdings[0]
    for k, price in enumerate(prices):
        before = position * price - kappa * abs(position) * price + cash
        target = holdings[k]
        trade = target - position
        after_cash = cash - price * trade - kappa * price * abs(trade)
        after = target * price - kappa * abs(target) * price + after_cash

        if x + before < eps - tol or x + after < eps - tol:
            holdings[k:] = 0
            break
        position, cash = target, after_cash

    return Strategy(strategy.grid, holdings)


def total_variation(strategy):
    return jordan_decompose(strategy.path)[2]


def traded_volume(prices, strategy):
    '''sum of S_k |gamma_k - gamma_{k-1}| over the trading dates'''
    prices = _check_prices(prices, strategy.grid)
    return np.sum(prices * np.abs(holding_changes(strategy.holdings)))
