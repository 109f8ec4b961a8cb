'''

Copyright (C) 2019 The tclab Developers.

This Source Code Form is subject to the terms of the
Mozilla Public License, v. 2.0. If a copy of the MPL was not distributed
with this file, You can obtain one at http://mozilla.org/MPL/2.0/.

'''

import numpy as np

from tclab.paths import TimeGrid
from tclab.wealth import Strategy, check_kappa, wealth_process


def lookahead_prices(market):
    '''prices on the doubled grid: every period k = 1..n gets an opening
       date priced S_{k-1} and a closing date priced S_k
    '''
    s_tilde = np.asarray(market.s_tilde)
    prices = np.repeat(s_tilde, 2)[1:]
    return prices


def lookahead_arbitrage(market, kappa):
    '''lookahead_arbitrage trades on the predictability of the interpolated
       price: right after t_k the end point S_k of the next linear piece is
       known, so the strategy buys sign(S_k - S_{k-1}) at the opening price
       and closes the position at the end of the period.

       Parameters
       ==========
       market: a DiscreteMarket
       kappa: cost rate

       Returns
       =======
       (strategy, trace) on the doubled grid of 2n steps
    '''
    check_kappa(kappa)
    n = market.n
    prices = lookahead_prices(market)
    moves = np.asarray(market.s_tilde)[1:] - np.asarray(market.s_tilde)[:-1]

    holdings = prices * 0
    for k in range(n):
        holdings[2 * k] = int(moves[k] > 0) - int(moves[k] < 0)

    grid = TimeGrid(2 * n, market.T)
    strategy = Strategy(grid, holdings)
    return strategy, wealth_process(prices, strategy, kappa)


def lookahead_profit(s_tilde, kappa):
    '''terminal wealth of the lookahead strategy for many scenarios at once:
       sum_k |dS_k| - kappa (S_{k-1} + S_k) over the periods with a move
    '''
    check_kappa(kappa)
    s_tilde = np.asarray(s_tilde, dtype=float)
    moves = np.diff(s_tilde, axis=1)
    traded = moves != 0
    fees = kappa * (s_tilde[:, :-1] + s_tilde[:, 1:]) * traded
    return np.sum(np.abs(moves) - fees, axis=1)
