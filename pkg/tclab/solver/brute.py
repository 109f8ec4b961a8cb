'''

Copyright (C) 2019 The tclab Developers.

This Source Code Form is subject to the terms of the
Mozilla Public License, v. 2.0. If a copy of the MPL was not distributed
with this file, You can obtain one at http://mozilla.org/MPL/2.0/.

'''

import math
import time

import numpy as np

from tclab.errors import ResourceLimitError
from tclab.logger import bot
from tclab.utility import evaluate
from tclab.wealth import admissibility_tol, wealth_paths

# assignments evaluated per numpy batch
CHUNK = 4096


def node_paths(n):
    '''for every scenario, the flat index of the node it passes at each
       level 0..n-1 (nodes of level k are numbered from 2^k - 1)
    '''
    scenarios = np.arange(2 ** n)
    return np.stack([(2 ** k - 1) + (scenarios >> (n - k)) for k in range(n)], axis=1)


def brute_force_value(self):
    '''brute_force_value enumerates every adapted assignment of grid
       holdings to the internal tree nodes, evaluates each one with exact
       cost accounting, drops the inadmissible ones and keeps the best.
       It is the oracle the dp is tested against.
    '''
    from tclab.defaults import TCLAB_BRUTE_FORCE_MAX
    from .config import ValueReport

    tree, config = self.tree, self.config
    n = tree.n
    if n > config.enumeration_cap:
        raise ResourceLimitError("brute force is capped at n=%s, got n=%s"
                                 % (config.enumeration_cap, n))

    started = time.time()
    prices, weights = tree.prices, tree.weights
    holdings = config.holding_grid(prices, self.x, self.kappa)
    nodes = 2 ** n - 1
    total = len(holdings) ** nodes
    if total > TCLAB_BRUTE_FORCE_MAX:
        raise ResourceLimitError("%s^%s = %s assignments exceed the cap of %s"
                                 % (len(holdings), nodes, total, TCLAB_BRUTE_FORCE_MAX))

    bot.debug("brute force n=%s over %s assignments" % (n, total))
    paths = node_paths(n)
    tol = admissibility_tol(self.x)
    shape = (len(holdings),) * nodes
    best_value, best_assignment = -math.inf, None

    for begin in range(0, total, CHUNK):
        index = np.arange(begin, min(begin + CHUNK, total))
        assignment = holdings[np.stack(np.unravel_index(index, shape), axis=1)]

        positions = assignment[:, paths]
        gamma = np.concatenate([positions, np.zeros(positions.shape[:2] + (1,))], axis=2)
        wealth = wealth_paths(prices[None], gamma, self.kappa)

        admissible = np.all(self.x + wealth >= -tol, axis=(1, 2))
        terminal = np.maximum(self.x + wealth[:, :, -1], 0.0)
        utilities = evaluate(self.utility, terminal, prices[None, :, -1])
        with np.errstate(invalid="ignore"):
            values = np.where(admissible, utilities @ weights, -np.inf)

        chosen = int(np.argmax(values))
        if values[chosen] > best_value:
            best_value, best_assignment = float(values[chosen]), assignment[chosen]

    report = ValueReport(n=n,
                         x=self.x,
                         kappa=self.kappa,
                         utility=str(self.utility),
                         value=best_value,
                         solver="brute",
                         grid={"holding_step": config.holding_step,
                               "holding_bound": float(holdings[-1]),
                               "holdings": int(len(holdings))},
                         states_visited=total,
                         no_trade_value=self.no_trade_value())

    positions = best_assignment[paths]
    self._attach_policy(report, np.hstack([positions, np.zeros((len(positions), 1))]))
    report.runtime_ms = (time.time() - started) * 1000.0
    return report
