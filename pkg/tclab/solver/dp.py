'''

Copyright (C) 2019 The tclab Developers.

This Source Code Form is subject to the terms of the
Mozilla Public License, v. 2.0. If a copy of the MPL was not distributed
with this file, You can obtain one at http://mozilla.org/MPL/2.0/.

'''

from dataclasses import dataclass
import math
import time

import numpy as np

from tclab.errors import ResourceLimitError
from tclab.logger import bot
from tclab.utility import UtilitySpec, evaluate, expectation
from tclab.wealth import admissibility_tol, wealth_paths


@dataclass(frozen=True, eq=False)
class Lattice:
    '''the quantized state space shared by every node of one solve'''

    holdings: np.ndarray
    order: np.ndarray
    costs: np.ndarray
    step: float
    x: float
    kappa: float
    utility: UtilitySpec
    tol: float
    keep_policy: bool

    @property
    def size(self):
        return len(self.holdings)

    @property
    def levels(self):
        return len(self.costs)

    @property
    def zero(self):
        return len(self.holdings) // 2

    @property
    def dtype(self):
        return np.uint8 if len(self.holdings) <= 255 else np.int16

    def last_affordable(self, limit):
        '''index of the largest cost level not above limit, -1 if none'''
        return np.searchsorted(self.costs, np.asarray(limit) + self.tol, side="right") - 1


def cost_shift(price, change, kappa, step):
    '''cost of a trade in whole cost levels, rounded up'''
    return np.ceil((price * change + kappa * price * np.abs(change)) / step).astype(np.int64)


################################################################################
# Node updates
################################################################################


def leaf_values(lattice, price):
    '''values at maturity: the position is closed, wealth is x - C'''
    shift = cost_shift(price, -lattice.holdings, lattice.kappa, lattice.step)
    index = np.maximum(np.arange(lattice.levels)[None, :] + shift[:, None], 0)
    affordable = index <= lattice.last_affordable(lattice.x)
    index = np.minimum(index, lattice.levels - 1)

    wealth = np.maximum(lattice.x - lattice.costs[index], 0.0)
    values = evaluate(lattice.utility, wealth, price)
    return np.where(affordable, values, -np.inf)


def node_values(lattice, expected, price, rows):
    '''node_values chooses the next holding for every (previous holding,
       cost) state of one node.

       Parameters
       ==========
       lattice: the Lattice of this solve
       expected: (H, L) conditional expectation of the child values
       price: the price at this node
       rows: indices of the previous holdings to solve for

       Returns
       =======
       (values, choices), both (len(rows), L)
    '''
    holdings = lattice.holdings
    change = holdings[None, :] - holdings[rows][:, None]
    shift = cost_shift(price, change, lattice.kappa, lattice.step)
    index = np.maximum(np.arange(lattice.levels)[None, None, :] + shift[:, :, None], 0)

    # x + V_k >= 0 with V_k = h S - kappa |h| S - C
    limit = lattice.x + holdings * price - lattice.kappa * np.abs(holdings) * price
    affordable = index <= lattice.last_affordable(limit)[None, :, None]
    index = np.minimum(index, lattice.levels - 1)

    candidates = expected[np.arange(lattice.size)[None, :, None], index]
    candidates = np.where(affordable, candidates, -np.inf)[:, lattice.order, :]

    best = np.argmax(candidates, axis=1)
    values = np.take_along_axis(candidates, best[:, None, :], axis=1)[:, 0, :]
    return values, lattice.order[best].astype(lattice.dtype)


################################################################################
# Backward induction
################################################################################


def solve_subtree(lattice, prices, weights, level, node, n, solved=None):
    '''solve_subtree runs the backward induction below one node, depth
       first, so only one value table per level is alive at a time.

       Parameters
       ==========
       lattice: the Lattice of this solve
       prices: price rows of the scenarios below the node
       weights: their probabilities
       level, node: position of the subtree root
       n: depth of the tree
       solved: {node: values} already computed at one level (from workers)

       Returns
       =======
       (values, decisions, visited) with decisions keyed by (level, node)
    '''
    decisions = {}
    visited = [0]

    def descend(prices, weights, level, node):
        if solved is not None and (level, node) in solved:
            return solved[(level, node)]

        price = prices[0, level]
        if level == n:
            values = leaf_values(lattice, price)
            visited[0] += int(np.isfinite(values).sum())
            return values

        half = len(prices) // 2
        down = descend(prices[:half], weights[:half], level + 1, 2 * node)
        up = descend(prices[half:], weights[half:], level + 1, 2 * node + 1)
        w_down, w_up = weights[:half].sum(), weights[half:].sum()
        expected = (w_down * down + w_up * up) / (w_down + w_up)

        rows = np.array([lattice.zero]) if level == 0 else np.arange(lattice.size)
        values, choices = node_values(lattice, expected, price, rows)
        if lattice.keep_policy:
            decisions[(level, node)] = choices
        visited[0] += int(np.isfinite(values).sum())
        return values

    values = descend(prices, weights, level, node)
    return values, decisions, visited[0]


def split_level(workers, n):
    '''the shallowest level with at least one subtree per worker'''
    if workers <= 1:
        return None
    return min(n, int(math.ceil(math.log2(workers))))


def extract_policy(lattice, decisions, prices, n, start):
    '''follow the stored decisions forward from (holding 0, cost 0) along
       every scenario and return the (scenarios, n+1) holdings
    '''
    holdings = lattice.holdings
    paths = np.zeros((len(prices), n + 1))
    for scenario, row in enumerate(prices):
        previous, level = lattice.zero, start
        for k in range(n):
            table = decisions[(k, scenario >> (n - k))]
            choice = int(table[0 if k == 0 else previous, level])
            shift = cost_shift(row[k], holdings[choice] - holdings[previous],
                               lattice.kappa, lattice.step)
            level = min(max(level + int(shift), 0), lattice.levels - 1)
            previous = choice
            paths[scenario, k] = holdings[choice]
    return paths


################################################################################
# Solver entry
################################################################################


def dp_value(self):
    '''dp_value computes u_n(x) by backward induction over the states
       (level, node, holding, accumulated cost). Trade costs are rounded up
       to the cost grid, so the result is a lower bound on the optimum over
       the holding grid. Any state breaking x + V_k >= 0 is pruned.
    '''
    from tclab.workers import Workers
    from .config import ValueReport

    tree, config = self.tree, self.config
    n = tree.n
    if n > config.max_n:
        raise ResourceLimitError("dp is capped at n=%s, got n=%s" % (config.max_n, n))

    started = time.time()
    prices, weights = tree.prices, tree.weights
    holdings = config.holding_grid(prices, self.x, self.kappa)
    cost_min, levels, start = config.cost_grid(self.x)

    lattice = Lattice(holdings=holdings,
                      order=np.lexsort((holdings, np.abs(holdings))),
                      costs=cost_min + config.cost_step * np.arange(levels),
                      step=config.cost_step,
                      x=self.x,
                      kappa=self.kappa,
                      utility=self.utility,
                      tol=admissibility_tol(self.x),
                      keep_policy=config.keep_policy)

    bot.debug("dp n=%s: %s holdings x %s cost levels" % (n, lattice.size, lattice.levels))

    workers = Workers(config.workers)
    split = split_level(workers.workers, n)
    solved, decisions, visited = None, {}, 0

    if split is not None and split > 0:
        block = 2 ** (n - split)
        tasks = [(lattice, prices[node * block:(node + 1) * block],
                  weights[node * block:(node + 1) * block], split, node, n)
                 for node in range(2 ** split)]
        solved = {}
        for node, (values, found, count) in enumerate(workers.run(solve_subtree, tasks)):
            solved[(split, node)] = values
            decisions.update(found)
            visited += count

    values, found, count = solve_subtree(lattice, prices, weights, 0, 0, n, solved)
    decisions.update(found)
    visited += count

    no_trade = self.no_trade_value()
    value, fallback = float(values[0, start]), False
    if value == -math.inf:
        bot.warning("no admissible plan fits the cost grid, reporting the no-trade value")
        value, fallback = no_trade, True

    report = ValueReport(n=n,
                         x=self.x,
                         kappa=self.kappa,
                         utility=str(self.utility),
                         value=value,
                         solver="dp",
                         grid={"holding_step": config.holding_step,
                               "holding_bound": float(holdings[-1]),
                               "holdings": int(lattice.size),
                               "cost_step": config.cost_step,
                               "cost_min": float(cost_min),
                               "cost_max": float(lattice.costs[-1]),
                               "cost_levels": int(levels)},
                         lower_bound=True,
                         fallback=fallback,
                         states_visited=visited,
                         no_trade_value=no_trade)

    if config.keep_policy:
        if fallback:
            paths = np.zeros_like(prices)
        else:
            paths = extract_policy(lattice, decisions, prices, n, start)
        self._attach_policy(report, paths)

    report.runtime_ms = (time.time() - started) * 1000.0
    return report


def policy_value(utility, x, kappa, prices, weights, paths):
    '''exact expected utility of holdings paths, -inf if any path is not
       admissible
    '''
    wealth = wealth_paths(prices, paths, kappa)
    if np.any(x + wealth < -admissibility_tol(x)):
        return -math.inf
    terminal = np.maximum(x + wealth[:, -1], 0.0)
    return expectation(evaluate(utility, terminal, prices[:, -1]), weights)
