'''

Copyright (C) 2019 The tclab Developers.

This Source Code Form is subject to the terms of the
Mozilla Public License, v. 2.0. If a copy of the MPL was not distributed
with this file, You can obtain one at http://mozilla.org/MPL/2.0/.

'''

import numpy as np

from tclab.errors import ValidationError
from tclab.logger import bot
from tclab.utility import evaluate, expectation, parse_utility
from tclab.wealth import Strategy, check_kappa

from .config import SolverConfig, ValueReport
from .brute import brute_force_value as _brute_force_value
from .dp import dp_value as _dp_value, policy_value
from .replication import frictionless_replication_price
from .convergence import convergence_table, decreasing_tail
from .arbitrage import lookahead_arbitrage, lookahead_prices, lookahead_profit


class Solver(object):
    '''one utility maximization problem: a scenario tree, a utility, the
       initial capital x and the cost rate kappa, quantized by a SolverConfig
    '''

    def __init__(self, tree, utility, x, kappa, config=None):
        check_kappa(kappa)
        if not x > 0:
            raise ValidationError("initial capital must be positive, got %s" % x)
        self.tree = tree
        self.utility = parse_utility(utility)
        self.x = float(x)
        self.kappa = float(kappa)
        self.config = config or SolverConfig()

    def __str__(self):
        return "solver[n=%s,x=%s,kappa=%s,%s]" % (self.tree.n, self.x, self.kappa, self.utility)

    def __repr__(self):
        return self.__str__()

    def no_trade_value(self):
        '''E[U(x, S)], the value of never trading'''
        prices = self.tree.prices
        values = evaluate(self.utility, np.full(len(prices), self.x), prices[:, -1])
        return expectation(values, self.tree.weights)

    def _attach_policy(self, report, paths):
        '''store the per scenario strategies and their exact value'''
        prices, weights = self.tree.prices, self.tree.weights
        report.prices = prices
        report.policy = [Strategy(self.tree.grid, row) for row in paths]
        report.policy_value = policy_value(self.utility, self.x, self.kappa,
                                           prices, weights, paths)
        if report.policy_value == -np.inf:
            bot.warning("the %s policy is not admissible under exact costs" % report.solver)


Solver.brute_force_value = _brute_force_value
Solver.dp_value = _dp_value


def brute_force_value(tree, utility, x, kappa, config=None):
    return Solver(tree, utility, x, kappa, config).brute_force_value()


def dp_value(tree, utility, x, kappa, config=None):
    return Solver(tree, utility, x, kappa, config).dp_value()
