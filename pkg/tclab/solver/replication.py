'''

Copyright (C) 2019 The tclab Developers.

This Source Code Form is subject to the terms of the
Mozilla Public License, v. 2.0. If a copy of the MPL was not distributed
with this file, You can obtain one at http://mozilla.org/MPL/2.0/.

'''

import numpy as np

from tclab.errors import IncompleteMarketError, ValidationError
from tclab.logger import bot


def terminal_payoff(tree, payoff):
    '''payoff per scenario from a callable of the terminal prices or from
       a vector with one entry per scenario
    '''
    if callable(payoff):
        values = payoff(tree.s_tilde[:, -1])
    else:
        values = payoff
    values = np.asarray(values)
    if values.dtype != object:
        values = values.astype(float)
    if values.shape != (tree.size,):
        raise ValidationError("need one payoff per scenario (%s), got shape %s"
                              % (tree.size, values.shape))
    return values


def frictionless_replication_price(tree, payoff):
    '''frictionless_replication_price solves the two-state replication
       problem at every node, from the leaves back to the root.

       Parameters
       ==========
       tree: the ScenarioTree (exact trees give exact prices)
       payoff: callable of the terminal prices, or one value per scenario

       Returns
       =======
       (price, hedges) where hedges[k] holds the stock position at every
       node of level k
    '''
    n = tree.n
    value = terminal_payoff(tree, payoff)
    hedges = [None] * n

    for level in range(n - 1, -1, -1):
        children = tree.node_values(tree.s_tilde, level + 1)
        s_down, s_up = children[0::2], children[1::2]
        v_down, v_up = value[0::2], value[1::2]

        spread = s_up - s_down
        if np.any(spread == 0):
            node = int(np.flatnonzero(spread == 0)[0])
            raise IncompleteMarketError("node %s at level %s has equal successor prices"
                                        % (node, level))

        delta = (v_up - v_down) / spread
        price = tree.node_values(tree.s_tilde, level)
        value = v_up + delta * (price - s_up)
        hedges[level] = delta

    price = value[0]
    expected = np.sum(terminal_payoff(tree, payoff) * tree.probabilities)
    gap = abs(float(price) - float(expected))
    if gap > 1e-12 * max(1.0, abs(float(expected))):
        bot.warning("replication price %s differs from the expected payoff %s"
                    % (float(price), float(expected)))
    return price, hedges
