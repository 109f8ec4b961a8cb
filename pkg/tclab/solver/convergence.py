'''

Copyright (C) 2019 The tclab Developers.

This Source Code Form is subject to the terms of the
Mozilla Public License, v. 2.0. If a copy of the MPL was not distributed
with this file, You can obtain one at http://mozilla.org/MPL/2.0/.

'''

import numpy as np

from tclab.errors import ResourceLimitError, ValidationError
from tclab.logger import bot

COLUMNS = ["n", "kappa", "x", "value", "diff_prev", "runtime_ms", "states_visited"]


def convergence_table(n_list, utility, x, kappa, config=None, T=1.0, timings=False):
    '''convergence_table solves u_n(x) for every n in n_list on one fixed
       physical grid, so the values are comparable across n.

       Parameters
       ==========
       n_list: increasing numbers of steps
       utility: a UtilitySpec or its string form
       x: initial capital
       kappa: cost rate
       config: the SolverConfig, its holding bound is resolved once on the
               largest tree and then kept
       timings: fill the runtime_ms column (left empty otherwise, so the
                table is reproducible byte for byte)

       Returns
       =======
       (frame, reports) with the columns
       (n, kappa, x, value, diff_prev, runtime_ms, states_visited)
    '''
    import pandas
    from tclab.market import enumerate_tree
    from tclab.solver import Solver, SolverConfig

    n_list = [int(n) for n in n_list]
    if not n_list:
        raise ValidationError("need at least one n")
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ValidationError("n_list must be strictly increasing, got %s" % n_list)

    config = config or SolverConfig()
    if n_list[-1] > config.max_n:
        raise ResourceLimitError("dp is capped at n=%s, got n=%s" % (config.max_n, n_list[-1]))

    trees = {}
    if config.holding_bound is None:
        trees[n_list[-1]] = enumerate_tree(n_list[-1], T)
        bound = config.resolve_bound(trees[n_list[-1]].prices, x, kappa)
        config = config.replace(holding_bound=bound)
    config = config.replace(keep_policy=False)

    rows, reports, previous = [], [], None
    for n in n_list:
        tree = trees.pop(n, None) or enumerate_tree(n, T)
        report = Solver(tree, utility, x, kappa, config).dp_value()
        bot.info("n=%s u_n(x)=%.10g" % (n, report.value))

        diff = np.nan if previous is None else abs(report.value - previous)
        rows.append({"n": n,
                     "kappa": kappa,
                     "x": x,
                     "value": report.value,
                     "diff_prev": diff,
                     "runtime_ms": report.runtime_ms if timings else np.nan,
                     "states_visited": report.states_visited})
        reports.append(report)
        previous = report.value

    return pandas.DataFrame(rows, columns=COLUMNS), reports


def decreasing_tail(frame, count=3):
    '''true if the last count successive differences are nonincreasing'''
    diffs = frame["diff_prev"].dropna().values[-count:]
    return bool(len(diffs) == count and np.all(np.diff(diffs) <= 0))
