'''

Copyright (C) 2019 The tclab Developers.

This Source Code Form is subject to the terms of the
Mozilla Public License, v. 2.0. If a copy of the MPL was not distributed
with this file, You can obtain one at http://mozilla.org/MPL/2.0/.

'''

from tclab.logger import bot
from .config import resolve, write_output


def main(args, parser, extra):
    '''solve computes u_n(x) on the full tree and writes the ValueReport
       (json) or the policy along every scenario (csv)
    '''
    from tclab.market import enumerate_tree
    from tclab.solver import Solver, SolverConfig

    resolved = resolve(args)
    tree = enumerate_tree(resolved["n"], resolved["T"])
    config = SolverConfig(holding_step=resolved["holding_step"],
                          holding_bound=resolved["holding_bound"],
                          cost_step=resolved["cost_step"],
                          cost_span=resolved["cost_span"],
                          workers=args.threads)

    solver = Solver(tree, resolved["utility"], resolved["x"], resolved["kappa"], config)
    bot.debug("Running %s with the %s solver" % (solver, resolved["solver"]))
    if resolved["solver"] == "brute":
        report = solver.brute_force_value()
    else:
        report = solver.dp_value()

    if not resolved["timings"]:
        report.runtime_ms = None
    bot.info("u_%s(%s) = %.12g" % (report.n, report.x, report.value))

    if resolved["format"] == "json":
        return write_output(args, resolved, record=report.to_dict())
    return write_output(args, resolved, frame=report.policy_frame())
