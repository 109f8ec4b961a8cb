'''

Copyright (C) 2019 The tclab Developers.

This Source Code Form is subject to the terms of the
Mozilla Public License, v. 2.0. If a copy of the MPL was not distributed
with this file, You can obtain one at http://mozilla.org/MPL/2.0/.

'''

from .config import parse_list, resolve, write_output


def main(args, parser, extra):
    '''converge writes u_n(x) for every n of --n-list with the successive
       differences, on one fixed grid
    '''
    from tclab.solver import SolverConfig, convergence_table

    resolved = resolve(args)
    config = SolverConfig(holding_step=resolved["holding_step"],
                          holding_bound=resolved["holding_bound"],
                          cost_step=resolved["cost_step"],
                          cost_span=resolved["cost_span"],
                          workers=args.threads)

    frame, _ = convergence_table(parse_list(resolved["n_list"]),
                                 resolved["utility"],
                                 resolved["x"],
                                 resolved["kappa"],
                                 config=config,
                                 T=resolved["T"],
                                 timings=resolved["timings"])
    return write_output(args, resolved, frame=frame)
