#!/usr/bin/env python

'''

Copyright (C) 2019 The tclab Developers.

This Source Code Form is subject to the terms of the
Mozilla Public License, v. 2.0. If a copy of the MPL was not distributed
with this file, You can obtain one at http://mozilla.org/MPL/2.0/.

'''

import tclab
import argparse
import sys


class TCLabParser(argparse.ArgumentParser):
    '''argument errors are validation errors, exit code 1'''

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, "%s: error: %s\n" % (self.prog, message))


def add_output(parser, formats=("csv", "json")):
    parser.add_argument('--output', '-o', dest="output", type=str, default=None,
                        help="output file (default: TCLAB_OUTPUT_DIR/<command>.<format>)")

    parser.add_argument('--format', dest="format", choices=formats, default=None,
                        help="output format")

    parser.add_argument('--timings', dest="timings", default=None, action='store_true',
                        help="record runtimes (outputs are then not reproducible)")


def add_market(parser, n=True):
    if n:
        parser.add_argument('--n', dest="n", type=int, default=None,
                            help="number of trading periods")
    parser.add_argument('--T', dest="T", type=float, default=None,
                        help="horizon (default 1.0)")


def add_problem(parser):
    parser.add_argument('--kappa', dest="kappa", type=float, default=None,
                        help="proportional cost rate in [0, 1)")

    parser.add_argument('--x', dest="x", type=float, default=None,
                        help="initial capital")

    parser.add_argument('--utility', dest="utility", type=str, default=None,
                        help="shortfall:K=1.0, power:alpha=0.5 or log")


def add_grids(parser):
    parser.add_argument('--holding-step', dest="holding_step", type=float, default=None,
                        help="holding grid step (default 0.05)")

    parser.add_argument('--holding-bound', dest="holding_bound", type=float, default=None,
                        help="largest absolute holding (default x / (2 kappa min S))")

    parser.add_argument('--cost-step', dest="cost_step", type=float, default=None,
                        help="accumulated cost grid step (default 0.005)")

    parser.add_argument('--cost-span', dest="cost_span", type=float, default=None,
                        help="cost grid margin below 0 and above x (default 1.0)")


def add_seed(parser):
    parser.add_argument('--seed', dest="seed", type=int, default=None,
                        help="random seed, required for sampling")


def get_parser():
    parser = TCLabParser(description="transaction cost laboratory")

    # Global Variables
    parser.add_argument('--debug', dest="debug",
                        help="use verbose logging to debug.",
                        default=False, action='store_true')

    parser.add_argument('--quiet', dest="quiet",
                        help="suppress additional output.",
                        default=False, action='store_true')

    parser.add_argument('--version', dest="version",
                        help="show software version.",
                        default=False, action='store_true')

    parser.add_argument('--config', dest="config", type=str, default=None,
                        help="json file of parameters, or a manifest of an earlier run")

    parser.add_argument('--threads', dest="threads", type=int, default=None,
                        help="cap on worker processes (default TCLAB_WORKERS)")

    description = 'actions for the transaction cost laboratory'
    subparsers = parser.add_subparsers(help='tclab actions',
                                       title='actions',
                                       description=description,
                                       dest="command")

    # print version and exit
    version = subparsers.add_parser("version", # pylint: disable=unused-variable
                                    help="show software version")

    # Markets
    market = subparsers.add_parser("gen-market",
                                   help="build one scenario or the whole tree")
    add_market(market)
    market.add_argument('--xi', dest="xi", type=str, default=None,
                        help="one scenario as signs, e.g. +1,-1 (default: every scenario)")
    market.add_argument('--exact', dest="exact", default=None, action='store_true',
                        help="rational arithmetic")
    add_output(market)

    # Value functions
    solve = subparsers.add_parser("solve",
                                  help="compute u_n(x) by dynamic programming or brute force")
    add_market(solve)
    add_problem(solve)
    add_grids(solve)
    add_seed(solve)
    solve.add_argument('--solver', dest="solver", choices=["dp", "brute"], default=None,
                       help="dp (default) or brute")
    add_output(solve)

    converge = subparsers.add_parser("converge",
                                     help="u_n(x) over increasing n on fixed grids")
    add_market(converge, n=False)
    converge.add_argument('--n-list', dest="n_list", type=str, default=None,
                          help="comma separated n, e.g. 2,4,6,8")
    add_problem(converge)
    add_grids(converge)
    add_output(converge)

    # Price systems
    cps = subparsers.add_parser("check-cps",
                                help="margin of the shadow martingale and martingale defects")
    add_market(cps, n=False)
    cps.add_argument('--n-list', dest="n_list", type=str, default=None,
                     help="comma separated n, e.g. 4,16,64")
    cps.add_argument('--kappa', dest="kappa", type=float, default=None,
                     help="cost rate, the margin target is kappa / 2")
    cps.add_argument('--samples', dest="samples", type=int, default=None,
                     help="scenarios drawn beyond the enumeration cap")
    cps.add_argument('--x', dest="x", type=float, default=None,
                     help="initial capital of the dp policy whose traded volume is bounded")
    cps.add_argument('--utility', dest="utility", type=str, default=None,
                     help="utility of that policy (default shortfall:K=1.0)")
    cps.add_argument('--tv-max-n', dest="tv_max_n", type=int, default=None,
                     help="largest n solved for the traded volume bound (default 8)")
    add_seed(cps)
    add_output(cps)

    mz = subparsers.add_parser("mz-dist",
                               help="Meyer-Zheng distance of two step paths")
    add_market(mz, n=False)
    mz.add_argument('--f', dest="f", type=str, default=None,
                    help="comma separated values of the first path")
    mz.add_argument('--g', dest="g", type=str, default=None,
                    help="comma separated values of the second path")
    add_output(mz, formats=("json",))

    # Diagnostics
    predict = subparsers.add_parser("predict",
                                    help="prediction process of a cylinder function")
    add_market(predict)
    predict.add_argument('--psi', dest="psi", type=str, default=None,
                         help="name of a catalog function (default x1_terminal_clipped)")
    predict.add_argument('--exact', dest="exact", default=None, action='store_true',
                         help="rational arithmetic")
    add_output(predict)

    project = subparsers.add_parser("project",
                                    help="project a peeking strategy on the price filtration")
    add_market(project)
    add_problem(project)
    project.add_argument('--holding', dest="holding", type=float, default=None,
                         help="size of the peeking position")
    add_output(project, formats=("json",))

    arbitrage = subparsers.add_parser("arbitrage",
                                      help="lookahead strategy on the interpolated price")
    add_market(arbitrage)
    arbitrage.add_argument('--kappa', dest="kappa", type=float, default=None,
                           help="proportional cost rate in [0, 1)")
    arbitrage.add_argument('--xi', dest="xi", type=str, default=None,
                           help="one scenario as signs (default: sample --samples)")
    arbitrage.add_argument('--samples', dest="samples", type=int, default=None,
                           help="number of sampled scenarios")
    add_seed(arbitrage)
    add_output(arbitrage)

    limit = subparsers.add_parser("mc-limit",
                                  help="simulate the stochastic volatility limit")
    add_market(limit, n=False)
    limit.add_argument('--steps', dest="steps", type=int, default=None,
                       help="time steps per path (default 100)")
    limit.add_argument('--paths', dest="paths", type=int, default=None,
                       help="number of paths (default 10000)")
    limit.add_argument('--n-list', dest="n_list", type=str, default=None,
                       help="compare with the discrete market at these n")
    add_seed(limit)
    add_output(limit)

    return parser


def run(argv=None):
    '''run parses argv, runs one subcommand and returns its exit code:
       0 on success, 1 for rejected input, 2 for a resource limit
    '''
    from tclab.errors import ResourceLimitError, ValidationError
    from tclab.logger import bot
    from tclab.logger.message import DEBUG, QUIET

    parser = get_parser()
    argv = sys.argv[1:] if argv is None else list(argv)

    def help(return_code=0):
        '''print help, including the software version'''
        print("\ntransaction cost laboratory v%s" % tclab.__version__)
        parser.print_help()
        return return_code

    # If the user didn't provide any arguments, show the full help
    if not argv:
        return help()

    try:
        args, extra = parser.parse_known_args(argv)
    except SystemExit as error:
        return error.code

    if extra:
        parser.print_usage(sys.stderr)
        bot.error("unrecognized arguments: %s" % " ".join(extra))
        return 1

    # Show the version and exit
    if args.command == "version" or args.version:
        print(tclab.__version__)
        return 0

    if args.command == "gen-market": from .gen_market import main
    elif args.command == "solve": from .solve import main
    elif args.command == "converge": from .converge import main
    elif args.command == "check-cps": from .check_cps import main
    elif args.command == "mz-dist": from .mz_dist import main
    elif args.command == "predict": from .predict import main
    elif args.command == "project": from .project import main
    elif args.command == "arbitrage": from .arbitrage import main
    elif args.command == "mc-limit": from .mc_limit import main
    else:
        return help(1)

    level = bot.level
    if args.debug is True:
        bot.level = DEBUG
    elif args.quiet is True:
        bot.level = QUIET

    # Pass on to the correct parser
    try:
        main(args=args, parser=parser, extra=extra)
    except ResourceLimitError as error:
        bot.error(str(error))
        return 2
    except ValidationError as error:
        bot.error(str(error))
        return 1
    except OSError as error:
        bot.error("cannot write output: %s" % error)
        return 1
    finally:
        bot.level = level
    return 0


def main():
    sys.exit(run())


if __name__ == '__main__':
    main()
