'''

Copyright (C) 2019 The tclab Developers.

This Source Code Form is subject to the terms of the
Mozilla Public License, v. 2.0. If a copy of the MPL was not distributed
with this file, You can obtain one at http://mozilla.org/MPL/2.0/.

'''

from tclab.logger import bot
from tclab.version import SCHEMA_VERSION
from .config import parse_scenario, resolve, write_output


def main(args, parser, extra):
    '''gen-market writes one scenario of the market (all dates) or the
       terminal values of every scenario of the tree
    '''
    from tclab.market import build_market, enumerate_tree

    resolved = resolve(args)
    n, T, exact = resolved["n"], resolved["T"], resolved["exact"]

    if resolved["xi"] is not None:
        scenario = parse_scenario(resolved["xi"])
        market = build_market(n, T, scenario, exact=exact)
        bot.info("S_n = %.12g along %s" % (float(market.s_tilde[-1]), scenario))
        record = dict(market.to_dict(), schema_version=SCHEMA_VERSION)
        return write_output(args, resolved, frame=market.to_frame(), record=record)

    tree = enumerate_tree(n, T, exact=exact)
    return write_output(args, resolved, frame=tree.terminal_frame())
