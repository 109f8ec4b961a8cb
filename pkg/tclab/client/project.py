'''

Copyright (C) 2019 The tclab Developers.

This Source Code Form is subject to the terms of the
Mozilla Public License, v. 2.0. If a copy of the MPL was not distributed
with this file, You can obtain one at http://mozilla.org/MPL/2.0/.

'''

from tclab.logger import bot
from tclab.version import SCHEMA_VERSION
from .config import resolve, write_output


def main(args, parser, extra):
    '''project takes the tree of n periods, prepends a coin the price
       ignores, lets a strategy peek at the coin and projects it on the
       price filtration. Writes both expected utilities.
    '''
    from tclab.diagnostics import (
        coin_tree,
        compare_projection,
        peeking_strategy,
        price_filtration,
        project_strategy
    )
    from tclab.market import enumerate_tree

    resolved = resolve(args)
    tree = coin_tree(enumerate_tree(resolved["n"], resolved["T"]))
    fine = peeking_strategy(tree, resolved["holding"])
    projected = project_strategy(tree, fine, price_filtration(tree))
    report = compare_projection(tree, fine, projected, resolved["utility"],
                                resolved["x"], resolved["kappa"])

    bot.info("fine %.12g, projected %.12g" % (report.fine_utility, report.projected_utility))
    record = dict(report.to_dict(), schema_version=SCHEMA_VERSION, n=tree.n)
    return write_output(args, resolved, record=record)
