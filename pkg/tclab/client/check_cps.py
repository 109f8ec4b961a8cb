'''

Copyright (C) 2019 The tclab Developers.

This Source Code Form is subject to the terms of the
Mozilla Public License, v. 2.0. If a copy of the MPL was not distributed
with this file, You can obtain one at http://mozilla.org/MPL/2.0/.

'''

import numpy as np

from .config import parse_list, resolve, write_output


def main(args, parser, extra):
    '''check-cps writes the margin trend of the shadow martingale over
       --n-list, the traded volume of the dp policy against x / eps for
       n up to --tv-max-n, and the martingale defect of every enumerable tree
    '''
    from tclab.cps import margin_table, verify_martingale
    from tclab.defaults import TCLAB_ENUMERATION_CAP
    from tclab.market import enumerate_tree

    resolved = resolve(args)
    n_list = parse_list(resolved["n_list"])
    frame = margin_table(n_list,
                         resolved["kappa"],
                         samples=resolved["samples"],
                         seed=resolved["seed"],
                         T=resolved["T"],
                         workers=args.threads,
                         x=resolved["x"],
                         utility=resolved["utility"],
                         tv_max_n=resolved["tv_max_n"])

    defects = []
    for n in n_list:
        if n <= TCLAB_ENUMERATION_CAP:
            defects.append(verify_martingale(enumerate_tree(n, resolved["T"]))[1])
        else:
            defects.append(np.nan)
    frame["martingale_defect"] = defects
    return write_output(args, resolved, frame=frame)
