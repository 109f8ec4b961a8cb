'''

Copyright (C) 2019 The tclab Developers.

This Source Code Form is subject to the terms of the
Mozilla Public License, v. 2.0. If a copy of the MPL was not distributed
with this file, You can obtain one at http://mozilla.org/MPL/2.0/.

'''

from tclab.errors import ValidationError
from tclab.logger import bot
from .config import resolve, write_output


def main(args, parser, extra):
    '''predict writes the prediction process of one catalog function, one
       row per node: (t, node_id, Y_value)
    '''
    from tclab.cps import verify_martingale
    from tclab.diagnostics import catalog, prediction_process
    from tclab.market import enumerate_tree

    resolved = resolve(args)
    tree = enumerate_tree(resolved["n"], resolved["T"], exact=resolved["exact"])

    functions = {psi.name: psi for psi in catalog(tree.n)}
    if resolved["psi"] not in functions:
        raise ValidationError("unknown psi %s, choose from %s"
                              % (resolved["psi"], ", ".join(sorted(functions))))

    process = prediction_process(tree, functions[resolved["psi"]])
    ok, defect = verify_martingale(tree, process.values)
    bot.info("Y_0 = %s, martingale defect %.3g" % (process.initial, defect))
    if not ok:
        bot.warning("the prediction process is not a martingale (defect %.3g)" % defect)
    return write_output(args, resolved, frame=process.to_frame())
