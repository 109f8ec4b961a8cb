'''

Copyright (C) 2019 The tclab Developers.

This Source Code Form is subject to the terms of the
Mozilla Public License, v. 2.0. If a copy of the MPL was not distributed
with this file, You can obtain one at http://mozilla.org/MPL/2.0/.

'''

import numpy as np

from tclab.version import SCHEMA_VERSION
from .config import parse_list, resolve, write_output


def main(args, parser, extra):
    '''mc-limit simulates the limit model and writes the terminal values
       of every path, or with --n-list the law distances to the discrete
       market at each n
    '''
    import pandas
    from tclab.diagnostics import law_trend
    from tclab.market import LimitModelParams, simulate_limit

    resolved = resolve(args)
    if resolved["n_list"] is not None:
        frame = law_trend(parse_list(resolved["n_list"]),
                          T=resolved["T"],
                          samples=resolved["paths"],
                          seed=resolved["seed"],
                          steps=resolved["steps"],
                          workers=args.threads)
        return write_output(args, resolved, frame=frame)

    params = LimitModelParams(T=resolved["T"], steps=resolved["steps"], seed=resolved["seed"])
    sample = simulate_limit(params, resolved["paths"], workers=args.threads)
    frame = pandas.DataFrame({"path_id": np.arange(sample.size),
                              "nu_T": sample.nu[:, -1],
                              "s_T": sample.s[:, -1]},
                             columns=["path_id", "nu_T", "s_T"])
    record = {"schema_version": SCHEMA_VERSION,
              "paths": int(sample.size),
              "mean_s_T": float(sample.s[:, -1].mean()),
              "mean_nu_T": float(sample.nu[:, -1].mean())}
    return write_output(args, resolved, frame=frame, record=record)
