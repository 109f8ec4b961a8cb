'''

Copyright (C) 2019 The tclab Developers.

This Source Code Form is subject to the terms of the
Mozilla Public License, v. 2.0. If a copy of the MPL was not distributed
with this file, You can obtain one at http://mozilla.org/MPL/2.0/.

'''

import numpy as np

from tclab.errors import ValidationError
from tclab.logger import bot
from tclab.version import SCHEMA_VERSION
from .config import parse_scenario, resolve, write_output


def main(args, parser, extra):
    '''arbitrage runs the lookahead strategy along one scenario (--xi) or
       over sampled scenarios (--samples with --seed)
    '''
    import pandas
    from tclab.market import build_market, sample_markets
    from tclab.solver import lookahead_arbitrage, lookahead_profit

    resolved = resolve(args)
    n, T, kappa = resolved["n"], resolved["T"], resolved["kappa"]

    if resolved["xi"] is not None:
        scenario = parse_scenario(resolved["xi"])
        _, trace = lookahead_arbitrage(build_market(n, T, scenario), kappa)
        bot.info("V_T = %.12g" % float(trace.terminal_wealth))
        record = {"schema_version": SCHEMA_VERSION,
                  "n": n,
                  "kappa": kappa,
                  "xi": list(scenario.signs),
                  "V_T": float(trace.terminal_wealth)}
        return write_output(args, resolved, frame=trace.to_frame(), record=record)

    if resolved["samples"] is None:
        raise ValidationError("arbitrage needs --xi or --samples")
    sample = sample_markets(n, T, resolved["samples"], resolved["seed"], workers=args.threads)
    profits = lookahead_profit(sample.s_tilde, kappa)
    bot.info("mean V_T = %.12g over %s scenarios" % (profits.mean(), len(profits)))

    record = {"schema_version": SCHEMA_VERSION,
              "n": n,
              "kappa": kappa,
              "samples": int(len(profits)),
              "mean": float(profits.mean()),
              "min": float(profits.min()),
              "max": float(profits.max())}
    frame = pandas.DataFrame({"scenario_id": np.arange(len(profits)), "V_T": profits},
                             columns=["scenario_id", "V_T"])
    return write_output(args, resolved, frame=frame, record=record)
