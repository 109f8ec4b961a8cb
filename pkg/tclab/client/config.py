'''

Copyright (C) 2019 The tclab Developers.

This Source Code Form is subject to the terms of the
Mozilla Public License, v. 2.0. If a copy of the MPL was not distributed
with this file, You can obtain one at http://mozilla.org/MPL/2.0/.

'''

import os

from tclab.errors import ValidationError
from tclab.logger import bot
from tclab.version import SCHEMA_VERSION, __version__

GRIDS = {"holding_step": 0.05,
         "holding_bound": None,
         "cost_step": 0.005,
         "cost_span": 1.0}

# Built-in defaults per command, the lowest level of precedence
DEFAULTS = {
    "gen-market": {"n": None, "T": 1.0, "xi": None, "exact": False},
    "solve": dict(GRIDS, n=None, T=1.0, kappa=None, x=None,
                  utility="shortfall:K=1.0", solver="dp", seed=None),
    "converge": dict(GRIDS, n_list=None, T=1.0, kappa=None, x=None,
                     utility="shortfall:K=1.0"),
    "check-cps": {"n_list": None, "T": 1.0, "kappa": 0.1, "samples": 1000, "seed": None,
                  "x": 0.1, "utility": "shortfall:K=1.0", "tv_max_n": 8},
    "mz-dist": {"f": None, "g": None, "T": 1.0},
    "predict": {"n": None, "T": 1.0, "psi": "x1_terminal_clipped", "exact": False},
    "project": {"n": None, "T": 1.0, "kappa": 0.05, "x": 0.5,
                "utility": "shortfall:K=1.0", "holding": 0.1},
    "arbitrage": {"n": None, "T": 1.0, "kappa": 0.0, "xi": None,
                  "samples": None, "seed": None},
    "mc-limit": {"T": 1.0, "steps": 100, "paths": 10000, "n_list": None, "seed": None},
}

REQUIRED = {
    "gen-market": ("n",),
    "solve": ("n", "kappa", "x"),
    "converge": ("n_list", "kappa", "x"),
    "check-cps": ("n_list",),
    "mz-dist": ("f", "g"),
    "predict": ("n",),
    "project": ("n",),
    "arbitrage": ("n",),
    "mc-limit": ("seed",),
}

FORMATS = {"mz-dist": "json", "project": "json", "solve": "json"}


def load_config(filename, command):
    '''read a flat parameter file or the manifest of an earlier run'''
    from tclab.utils import read_json

    if filename is None:
        return {}
    try:
        data = read_json(filename)
    except (OSError, ValueError) as error:
        raise ValidationError("cannot read config %s: %s" % (filename, error))

    if not isinstance(data, dict):
        raise ValidationError("config %s must be a json object" % filename)
    if "config" in data and "command" in data:
        if data["command"] != command:
            raise ValidationError("config %s was written by %s, not %s"
                                  % (filename, data["command"], command))
        data = data["config"]
    return dict(data)


def resolve(args):
    '''resolve merges flags over the config file over the defaults'''
    command = args.command
    defaults = dict(DEFAULTS[command], format=FORMATS.get(command, "csv"), timings=False)
    loaded = load_config(args.config, command)

    unknown = sorted(set(loaded) - set(defaults))
    if unknown:
        raise ValidationError("unknown %s parameters: %s" % (command, ", ".join(unknown)))

    resolved = {}
    for key, default in defaults.items():
        value = getattr(args, key, None)
        if value is None:
            value = loaded.get(key, default)
        resolved[key] = value

    missing = [key for key in REQUIRED[command] if resolved[key] is None]
    if missing:
        raise ValidationError("%s needs %s" % (command, ", ".join("--%s" % m.replace("_", "-")
                                                                  for m in missing)))
    bot.debug("resolved %s config: %s" % (command, resolved))
    return resolved


def parse_list(value, kind=int):
    '''a list from "2,4,6" or from a json list'''
    if value is None:
        return None
    if isinstance(value, str):
        value = [v for v in value.split(",") if v.strip()]
    try:
        return [kind(v) for v in value]
    except (TypeError, ValueError):
        raise ValidationError("cannot parse list %s" % value)


def output_path(args, resolved):
    if args.output is not None:
        return args.output
    from tclab.defaults import TCLAB_OUTPUT_DIR
    return os.path.join(TCLAB_OUTPUT_DIR, "%s.%s" % (args.command, resolved["format"]))


def write_manifest(args, resolved, filename):
    '''<output>.manifest.json echoes the resolved config and the version'''
    from tclab.utils import write_json
    manifest = {"schema_version": SCHEMA_VERSION,
                "tclab_version": __version__,
                "command": args.command,
                "config": resolved}
    return write_json(manifest, "%s.manifest.json" % filename)


def write_output(args, resolved, frame=None, record=None):
    '''write the primary artifact (a frame as csv, a record as json) and
       its manifest, and return the artifact path
    '''
    from tclab.utils import show_json, write_csv, write_json

    filename = output_path(args, resolved)
    if resolved["format"] == "json":
        if record is None:
            import json
            rows = json.loads(frame.to_json(orient="records", double_precision=15))
            record = {"schema_version": SCHEMA_VERSION, "rows": rows}
        write_json(record, filename)
        show_json(record)
    else:
        if frame is None:
            raise ValidationError("%s has no csv output" % args.command)
        write_csv(frame, filename)
        if not bot.is_quiet():
            bot.table(frame)

    write_manifest(args, resolved, filename)
    bot.verbose("Wrote %s" % filename)
    return filename


def parse_scenario(value):
    '''a Scenario from "+1,-1" or from a json list of signs'''
    from tclab.market import Scenario
    if isinstance(value, str):
        return Scenario.parse(value)
    return Scenario(tuple(value))
