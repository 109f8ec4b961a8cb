'''

Copyright (C) 2019 The tclab Developers.

This Source Code Form is subject to the terms of the
Mozilla Public License, v. 2.0. If a copy of the MPL was not distributed
with this file, You can obtain one at http://mozilla.org/MPL/2.0/.

'''

from tclab.version import SCHEMA_VERSION
from .config import parse_list, resolve, write_output


def main(args, parser, extra):
    '''mz-dist compares two paths given by their values on uniform grids of
       the same horizon (the grids may differ)
    '''
    from tclab.paths import LinearPath, StepPath, TimeGrid, mz_distance, sup_distance

    resolved = resolve(args)
    f, g = parse_list(resolved["f"], float), parse_list(resolved["g"], float)
    first, second = TimeGrid(len(f) - 1, resolved["T"]), TimeGrid(len(g) - 1, resolved["T"])

    record = {"schema_version": SCHEMA_VERSION,
              "mz": mz_distance(StepPath(first, f), StepPath(second, g)),
              "sup": sup_distance(LinearPath(first, f), LinearPath(second, g))}
    return write_output(args, resolved, record=record)
