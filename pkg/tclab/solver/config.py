'''

Copyright (C) 2019 The tclab Developers.

This Source Code Form is subject to the terms of the
Mozilla Public License, v. 2.0. If a copy of the MPL was not distributed
with this file, You can obtain one at http://mozilla.org/MPL/2.0/.

'''

from dataclasses import dataclass, field, replace
from typing import Optional
import math

import numpy as np

from tclab.errors import ValidationError
from tclab.logger import bot
from tclab.version import SCHEMA_VERSION


@dataclass(frozen=True)
class SolverConfig:
    '''quantization of the strategy space.

       holding_step / holding_bound: the symmetric grid -G..G with step d.
       The bound defaults to x / (2 kappa min price), beyond which the
       entry charge alone breaks admissibility, capped at max_holdings.
       cost_step / cost_span: accumulated cost lives on a grid from
       -cost_span to cost_max (x + cost_span unless given) with step c.
    '''

    holding_step: float = 0.05
    holding_bound: Optional[float] = None
    cost_step: float = 0.005
    cost_span: float = 1.0
    cost_max: Optional[float] = None
    enumeration_cap: Optional[int] = None
    max_n: Optional[int] = None
    max_holdings: Optional[int] = None
    workers: Optional[int] = None
    keep_policy: bool = True

    def __post_init__(self):
        from tclab import defaults

        if not self.holding_step > 0:
            raise ValidationError("holding step must be positive, got %s" % self.holding_step)
        if self.holding_bound is not None and not self.holding_bound >= self.holding_step:
            raise ValidationError("holding bound must be at least the holding step")
        if not self.cost_step > 0:
            raise ValidationError("cost step must be positive, got %s" % self.cost_step)
        if not self.cost_span >= 0:
            raise ValidationError("cost span must be nonnegative, got %s" % self.cost_span)

        fill = {"enumeration_cap": defaults.TCLAB_BRUTE_FORCE_CAP,
                "max_n": defaults.TCLAB_DP_MAX_N,
                "max_holdings": defaults.TCLAB_MAX_HOLDINGS}
        for name, value in fill.items():
            if getattr(self, name) is None:
                object.__setattr__(self, name, value)
        if self.max_holdings < 1:
            raise ValidationError("max_holdings must be positive")

    def resolve_bound(self, prices, x, kappa):
        '''the holding bound G for this tree, capital and cost rate'''
        if self.holding_bound is not None:
            return float(self.holding_bound)

        ceiling = self.holding_step * max(1, self.max_holdings // 2)
        if kappa > 0:
            bound = x / (2 * kappa * float(np.min(prices)))
        else:
            bound = ceiling
        if bound > ceiling:
            bot.verbose("holding bound %.6g clipped to %.6g" % (bound, ceiling))
            bound = ceiling
        return max(bound, self.holding_step)

    def holding_grid(self, prices, x, kappa):
        '''the symmetric holding grid, 0 included exactly'''
        bound = self.resolve_bound(prices, x, kappa)
        steps = int(math.floor(bound / self.holding_step + 1e-9))
        return self.holding_step * np.arange(-steps, steps + 1)

    def cost_grid(self, x):
        '''(lowest cost, number of levels, index of cost 0)'''
        below = int(math.ceil(self.cost_span / self.cost_step - 1e-9))
        top = x + self.cost_span if self.cost_max is None else self.cost_max
        if top < x:
            raise ValidationError("cost_max must be at least x (%s < %s)" % (top, x))
        above = int(math.floor(top / self.cost_step + 1e-9))
        return -below * self.cost_step, below + above + 1, below

    def to_dict(self):
        return {"holding_step": self.holding_step,
                "holding_bound": self.holding_bound,
                "cost_step": self.cost_step,
                "cost_span": self.cost_span,
                "cost_max": self.cost_max,
                "enumeration_cap": self.enumeration_cap,
                "max_n": self.max_n,
                "max_holdings": self.max_holdings}

    def replace(self, **changes):
        return replace(self, **changes)


@dataclass
class ValueReport:
    '''an estimate of u_n(x) with the data needed to audit it'''

    n: int
    x: float
    kappa: float
    utility: str
    value: float
    solver: str
    grid: dict = field(default_factory=dict)
    lower_bound: bool = False
    fallback: bool = False
    states_visited: int = 0
    no_trade_value: Optional[float] = None
    policy_value: Optional[float] = None
    policy: Optional[list] = None
    prices: Optional[np.ndarray] = None
    runtime_ms: Optional[float] = None

    @property
    def admissible(self):
        '''every policy strategy keeps x + V >= 0'''
        from tclab.wealth import wealth_process, is_admissible
        if self.policy is None:
            return None
        return all(is_admissible(self.x, wealth_process(p, s, self.kappa))
                   for p, s in zip(self.prices, self.policy))

    def to_dict(self, include_policy=True):
        result = {"schema_version": SCHEMA_VERSION,
                  "n": self.n,
                  "x": self.x,
                  "kappa": self.kappa,
                  "utility": self.utility,
                  "value": _number(self.value),
                  "solver": self.solver,
                  "grid": self.grid,
                  "lower_bound": self.lower_bound,
                  "fallback": self.fallback,
                  "states_visited": int(self.states_visited),
                  "no_trade_value": _number(self.no_trade_value),
                  "policy_value": _number(self.policy_value)}
        if self.runtime_ms is not None:
            result["runtime_ms"] = self.runtime_ms
        if include_policy and self.policy is not None:
            result["policy"] = [[float(h) for h in s.holdings] for s in self.policy]
        return result

    def policy_frame(self):
        '''one row per scenario and date, columns frozen as
           (scenario_id, k, t, S_k, gamma_k, V_k)
        '''
        import pandas
        from tclab.wealth import wealth_process

        frames = []
        for scenario, (prices, strategy) in enumerate(zip(self.prices, self.policy)):
            frame = wealth_process(prices, strategy, self.kappa).to_frame()
            frame.insert(0, "scenario_id", scenario)
            frames.append(frame)
        return pandas.concat(frames, ignore_index=True)


def _number(value):
    if value is None:
        return None
    value = float(value)
    if math.isinf(value):
        return "-inf" if value < 0 else "inf"
    return value
