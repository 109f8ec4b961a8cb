'''

Copyright (C) 2019 The tclab Developers.

This Source Code Form is subject to the terms of the
Mozilla Public License, v. 2.0. If a copy of the MPL was not distributed
with this file, You can obtain one at http://mozilla.org/MPL/2.0/.

'''

from dataclasses import dataclass
from fractions import Fraction
import math

import numpy as np

from tclab.errors import ValidationError

KINDS = ("shortfall", "power", "log")


@dataclass(frozen=True)
class UtilitySpec:
    '''a utility of terminal wealth v and terminal price s_T.

       shortfall: -((s_T - K)^+ - v)^+, the shortfall of a call with strike K
       power: v^alpha with alpha in (0, 1)
       log: ln v, -inf at v = 0
    '''

    kind: str = "shortfall"
    strike: float = 1.0
    alpha: float = 0.5

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError("unknown utility %s, choose from %s" % (self.kind, ", ".join(KINDS)))
        if self.kind == "shortfall" and not self.strike > 0:
            raise ValidationError("shortfall strike must be positive, got %s" % self.strike)
        if self.kind == "power" and not 0 < self.alpha < 1:
            raise ValidationError("power exponent must be in (0, 1), got %s" % self.alpha)

    def __str__(self):
        if self.kind == "shortfall":
            return "shortfall:K=%s" % self.strike
        if self.kind == "power":
            return "power:alpha=%s" % self.alpha
        return "log"

    def payoff(self, s_T):
        '''the call payoff (s_T - K)^+ hedged by the shortfall utility'''
        return np.maximum(np.asarray(s_T, dtype=float) - self.strike, 0.0)


def parse_utility(text):
    '''parse_utility reads "shortfall:K=1.0", "power:alpha=0.5" or "log"'''
    if isinstance(text, UtilitySpec):
        return text

    kind, _, rest = str(text).strip().partition(":")
    options = {}
    for item in [x for x in rest.split(",") if x.strip()]:
        key, _, value = item.partition("=")
        try:
            options[key.strip().lower()] = float(value)
        except ValueError:
            raise ValidationError("cannot parse utility option %s" % item)

    kind = kind.strip().lower()
    if kind == "shortfall":
        return UtilitySpec(kind, strike=options.get("k", 1.0))
    if kind == "power":
        return UtilitySpec(kind, alpha=options.get("alpha", 0.5))
    if kind == "log" and not options:
        return UtilitySpec(kind)
    raise ValidationError("cannot parse utility %s" % text)


def evaluate(utility, v, s_T):
    '''evaluate returns U(v, s_T). Scalars give a number (Fractions stay
       exact for the shortfall utility), arrays give a float array. v = 0
       is allowed and the log utility returns -inf there.

       Parameters
       ==========
       utility: a UtilitySpec
       v: terminal wealth, nonnegative
       s_T: terminal price
    '''
    if np.ndim(v) == 0 and np.ndim(s_T) == 0:
        return _evaluate_scalar(utility, v, s_T)

    v = np.asarray(v, dtype=float)
    s_T = np.asarray(s_T, dtype=float)
    if np.any(v < 0):
        raise ValidationError("wealth must be nonnegative")

    if utility.kind == "shortfall":
        return -np.maximum(utility.payoff(s_T) - v, 0.0)
    if utility.kind == "power":
        return v ** utility.alpha + 0 * s_T
    with np.errstate(divide="ignore"):
        return np.log(v) + 0 * s_T


def _evaluate_scalar(utility, v, s_T):
    if v < 0:
        raise ValidationError("wealth must be nonnegative, got %s" % v)
    if utility.kind == "shortfall":
        strike = utility.strike
        if isinstance(s_T, Fraction) or isinstance(v, Fraction):
            strike = Fraction(strike)
        payoff = max(s_T - strike, 0)
        return -max(payoff - v, 0)
    if utility.kind == "power":
        return float(v) ** utility.alpha
    if v == 0:
        return -math.inf
    return math.log(v)


def expectation(values, weights=None):
    '''expectation of utility values with -inf propagation: one -inf
       scenario with positive weight makes the expectation -inf.
    '''
    values = np.asarray(values, dtype=float)
    if weights is None:
        weights = np.full(len(values), 1.0 / len(values))
    weights = np.asarray(weights, dtype=float)

    charged = weights > 0
    if np.any(np.isneginf(values[charged])):
        return -math.inf
    return float(np.sum(values[charged] * weights[charged]))


def modulus_bound_check(utility, scale, v, s_T, tol=1e-12):
    '''modulus_bound_check verifies U((1 - l) v, s) >= (1 - m1(l)) U(v, s)
       - m2(l) zeta(s) at one point, with the moduli of each utility:

       shortfall: m1 = 0, m2 = l / (1 - l), zeta = (s_T - K)^+
       power:     m1 = 1 - (1 - l)^alpha, m2 = 0 (holds with equality)
       log:       m1 = 0, m2 = -ln(1 - l), zeta = 1

       Parameters
       ==========
       utility: a UtilitySpec
       scale: l in (0, 1)
       v: wealth, positive
       s_T: terminal price
    '''
    if not 0 < scale < 1:
        raise ValidationError("scale must be in (0, 1), got %s" % scale)
    if not v > 0:
        raise ValidationError("wealth must be positive, got %s" % v)

    shrunk = evaluate(utility, (1 - scale) * v, s_T)
    full = evaluate(utility, v, s_T)

    if utility.kind == "shortfall":
        bound = full - scale / (1 - scale) * max(s_T - utility.strike, 0)
    elif utility.kind == "power":
        bound = (1 - scale) ** utility.alpha * full
    else:
        bound = full + math.log(1 - scale)

    return bool(shrunk >= bound - tol * max(1.0, abs(bound)))
