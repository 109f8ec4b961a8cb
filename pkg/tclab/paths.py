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


################################################################################
# Arrays
################################################################################


def as_values(values):
    '''as_values returns a one dimensional numpy array. Python numbers give
       a float array; anything holding Fractions stays an object array so
       exact arithmetic survives.
    '''
    values = np.asarray(values)
    if values.ndim != 1:
        raise ValidationError("path values must be one dimensional")
    if values.dtype == object:
        return values
    return values.astype(float)


def is_exact(values):
    return np.asarray(values).dtype == object


def all_finite(values):
    values = np.asarray(values)
    if values.dtype == object:
        return all(math.isfinite(float(v)) for v in values)
    return bool(np.all(np.isfinite(values)))


################################################################################
# Types
################################################################################


@dataclass(frozen=True)
class TimeGrid:
    '''a uniform grid t_k = kT/n, k=0..n'''

    n: int
    T: float = 1.0

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise ValidationError("grid needs n >= 1 steps, got %s" % self.n)
        if not (math.isfinite(self.T) and self.T > 0):
            raise ValidationError("grid horizon must be positive, got %s" % self.T)
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "T", float(self.T))

    @property
    def dt(self):
        return self.T / self.n

    @property
    def points(self):
        points = np.arange(self.n + 1) * self.T / self.n
        points[-1] = self.T
        return points

    def index(self, t):
        '''the grid index k with t_k <= t < t_{k+1}, and n at t = T'''
        t = np.asarray(t, dtype=float)
        if np.any((t < 0) | (t > self.T)):
            raise ValidationError("time outside [0, %s]" % self.T)
        index = np.floor(t * self.n / self.T).astype(int)
        return np.minimum(index, self.n)

    def refine(self, factor):
        return TimeGrid(self.n * int(factor), self.T)

    def same_horizon(self, other):
        return math.isclose(self.T, other.T, rel_tol=1e-12, abs_tol=0.0)


@dataclass(frozen=True, eq=False)
class StepPath:
    '''right-continuous step function f(t) = values[floor(nt/T)], f(T) = values[n]'''

    grid: TimeGrid
    values: np.ndarray

    def __post_init__(self):
        values = as_values(self.values)
        if len(values) != self.grid.n + 1:
            raise ValidationError("step path needs %s values, got %s"
                                  % (self.grid.n + 1, len(values)))
        if not all_finite(values):
            raise ValidationError("step path values must be finite")
        object.__setattr__(self, "values", values)

    def __call__(self, t):
        return self.values[self.grid.index(t)]

    @property
    def terminal(self):
        return self.values[-1]

    def increments(self):
        '''increments with the pre-initial value f(0-) = 0'''
        delta = self.values.copy()
        delta[1:] = self.values[1:] - self.values[:-1]
        return delta

    def refine(self, factor):
        '''the same step function sampled on a grid factor times finer'''
        factor = int(factor)
        if factor < 1:
            raise ValidationError("refinement factor must be >= 1")
        values = np.concatenate([np.repeat(self.values[:-1], factor),
                                 self.values[-1:]])
        return StepPath(self.grid.refine(factor), values)


@dataclass(frozen=True, eq=False)
class LinearPath:
    '''continuous piecewise linear interpolation of grid values'''

    grid: TimeGrid
    values: np.ndarray

    def __post_init__(self):
        values = as_values(self.values)
        if len(values) != self.grid.n + 1:
            raise ValidationError("linear path needs %s values, got %s"
                                  % (self.grid.n + 1, len(values)))
        if not all_finite(values):
            raise ValidationError("linear path values must be finite")
        object.__setattr__(self, "values", values)

    def __call__(self, t):
        return np.interp(t, self.grid.points, self.values.astype(float))

    @property
    def terminal(self):
        return self.values[-1]


################################################################################
# Merged grids
################################################################################


def check_horizon(first, second):
    if not first.same_horizon(second):
        raise ValidationError("horizon mismatch: %s != %s" % (first.T, second.T))


def merged_breaks(n_first, n_second):
    '''merged_breaks returns the union of the two grids as integers on the
       common grid of lcm(n_first, n_second) cells, plus that cell count.
       Integer positions keep kT/n comparisons exact.
    '''
    common = n_first * n_second // math.gcd(n_first, n_second)
    breaks = np.union1d(np.arange(n_first + 1) * (common // n_first),
                        np.arange(n_second + 1) * (common // n_second))
    return breaks, common


def interpolate_at(values, n, breaks, common):
    '''values of a linear path at integer break positions'''
    stride = common // n
    index = breaks // stride
    weight = (breaks % stride) / stride
    upper = np.minimum(index + 1, n)
    values = values.astype(float)
    return values[index] + weight * (values[upper] - values[index])


################################################################################
# Metrics
################################################################################


def mz_distance(f, g):
    '''mz_distance returns the Meyer-Zheng distance between two step paths,
       the integral of min(1, |f - g|) over [0, T] plus |f(T) - g(T)|. The
       integral is an exact finite sum over the cells of the merged grid.

       Parameters
       ==========
       f, g: StepPath on grids with the same horizon (n may differ)
    '''
    check_horizon(f.grid, g.grid)
    breaks, common = merged_breaks(f.grid.n, g.grid.n)
    starts, ends = breaks[:-1], breaks[1:]
    first = f.values[starts // (common // f.grid.n)]
    second = g.values[starts // (common // g.grid.n)]

    if is_exact(f.values) or is_exact(g.values):
        horizon = Fraction(f.grid.T)
        total = Fraction(0)
        for a, b, start, end in zip(first, second, starts, ends):
            total += min(1, abs(a - b)) * Fraction(int(end - start), common)
        return total * horizon + abs(f.terminal - g.terminal)

    lengths = (ends - starts) / common * f.grid.T
    integrand = np.minimum(1.0, np.abs(first - second))
    return float(np.sum(integrand * lengths) + abs(f.terminal - g.terminal))


def sup_distance(f, g):
    '''sup_distance returns max |f - g| for two linear paths. Both are
       linear between merged breakpoints, so the breakpoints suffice.
    '''
    check_horizon(f.grid, g.grid)
    breaks, common = merged_breaks(f.grid.n, g.grid.n)
    first = interpolate_at(f.values, f.grid.n, breaks, common)
    second = interpolate_at(g.values, g.grid.n, breaks, common)
    return float(np.max(np.abs(first - second)))


def jordan_decompose(f):
    '''jordan_decompose splits a step path into nondecreasing positive and
       negative variations, counting the jump at t=0 from f(0-) = 0.

       Returns
       =======
       (pos, neg, total_variation) with f = pos - neg at every grid point
    '''
    delta = f.increments()
    up = np.where(delta > 0, delta, 0 * delta)
    down = np.where(delta < 0, -delta, 0 * delta)
    pos = StepPath(f.grid, np.cumsum(up))
    neg = StepPath(f.grid, np.cumsum(down))
    return pos, neg, pos.terminal + neg.terminal
