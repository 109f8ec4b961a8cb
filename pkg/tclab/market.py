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

from tclab.errors import (
    PositivityError,
    ResourceLimitError,
    ValidationError
)
from tclab.logger import bot
from tclab.paths import (
    LinearPath,
    StepPath,
    TimeGrid
)


################################################################################
# Random numbers
################################################################################


def generator(seed, block):
    '''a counter based generator for one block of draws. The stream depends
       only on (seed, block), never on which worker draws it.
    '''
    if seed is None:
        raise ValidationError("a seed is required for sampling")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(block)])))


def split_blocks(count, block_size):
    '''split_blocks returns (block index, size) pairs covering count draws'''
    blocks = []
    for index, start in enumerate(range(0, count, block_size)):
        blocks.append((index, min(block_size, count - start)))
    return blocks


def _run_blocks(func, tasks, workers=None):
    from tclab.workers import Workers
    return Workers(workers).run(func, tasks)


################################################################################
# Types
################################################################################


@dataclass(frozen=True)
class Scenario:
    '''a sign sequence xi_1..xi_n, each scenario has probability 2^-n'''

    signs: tuple

    def __post_init__(self):
        signs = tuple(int(x) for x in self.signs)
        if not signs:
            raise ValidationError("a scenario needs at least one sign")
        if any(x not in (-1, 1) for x in signs):
            raise ValidationError("scenario signs must be -1 or +1, got %s" % (signs,))
        object.__setattr__(self, "signs", signs)

    @property
    def n(self):
        return len(self.signs)

    @property
    def probability(self):
        return Fraction(1, 2 ** self.n)

    @classmethod
    def parse(cls, text):
        '''parse a comma separated sign list such as "+1,-1"'''
        try:
            return cls(tuple(int(x) for x in str(text).split(",") if x.strip()))
        except ValueError:
            raise ValidationError("cannot parse scenario %s" % text)

    def __str__(self):
        return ",".join("%+d" % x for x in self.signs)


@dataclass(frozen=True)
class LimitModelParams:
    T: float = 1.0
    steps: int = 100
    seed: int = 0
    s0: float = 1.0
    nu0: float = 1.0

    def __post_init__(self):
        if int(self.steps) != self.steps or self.steps < 1:
            raise ValidationError("steps must be a positive integer, got %s" % self.steps)
        if not self.T > 0:
            raise ValidationError("horizon must be positive, got %s" % self.T)
        object.__setattr__(self, "steps", int(self.steps))


@dataclass(frozen=True, eq=False)
class DiscreteMarket:
    grid: TimeGrid
    scenario: Scenario
    x1: StepPath
    x2: StepPath
    nu: StepPath
    s_tilde: np.ndarray
    s_interp: LinearPath
    cap: float

    @property
    def nu_tilde(self):
        return self.nu.values

    @property
    def n(self):
        return self.grid.n

    @property
    def T(self):
        return self.grid.T

    def to_dict(self):
        return {"n": self.n,
                "T": self.T,
                "xi": list(self.scenario.signs),
                "cap": self.cap,
                "s_tilde": [float(x) for x in self.s_tilde],
                "nu_tilde": [float(x) for x in self.nu_tilde],
                "x1": [float(x) for x in self.x1.values],
                "x2": [float(x) for x in self.x2.values],
                "s_interp": [float(x) for x in self.s_interp.values]}

    def to_frame(self):
        '''columns frozen as (k, t, xi_k, x1, x2, nu_tilde, s_tilde, s_interp)'''
        import pandas
        columns = ["k", "t", "xi_k", "x1", "x2", "nu_tilde", "s_tilde", "s_interp"]
        return pandas.DataFrame({"k": np.arange(self.n + 1),
                                 "t": self.grid.points,
                                 "xi_k": (0,) + self.scenario.signs,
                                 "x1": self.x1.values.astype(float),
                                 "x2": self.x2.values.astype(float),
                                 "nu_tilde": self.nu_tilde.astype(float),
                                 "s_tilde": np.asarray(self.s_tilde).astype(float),
                                 "s_interp": self.s_interp.values.astype(float)},
                                columns=columns)


@dataclass(frozen=True, eq=False)
class ScenarioTree:
    '''all 2^n scenarios of a binary tree, one row per scenario in
       lexicographic order (-1 before +1, first sign most significant).
       Node j at level k holds the scenarios j*2^(n-k) .. (j+1)*2^(n-k)-1.
    '''

    grid: TimeGrid
    signs: np.ndarray
    s_tilde: np.ndarray
    nu_tilde: np.ndarray
    x1: np.ndarray
    x2: np.ndarray
    probabilities: np.ndarray
    exact: bool = False

    @property
    def n(self):
        return self.grid.n

    @property
    def T(self):
        return self.grid.T

    @property
    def size(self):
        return len(self.signs)

    def __len__(self):
        return self.size

    @property
    def weights(self):
        return self.probabilities.astype(float)

    @property
    def prices(self):
        '''trading date prices as floats, one row per scenario'''
        return self.s_tilde.astype(float)

    def block(self, level):
        return 2 ** (self.n - level)

    def node_ids(self, level):
        return np.arange(self.size) >> (self.n - level)

    def node_values(self, values, level):
        '''the level-k column of an adapted (scenarios, n+1) array, one
           entry per node
        '''
        return np.asarray(values)[::self.block(level), level]

    def node_weights(self, level):
        return self.weights.reshape(2 ** level, -1).sum(axis=1)

    def market(self, index):
        signs = tuple(int(x) for x in self.signs[index])
        return _assemble_market(self.grid, Scenario(signs),
                                {"s_tilde": self.s_tilde[index],
                                 "nu_tilde": self.nu_tilde[index],
                                 "x1": self.x1[index],
                                 "x2": self.x2[index]})

    def markets(self):
        for index in range(self.size):
            yield self.market(index)

    def terminal_frame(self):
        '''per scenario terminal values, columns frozen as
           (scenario_id, prob, s_T, x1_T, x2_T)
        '''
        import pandas
        return pandas.DataFrame({"scenario_id": np.arange(self.size),
                                 "prob": self.weights,
                                 "s_T": self.s_tilde[:, -1].astype(float),
                                 "x1_T": self.x1[:, -1].astype(float),
                                 "x2_T": self.x2[:, -1].astype(float)},
                                columns=["scenario_id", "prob", "s_T", "x1_T", "x2_T"])

    @classmethod
    def from_prices(cls, prices, probabilities=None, T=1.0):
        '''from_prices builds a synthetic tree directly from price paths.

           Parameters
           ==========
           prices: (2^n, n+1) array of trading date prices, rows in
                   lexicographic scenario order, adapted to the tree
           probabilities: per scenario probabilities, uniform by default
           T: horizon
        '''
        prices = np.asarray(prices)
        if prices.dtype != object:
            prices = prices.astype(float)
        if prices.ndim != 2 or prices.shape[1] < 2:
            raise ValidationError("prices must be a (scenarios, n+1) array")

        n = prices.shape[1] - 1
        if prices.shape[0] != 2 ** n:
            raise ValidationError("a depth %s tree needs %s price paths, got %s"
                                  % (n, 2 ** n, prices.shape[0]))
        if not all(float(p) > 0 for p in prices.ravel()):
            raise ValidationError("prices must be strictly positive")

        for level in range(n + 1):
            column = prices[:, level].reshape(2 ** level, -1)
            if np.any(column != column[:, :1]):
                raise ValidationError("prices are not adapted at level %s" % level)

        if probabilities is None:
            probabilities = np.array([Fraction(1, 2 ** n)] * 2 ** n, dtype=object)
        else:
            probabilities = np.array([Fraction(p) for p in probabilities], dtype=object)
            if len(probabilities) != 2 ** n or any(p <= 0 for p in probabilities):
                raise ValidationError("need %s positive probabilities" % 2 ** n)
            if not math.isclose(float(sum(probabilities)), 1.0, rel_tol=1e-12):
                raise ValidationError("probabilities must sum to 1")

        grid = TimeGrid(n, T)
        signs = scenario_signs(n)
        arrays = _walks(signs, grid)
        return cls(grid=grid,
                   signs=signs,
                   s_tilde=prices,
                   nu_tilde=np.ones_like(prices, dtype=float),
                   x1=arrays["x1"],
                   x2=arrays["x2"],
                   probabilities=probabilities,
                   exact=prices.dtype == object)


@dataclass(frozen=True, eq=False)
class MarketSample:
    '''Monte Carlo draws of the discrete market, rows are scenarios'''

    grid: TimeGrid
    signs: np.ndarray
    s_tilde: np.ndarray
    nu_tilde: np.ndarray
    x1: np.ndarray
    x2: np.ndarray
    seed: int

    @property
    def size(self):
        return len(self.signs)

    @property
    def weights(self):
        return np.full(self.size, 1.0 / self.size)

    @property
    def prices(self):
        return self.s_tilde


@dataclass(frozen=True, eq=False)
class LimitSample:
    grid: TimeGrid
    nu: np.ndarray
    s: np.ndarray
    params: LimitModelParams

    @property
    def size(self):
        return len(self.s)


################################################################################
# Construction
################################################################################


def scenario_signs(n):
    '''every sign sequence of length n in lexicographic order, -1 < +1'''
    index = np.arange(2 ** n)[:, None]
    shifts = np.arange(n - 1, -1, -1)[None, :]
    return (((index >> shifts) & 1) * 2 - 1).astype(np.int8)


def _check_factors(factors, name, last_may_vanish=False):
    bad = factors <= 0
    if last_may_vanish:
        bad[:, -1] = factors[:, -1] < 0
    if np.any(bad):
        row, column = np.argwhere(bad)[0]
        raise PositivityError(int(column) + 1, float(factors[row, column]), name)


def _walks(signs, grid):
    signs = np.asarray(signs, dtype=int)
    root = math.sqrt(grid.T / grid.n)
    zeros = np.zeros((signs.shape[0], 1))
    chain = np.cumprod(signs, axis=1)
    return {"x1": root * np.hstack([zeros, np.cumsum(signs, axis=1)]),
            "x2": root * np.hstack([zeros, np.cumsum(chain, axis=1)])}


def market_arrays(signs, T=1.0):
    '''market_arrays evaluates the price tree formulas for many scenarios at
       once. nu_tilde_k is the product of (1 + sqrt(T/n) xi_i) and each
       price step is 1 + min(nu_tilde_{i-1}, ln n) sqrt(T/n) xi_1...xi_i.

       Parameters
       ==========
       signs: (scenarios, n) array of -1/+1
       T: horizon
    '''
    signs = np.asarray(signs, dtype=int)
    if signs.ndim != 2:
        raise ValidationError("signs must be a (scenarios, n) array")
    count, n = signs.shape
    grid = TimeGrid(n, T)
    root = math.sqrt(grid.T / n)
    cap = math.log(n)
    ones = np.ones((count, 1))

    nu_factors = 1.0 + root * signs
    # nu_tilde_n never enters a price step, it may touch 0 (n=1, T=1)
    _check_factors(nu_factors, "nu", last_may_vanish=True)
    nu_tilde = np.hstack([ones, np.cumprod(nu_factors, axis=1)])

    chain = np.cumprod(signs, axis=1)
    s_factors = 1.0 + np.minimum(nu_tilde[:, :-1], cap) * root * chain
    _check_factors(s_factors, "S")
    s_tilde = np.hstack([ones, np.cumprod(s_factors, axis=1)])

    arrays = _walks(signs, grid)
    arrays.update({"s_tilde": s_tilde, "nu_tilde": nu_tilde})
    return arrays


def exact_market_arrays(signs, T=1.0):
    '''the same formulas in rational arithmetic. sqrt(T/n) and ln n are
       converted once to Fractions, every product after that is exact.
    '''
    signs = np.asarray(signs, dtype=int)
    count, n = signs.shape
    grid = TimeGrid(n, T)
    root = Fraction(math.sqrt(grid.T / n))
    cap = Fraction(math.log(n))

    arrays = {name: np.empty((count, n + 1), dtype=object)
              for name in ("s_tilde", "nu_tilde", "x1", "x2")}
    for row, scenario in enumerate(signs):
        s, nu, x1, x2 = [Fraction(1)], [Fraction(1)], [Fraction(0)], [Fraction(0)]
        chain = 1
        for step, xi in enumerate(scenario, start=1):
            chain *= int(xi)
            factor = 1 + min(nu[-1], cap) * root * chain
            if factor <= 0:
                raise PositivityError(step, float(factor), "S")
            nu_factor = 1 + root * int(xi)
            if nu_factor < 0 or (nu_factor == 0 and step < n):
                raise PositivityError(step, float(nu_factor), "nu")
            s.append(s[-1] * factor)
            nu.append(nu[-1] * nu_factor)
            x1.append(x1[-1] + root * int(xi))
            x2.append(x2[-1] + root * chain)
        for name, values in zip(("s_tilde", "nu_tilde", "x1", "x2"), (s, nu, x1, x2)):
            arrays[name][row, :] = values
    return arrays


def _assemble_market(grid, scenario, row):
    s_tilde = np.asarray(row["s_tilde"])
    # S_{-1} = 1, in the same number type as the prices
    shifted = np.concatenate([[s_tilde[0] * 0 + 1], s_tilde[:-1]])
    return DiscreteMarket(grid=grid,
                          scenario=scenario,
                          x1=StepPath(grid, row["x1"]),
                          x2=StepPath(grid, row["x2"]),
                          nu=StepPath(grid, row["nu_tilde"]),
                          s_tilde=s_tilde,
                          s_interp=LinearPath(grid, shifted),
                          cap=math.log(grid.n))


def scaled_walks(n, T, scenario):
    '''scaled_walks returns the step paths X^1 (partial sums of the signs)
       and X^2 (partial sums of the running sign products), both scaled by
       sqrt(T/n) and starting at 0.
    '''
    scenario = _as_scenario(scenario, n)
    grid = TimeGrid(n, T)
    arrays = _walks(np.array([scenario.signs]), grid)
    return StepPath(grid, arrays["x1"][0]), StepPath(grid, arrays["x2"][0])


def build_market(n, T, scenario, exact=False):
    '''build_market constructs one discrete market: the volatility and price
       trees along the scenario, the scaled walks, and the interpolated
       price path with its one period shift (value S_{k-1} at t_k, S_{-1} = 1).

       Parameters
       ==========
       n: number of steps
       T: horizon
       scenario: a Scenario or a sequence of -1/+1 of length n
       exact: compute in rational arithmetic
    '''
    scenario = _as_scenario(scenario, n)
    grid = TimeGrid(n, T)
    builder = exact_market_arrays if exact else market_arrays
    arrays = builder(np.array([scenario.signs]), T)
    return _assemble_market(grid, scenario, {k: v[0] for k, v in arrays.items()})


def enumerate_tree(n, T=1.0, exact=False, cap=None):
    '''enumerate_tree builds every one of the 2^n scenarios, each with
       probability 2^-n.

       Parameters
       ==========
       n: number of steps, at most cap
       T: horizon
       exact: compute in rational arithmetic
       cap: enumeration cap, TCLAB_ENUMERATION_CAP by default
    '''
    if cap is None:
        from tclab.defaults import TCLAB_ENUMERATION_CAP as cap
    grid = TimeGrid(n, T)
    if n > cap:
        raise ResourceLimitError("cannot enumerate 2^%s scenarios, the cap is n=%s" % (n, cap))

    bot.debug("Enumerating %s scenarios (n=%s, T=%s, exact=%s)" % (2 ** n, n, T, exact))
    signs = scenario_signs(n)
    builder = exact_market_arrays if exact else market_arrays
    arrays = builder(signs, T)
    probabilities = np.array([Fraction(1, 2 ** n)] * 2 ** n, dtype=object)
    return ScenarioTree(grid=grid,
                        signs=signs,
                        probabilities=probabilities,
                        exact=exact,
                        **arrays)


def _sample_block(n, T, seed, block, size):
    rng = generator(seed, block)
    signs = rng.integers(0, 2, size=(size, n)) * 2 - 1
    arrays = market_arrays(signs, T)
    arrays["signs"] = signs.astype(np.int8)
    return arrays


def sample_markets(n, T, count, seed, workers=None, block_size=None):
    '''sample_markets draws count scenarios uniformly, one random block at
       a time, and evaluates the market on each of them.
    '''
    if block_size is None:
        from tclab.defaults import TCLAB_MC_BLOCK as block_size
    if int(count) < 1:
        raise ValidationError("need at least one sample, got %s" % count)
    grid = TimeGrid(n, T)

    tasks = [(n, grid.T, seed, block, size)
             for block, size in split_blocks(int(count), block_size)]
    blocks = _run_blocks(_sample_block, tasks, workers)
    merged = {key: np.vstack([b[key] for b in blocks]) for key in blocks[0]}
    return MarketSample(grid=grid, seed=seed, **merged)


def _limit_block(T, steps, seed, block, size, noise=True, nu0=1.0):
    rng = generator(seed, block)
    dt = T / steps
    if noise:
        increments = rng.standard_normal((2, size, steps)) * math.sqrt(dt)
    else:
        increments = np.zeros((2, size, steps))

    ones = np.ones((size, 1))
    nu = nu0 * np.hstack([ones, np.exp(np.cumsum(increments[0] - dt / 2, axis=1))])

    # volatility frozen at the left end of each step
    frozen = nu[:, :-1]
    log_steps = frozen * increments[1] - frozen ** 2 * dt / 2
    s = np.hstack([ones, np.exp(np.cumsum(log_steps, axis=1))])
    return nu, s


def simulate_limit(params, paths, noise=True, workers=None, block_size=None):
    '''simulate_limit draws paths of the stochastic volatility limit
       d nu = nu dX1, dS = nu S dX2 with independent Brownian drivers.
       nu uses its exact geometric update, S a log-Euler step with nu
       frozen at the left endpoint, so S stays positive and is a discrete
       martingale.

       Parameters
       ==========
       params: LimitModelParams (T, steps, seed, s0, nu0)
       paths: number of paths
       noise: False replaces every increment by 0 (testing hook)
    '''
    if block_size is None:
        from tclab.defaults import TCLAB_MC_BLOCK as block_size
    if int(paths) < 1:
        raise ValidationError("need at least one path, got %s" % paths)

    tasks = [(params.T, params.steps, params.seed, block, size, noise, params.nu0)
             for block, size in split_blocks(int(paths), block_size)]
    bot.debug("Simulating %s limit paths in %s blocks" % (paths, len(tasks)))
    blocks = _run_blocks(_limit_block, tasks, workers)
    nu = np.vstack([b[0] for b in blocks])
    s = np.vstack([b[1] for b in blocks]) * params.s0
    return LimitSample(grid=TimeGrid(params.steps, params.T), nu=nu, s=s, params=params)


def _as_scenario(scenario, n):
    if not isinstance(scenario, Scenario):
        scenario = Scenario(tuple(scenario))
    if scenario.n != n:
        raise ValidationError("scenario has %s signs, expected n=%s" % (scenario.n, n))
    return scenario
