'''

Copyright (C) 2019 The tclab Developers.

This Source Code Form is subject to the terms of the
Mozilla Public License, v. 2.0. If a copy of the MPL was not distributed
with this file, You can obtain one at http://mozilla.org/MPL/2.0/.

'''

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from tclab.errors import ValidationError
from tclab.logger import bot
from tclab.paths import StepPath
from tclab.wealth import Strategy, admissibility_tol, wealth_paths

SOURCES = ("x1", "x2", "s_tilde")


################################################################################
# Cylinder functions
################################################################################


@dataclass(frozen=True, eq=False)
class CylinderFunction:
    '''a bounded function of finitely many grid values of the tree paths.
       sources[i] names the array ("x1", "x2" or "s_tilde") sampled at grid
       index indices[i]; the evaluator maps the (scenarios, m) sample to
       one value per scenario.
    '''

    name: str
    sources: tuple
    indices: tuple
    evaluator: Callable
    bound: float

    def __post_init__(self):
        if len(self.sources) != len(self.indices) or not self.indices:
            raise ValidationError("need one source per time index")
        if any(s not in SOURCES for s in self.sources):
            raise ValidationError("sources must be among %s" % ", ".join(SOURCES))
        if not self.bound >= 0:
            raise ValidationError("bound must be nonnegative")

    def sample(self, tree):
        if max(self.indices) > tree.n or min(self.indices) < 0:
            raise ValidationError("%s samples times outside the grid of n=%s" % (self.name, tree.n))
        columns = [getattr(tree, s)[:, i] for s, i in zip(self.sources, self.indices)]
        return np.stack(columns, axis=1)

    def __call__(self, tree):
        values = np.asarray(self.evaluator(self.sample(tree)))
        if any(abs(v) > self.bound for v in values):
            raise ValidationError("%s exceeds its bound %s" % (self.name, self.bound))
        return values


def _clipped(bound):
    def evaluator(sample):
        return np.minimum(np.maximum(sample[:, 0], -bound), bound)
    return evaluator


def _indicator(threshold):
    def evaluator(sample):
        return (sample[:, 0] > threshold).astype(int)
    return evaluator


def _clipped_product(sample):
    clipped = np.minimum(np.maximum(sample, -1), 1)
    return clipped[:, 0] * clipped[:, 1]


def clipped_coordinate(source, index, bound, name=None):
    name = name or "%s[%s]_clipped" % (source, index)
    return CylinderFunction(name, (source,), (index,), _clipped(bound), bound)


def catalog(n, bound=2.0):
    '''the cylinder functions shipped for a tree of depth n'''
    middle = n // 2
    return [clipped_coordinate("x1", n, bound, "x1_terminal_clipped"),
            clipped_coordinate("x2", n, bound, "x2_terminal_clipped"),
            clipped_coordinate("x1", middle, bound, "x1_middle_clipped"),
            CylinderFunction("s_terminal_above_one", ("s_tilde",), (n,), _indicator(1), 1),
            CylinderFunction("x1_middle_positive", ("x1",), (middle,), _indicator(0), 1),
            CylinderFunction("x1_x2_terminal_product", ("x1", "x2"), (n, n),
                             _clipped_product, 1)]


################################################################################
# Prediction processes
################################################################################


@dataclass(frozen=True, eq=False)
class PredictionProcess:
    '''Y_k = E[psi | F_k] on every scenario, one row per scenario'''

    tree: object
    name: str
    values: np.ndarray

    @property
    def initial(self):
        return self.values[0, 0]

    def paths(self):
        return [StepPath(self.tree.grid, row) for row in self.values]

    def to_frame(self):
        '''one row per node, columns frozen as (t, node_id, Y_value)'''
        import pandas
        points = self.tree.grid.points
        rows = []
        for level in range(self.tree.n + 1):
            for node, value in enumerate(self.tree.node_values(self.values, level)):
                rows.append({"t": points[level], "node_id": node, "Y_value": float(value)})
        return pandas.DataFrame(rows, columns=["t", "node_id", "Y_value"])


def prediction_process(tree, psi):
    '''prediction_process averages psi over the leaves below every node,
       weighted by the tree probabilities. Exact trees stay exact.

       Parameters
       ==========
       tree: the ScenarioTree
       psi: a CylinderFunction, or any callable of the tree giving one
            value per scenario
    '''
    terminal = np.asarray(psi(tree))
    if terminal.shape != (tree.size,):
        raise ValidationError("psi must give one value per scenario")

    if tree.exact:
        weights = tree.probabilities
        terminal = terminal.astype(object)
        values = np.empty((tree.size, tree.n + 1), dtype=object)
    else:
        weights = tree.weights
        terminal = terminal.astype(float)
        values = np.empty((tree.size, tree.n + 1))

    for level in range(tree.n + 1):
        block = tree.block(level)
        mass = weights.reshape(-1, block)
        means = (mass * terminal.reshape(-1, block)).sum(axis=1) / mass.sum(axis=1)
        values[:, level] = np.repeat(means, block)

    # exact at maturity, no w * psi / w round off
    values[:, -1] = terminal
    return PredictionProcess(tree, getattr(psi, "name", "psi"), values)


################################################################################
# Projection
################################################################################


def price_filtration(tree):
    '''labels of the filtration generated by the price path: scenarios
       share a cell at level k when S_0..S_k agree
    '''
    prices = tree.prices
    labels = np.zeros((tree.size, tree.n + 1), dtype=int)
    for level in range(tree.n + 1):
        labels[:, level] = np.unique(prices[:, :level + 1], axis=0, return_inverse=True)[1].ravel()
    return labels


def no_information(tree):
    return np.zeros((tree.size, tree.n + 1), dtype=int)


def coin_tree(tree):
    '''a tree one level deeper whose first sign is a fair coin the price
       ignores: each half repeats the scenarios of the given tree
    '''
    from tclab.market import ScenarioTree

    prices = np.asarray(tree.s_tilde)
    delayed = np.hstack([prices[:, :1], prices])
    return ScenarioTree.from_prices(np.vstack([delayed, delayed]),
                                    probabilities=np.concatenate([tree.probabilities,
                                                                  tree.probabilities]) / 2,
                                    T=tree.T * (tree.n + 1) / tree.n)


def peeking_strategy(tree, holding):
    '''hold holding * xi_1 from time 0 until maturity: the position knows
       the first sign before it is drawn
    '''
    positions = holding * np.repeat(tree.signs[:, :1].astype(float), tree.n, axis=1)
    return [Strategy.from_positions(tree.grid, row) for row in positions]


def check_coarsening(tree, labels):
    '''labels must be constant on every tree node of their level and
       refine over time
    '''
    labels = np.asarray(labels)
    if labels.shape != (tree.size, tree.n + 1):
        raise ValidationError("coarse labels must have shape %s" % ((tree.size, tree.n + 1),))

    for level in range(tree.n + 1):
        column = labels[:, level].reshape(-1, tree.block(level))
        if np.any(column != column[:, :1]):
            raise ValidationError("coarse cells at level %s split a tree node" % level)
        if level > 0:
            pairs = np.unique(labels[:, [level, level - 1]], axis=0)
            if len(np.unique(pairs[:, 0])) != len(pairs):
                raise ValidationError("coarse cells at level %s do not refine level %s"
                                      % (level, level - 1))
    return labels


def project_strategy(tree, fine, coarse_info):
    '''project_strategy replaces every holding by its conditional
       expectation given the coarse information: the probability weighted
       average of the fine holdings over each coarse cell.

       Parameters
       ==========
       tree: the ScenarioTree giving the probabilities
       fine: one Strategy (or holdings row) per scenario
       coarse_info: (scenarios, n+1) integer cell labels per level

       Returns
       =======
       one Strategy per scenario, adapted to the coarse cells
    '''
    labels = check_coarsening(tree, coarse_info)
    holdings = _holdings(tree, fine)

    if tree.exact or holdings.dtype == object:
        weights = tree.probabilities
        projected = np.empty(holdings.shape, dtype=object)
    else:
        weights = tree.weights
        projected = np.empty(holdings.shape)

    for level in range(tree.n + 1):
        for cell in np.unique(labels[:, level]):
            members = labels[:, level] == cell
            mass = weights[members]
            projected[members, level] = np.sum(mass * holdings[members, level]) / np.sum(mass)

    bot.debug("projected %s strategies on %s levels" % (tree.size, tree.n + 1))
    return [Strategy(tree.grid, row) for row in projected]


def _holdings(tree, strategies):
    rows = [s.holdings if isinstance(s, Strategy) else np.asarray(s) for s in strategies]
    holdings = np.array(rows, dtype=object if any(np.asarray(r).dtype == object for r in rows) else float)
    if holdings.shape != (tree.size, tree.n + 1):
        raise ValidationError("need one strategy of %s holdings per scenario" % (tree.n + 1))
    return holdings


@dataclass
class ProjectionReport:
    fine_utility: float
    projected_utility: float
    fine_admissible: bool
    projected_admissible: bool
    improvement: float = field(init=False)

    def __post_init__(self):
        self.improvement = self.projected_utility - self.fine_utility

    def to_dict(self):
        return {"fine_utility": self.fine_utility,
                "projected_utility": self.projected_utility,
                "improvement": self.improvement,
                "fine_admissible": self.fine_admissible,
                "projected_admissible": self.projected_admissible}


def compare_projection(tree, fine, projected, utility, x, kappa):
    '''expected utility and admissibility of a strategy and its projection'''
    from tclab.utility import evaluate, expectation, parse_utility

    utility = parse_utility(utility)
    prices, weights = tree.prices, tree.weights
    tol = admissibility_tol(x)

    def summarize(strategies):
        wealth = wealth_paths(prices, _holdings(tree, strategies).astype(float), kappa)
        admissible = bool(np.all(x + wealth >= -tol))
        terminal = np.maximum(x + wealth[:, -1], 0.0)
        return expectation(evaluate(utility, terminal, prices[:, -1]), weights), admissible

    fine_value, fine_ok = summarize(fine)
    projected_value, projected_ok = summarize(projected)
    if fine_ok and not projected_ok:
        bot.warning("the projection of an admissible strategy is not admissible")
    return ProjectionReport(fine_value, projected_value, fine_ok, projected_ok)


################################################################################
# Laws
################################################################################


@dataclass(frozen=True)
class LawSummary:
    ks: tuple
    energy: float
    size_a: int
    size_b: int

    def to_dict(self):
        return {"ks": list(self.ks),
                "energy": self.energy,
                "size_a": self.size_a,
                "size_b": self.size_b}


def _as_tuples(samples):
    samples = np.asarray(samples, dtype=float)
    if samples.ndim == 1:
        samples = samples[:, None]
    if samples.ndim != 2 or len(samples) == 0:
        raise ValidationError("samples must be a nonempty (count, arity) array")
    return samples


def _subsample(samples, limit):
    if len(samples) <= limit:
        return samples
    return samples[np.linspace(0, len(samples) - 1, limit).astype(int)]


def energy_distance(a, b, limit=2000):
    '''2 E|X - Y| - E|X - X'| - E|Y - Y'| on at most limit points per sample'''
    from scipy.spatial.distance import cdist
    a, b = _subsample(a, limit), _subsample(b, limit)
    cross = cdist(a, b).mean()
    return float(max(0.0, 2 * cross - cdist(a, a).mean() - cdist(b, b).mean()))


def law_distance(samples_a, samples_b, limit=2000):
    '''law_distance compares two samples of terminal tuples: the two sample
       Kolmogorov-Smirnov statistic of every coordinate and the energy
       distance of the joint law. Descriptive only.
    '''
    from scipy.stats import ks_2samp

    a, b = _as_tuples(samples_a), _as_tuples(samples_b)
    if a.shape[1] != b.shape[1]:
        raise ValidationError("arity mismatch: %s != %s" % (a.shape[1], b.shape[1]))

    ks = tuple(float(ks_2samp(a[:, i], b[:, i]).statistic) for i in range(a.shape[1]))
    return LawSummary(ks=ks, energy=energy_distance(a, b, limit), size_a=len(a), size_b=len(b))


def law_trend(n_list, T=1.0, samples=2000, seed=0, steps=None, workers=None):
    '''law_trend compares sampled S_n of the discrete market with S_T of the
       limit model for every n, one row per n with the columns
       (n, ks, energy, samples). The limit paths are drawn once.
    '''
    import pandas
    from tclab.market import LimitModelParams, sample_markets, simulate_limit

    steps = steps or max(int(n) for n in n_list)
    limit = simulate_limit(LimitModelParams(T=T, steps=steps, seed=seed), samples, workers=workers)

    rows = []
    for n in n_list:
        sample = sample_markets(int(n), T, samples, seed + 1, workers=workers)
        summary = law_distance(sample.s_tilde[:, -1], limit.s[:, -1])
        rows.append({"n": int(n), "ks": summary.ks[0], "energy": summary.energy,
                     "samples": int(samples)})
    return pandas.DataFrame(rows, columns=["n", "ks", "energy", "samples"])
