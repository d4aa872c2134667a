"""Bagged forests and boosted stumps built on the CART model."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from electwit import rng
from electwit.ml.tree import DecisionTreeModel, as_dense


class RandomForestModel:
    """Bagging of CART trees with sqrt(n_features) candidates per split.

    Every tree consumes a pre-spawned RNG stream derived from (seed, tree
    index), so results are identical whatever ``threads`` is. The majority
    vote resolves exact ties to class 0.
    """

    kind = "random_forest"
    param_names = frozenset({"n_trees", "max_depth"})

    def __init__(self, n_trees: int = 100, max_depth: int | None = None, seed: int = 0, threads: int = 1):
        if n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.seed = seed
        self.threads = max(1, threads)
        self.trees: list[DecisionTreeModel] = []

    def _fit_one(self, t: int, X: np.ndarray, y: np.ndarray, mtry: int) -> DecisionTreeModel:
        gen = rng.generator(self.seed, "forest", t)
        idx = gen.integers(0, X.shape[0], X.shape[0])
        feature_seed = int(gen.integers(1, 2**63, dtype=np.uint64))
        tree = DecisionTreeModel(
            max_depth=self.max_depth, max_features=mtry, feature_seed=feature_seed
        )
        return tree.fit(X[idx], y[idx])

    def fit(self, X, y) -> "RandomForestModel":
        Xd = as_dense(X)
        ya = np.asarray(y, dtype=np.int8)
        mtry = max(1, int(math.sqrt(Xd.shape[1])))
        if self.threads == 1 or self.n_trees == 1:
            self.trees = [self._fit_one(t, Xd, ya, mtry) for t in range(self.n_trees)]
        else:
            with ThreadPoolExecutor(max_workers=self.threads) as pool:
                self.trees = list(
                    pool.map(lambda t: self._fit_one(t, Xd, ya, mtry), range(self.n_trees))
                )
        return self

    def predict(self, X) -> np.ndarray:
        if not self.trees:
            raise RuntimeError("model is not fitted")
        Xd = as_dense(X)
        votes = np.zeros(Xd.shape[0], dtype=np.int64)
        for tree in self.trees:
            votes += tree.predict(Xd)
        return (2 * votes > self.n_trees).astype(np.int64)

    def get_state(self) -> dict:
        return {
            "n_trees": self.n_trees,
            "max_depth": self.max_depth,
            "seed": self.seed,
            "trees": [t.get_state() for t in self.trees],
        }

    @classmethod
    def from_state(cls, state: dict) -> "RandomForestModel":
        model = cls(n_trees=int(state["n_trees"]), max_depth=state["max_depth"], seed=int(state["seed"]))
        model.trees = [DecisionTreeModel.from_state(s) for s in state["trees"]]
        return model


class AdaBoostModel:
    """SAMME boosting of depth-1 stumps (binary labels).

    Rounds stop early when a stump is perfect (it then decides alone) or no
    better than chance on the reweighted data. Vote ties resolve to class 0.
    """

    kind = "adaboost"
    param_names = frozenset({"n_rounds"})

    def __init__(self, n_rounds: int = 50, seed: int = 0):
        if n_rounds < 1:
            raise ValueError("n_rounds must be >= 1")
        self.n_rounds = n_rounds
        self.seed = seed
        self.stumps: list[DecisionTreeModel] = []
        self.alphas: list[float] = []

    def fit(self, X, y) -> "AdaBoostModel":
        Xd = as_dense(X)
        ya = np.asarray(y, dtype=np.int64)
        n = Xd.shape[0]
        w = np.full(n, 1.0 / n)
        self.stumps = []
        self.alphas = []
        for _ in range(self.n_rounds):
            stump = DecisionTreeModel(max_depth=1).fit(Xd, ya, sample_weight=w)
            pred = stump.predict(Xd)
            miss = pred != ya
            err = float(w[miss].sum() / w.sum())
            if err <= 0.0:
                self.stumps.append(stump)
                self.alphas.append(1.0)
                break
            if err >= 0.5:
                if not self.stumps:
                    self.stumps.append(stump)
                    self.alphas.append(1.0)
                break
            alpha = math.log((1.0 - err) / err)
            self.stumps.append(stump)
            self.alphas.append(alpha)
            w = w * np.exp(alpha * miss)
            w = w / w.sum()
        return self

    def predict(self, X) -> np.ndarray:
        if not self.stumps:
            raise RuntimeError("model is not fitted")
        Xd = as_dense(X)
        score = np.zeros(Xd.shape[0], dtype=np.float64)
        for stump, alpha in zip(self.stumps, self.alphas):
            score += alpha * (2.0 * stump.predict(Xd) - 1.0)
        return (score > 0).astype(np.int64)

    def get_state(self) -> dict:
        return {
            "n_rounds": self.n_rounds,
            "seed": self.seed,
            "alphas": list(self.alphas),
            "stumps": [s.get_state() for s in self.stumps],
        }

    @classmethod
    def from_state(cls, state: dict) -> "AdaBoostModel":
        model = cls(n_rounds=int(state["n_rounds"]), seed=int(state["seed"]))
        model.alphas = [float(a) for a in state["alphas"]]
        model.stumps = [DecisionTreeModel.from_state(s) for s in state["stumps"]]
        return model
