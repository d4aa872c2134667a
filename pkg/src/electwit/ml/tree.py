"""CART decision tree (Gini impurity) on top of the split-search kernels.

Trees densify their inputs: split search needs column access, and the
corpora this package targets stay desk-scale. Split-gain ties break toward
the lowest feature index, then the lowest threshold; leaf ties toward
class 0.
"""

from __future__ import annotations

import numpy as np
from scipy import sparse

from electwit import kernels


def as_dense(X) -> np.ndarray:
    if sparse.issparse(X):
        return np.asarray(X.todense(), dtype=np.float64)
    return np.asarray(X, dtype=np.float64)


def tree_predict(feature, threshold, left, right, value, X) -> np.ndarray:
    """Route every row of X to its leaf; returns int64 class labels."""
    Xd = as_dense(X)
    n = Xd.shape[0]
    cur = np.zeros(n, dtype=np.int64)
    while True:
        active = np.nonzero(feature[cur] >= 0)[0]
        if active.size == 0:
            break
        nodes = cur[active]
        f = feature[nodes]
        go_left = Xd[active, f] <= threshold[nodes]
        cur[active] = np.where(go_left, left[nodes], right[nodes])
    return value[cur].astype(np.int64)


class DecisionTreeModel:
    """Binary CART classifier.

    ``max_features`` > 0 enables random-forest mode: that many candidate
    features are drawn per split from the xorshift stream seeded by
    ``feature_seed``.
    """

    kind = "decision_tree"
    param_names = frozenset({"max_depth"})

    def __init__(self, max_depth: int | None = None, max_features: int = 0, feature_seed: int = 0):
        self.max_depth = max_depth
        self.max_features = max_features
        self.feature_seed = feature_seed
        self.nodes = None

    def fit(self, X, y, sample_weight=None) -> "DecisionTreeModel":
        Xd = np.asfortranarray(as_dense(X))
        ya = np.ascontiguousarray(y, dtype=np.int8)
        if sample_weight is None:
            w = np.ones(Xd.shape[0], dtype=np.float64)
        else:
            w = np.ascontiguousarray(sample_weight, dtype=np.float64)
        depth = -1 if self.max_depth is None else int(self.max_depth)
        self.nodes = kernels.build_tree(Xd, ya, w, depth, self.max_features, self.feature_seed)
        return self

    @property
    def n_nodes(self) -> int:
        return 0 if self.nodes is None else len(self.nodes[0])

    def predict(self, X) -> np.ndarray:
        if self.nodes is None:
            raise RuntimeError("model is not fitted")
        return tree_predict(*self.nodes, X)

    def get_state(self) -> dict:
        feature, threshold, left, right, value = self.nodes
        return {
            "max_depth": self.max_depth,
            "max_features": self.max_features,
            "feature_seed": self.feature_seed,
            "feature": feature,
            "threshold": threshold,
            "left": left,
            "right": right,
            "value": value,
        }

    @classmethod
    def from_state(cls, state: dict) -> "DecisionTreeModel":
        model = cls(
            max_depth=state["max_depth"],
            max_features=int(state["max_features"]),
            feature_seed=int(state["feature_seed"]),
        )
        model.nodes = (
            np.asarray(state["feature"], dtype=np.int32),
            np.asarray(state["threshold"], dtype=np.float64),
            np.asarray(state["left"], dtype=np.int32),
            np.asarray(state["right"], dtype=np.int32),
            np.asarray(state["value"], dtype=np.int8),
        )
        return model
