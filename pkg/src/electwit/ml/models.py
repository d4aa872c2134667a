"""Model zoo: specs, default hyperparameter grids, train/predict dispatch.

Six classifier kinds are supported: svm_rbf, logistic_regression,
decision_tree, random_forest, adaboost, gaussian_nb. Every model is
seeded-deterministic; the seed lives on the ModelSpec.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from electwit.features import FeatureMatrix
from electwit.ml.ensemble import AdaBoostModel, RandomForestModel
from electwit.ml.svm import SvmRbfModel
from electwit.ml.tree import DecisionTreeModel

KINDS = (
    "svm_rbf",
    "logistic_regression",
    "decision_tree",
    "random_forest",
    "adaboost",
    "gaussian_nb",
)

DEFAULT_GRIDS: dict[str, list[dict]] = {
    "logistic_regression": [{"C": c} for c in (0.01, 0.1, 1.0, 10.0)],
    "decision_tree": [{"max_depth": d} for d in (5, 10, None)],
    "random_forest": [
        {"n_trees": t, "max_depth": d} for t in (50, 100) for d in (5, 10, None)
    ],
    "adaboost": [{"n_rounds": r} for r in (50, 100)],
    "svm_rbf": [{"C": c, "gamma": g} for c in (0.1, 1.0, 10.0) for g in (0.01, 0.1, 1.0)],
    "gaussian_nb": [{}],
}


@dataclass(frozen=True)
class ModelSpec:
    kind: str
    hyperparameters: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}; expected one of {KINDS}")


def default_grid(kind: str, seed: int = 0) -> list[ModelSpec]:
    """The documented hyperparameter grid for one model kind, in declaration order."""
    if kind not in KINDS:
        raise ValueError(f"unknown model kind {kind!r}")
    return [ModelSpec(kind=kind, hyperparameters=dict(hp), seed=seed) for hp in DEFAULT_GRIDS[kind]]


def _values(features):
    """Accept FeatureMatrix, ndarray, or scipy sparse."""
    return features.values if isinstance(features, FeatureMatrix) else features


class GaussianNBModel:
    """Gaussian naive Bayes with a variance floor.

    Per-class per-feature variances are floored at 1e-9 times the largest
    overall feature variance (an absolute 1e-9 when every feature is
    constant). Posterior ties resolve to class 0.
    """

    kind = "gaussian_nb"
    param_names = frozenset()

    def __init__(self, seed: int = 0):
        self.seed = seed
        self.log_priors = None
        self.means = None  # (2, d)
        self.variances = None  # (2, d)

    @staticmethod
    def _moments(X, n: int):
        if sparse.issparse(X):
            s1 = np.asarray(X.sum(axis=0)).ravel()
            s2 = np.asarray(X.multiply(X).sum(axis=0)).ravel()
        else:
            s1 = X.sum(axis=0)
            s2 = (X * X).sum(axis=0)
        mean = s1 / n
        var = np.maximum(s2 / n - mean * mean, 0.0)
        return mean, var

    def fit(self, X, y) -> "GaussianNBModel":
        ya = np.asarray(y, dtype=np.int64)
        n = ya.size
        _, overall_var = self._moments(X, n)
        vmax = float(overall_var.max()) if overall_var.size else 0.0
        eps = 1e-9 * vmax if vmax > 0 else 1e-9
        means, variances, priors = [], [], []
        for cls in (0, 1):
            idx = np.nonzero(ya == cls)[0]
            Xc = X[idx]
            mean, var = self._moments(Xc, idx.size)
            means.append(mean)
            variances.append(np.maximum(var, eps))
            priors.append(idx.size / n)
        self.means = np.vstack(means)
        self.variances = np.vstack(variances)
        self.log_priors = np.log(np.asarray(priors))
        return self

    def _joint_log_likelihood(self, X) -> np.ndarray:
        n = X.shape[0]
        jll = np.empty((n, 2), dtype=np.float64)
        if sparse.issparse(X):
            Xsq = X.multiply(X)
        else:
            Xsq = X * X
        for cls in (0, 1):
            mu = self.means[cls]
            var = self.variances[cls]
            const = -0.5 * np.sum(np.log(2.0 * np.pi * var)) - 0.5 * np.sum(mu * mu / var)
            lin = np.asarray(X @ (mu / var)).ravel()
            quad = np.asarray(Xsq @ (1.0 / var)).ravel()
            jll[:, cls] = self.log_priors[cls] + const + lin - 0.5 * quad
        return jll

    def predict(self, X) -> np.ndarray:
        if self.means is None:
            raise RuntimeError("model is not fitted")
        jll = self._joint_log_likelihood(X)
        return (jll[:, 1] > jll[:, 0]).astype(np.int64)

    def get_state(self) -> dict:
        return {
            "seed": self.seed,
            "log_priors": self.log_priors,
            "means": self.means,
            "variances": self.variances,
        }

    @classmethod
    def from_state(cls, state: dict) -> "GaussianNBModel":
        model = cls(seed=int(state["seed"]))
        model.log_priors = np.asarray(state["log_priors"], dtype=np.float64)
        model.means = np.asarray(state["means"], dtype=np.float64)
        model.variances = np.asarray(state["variances"], dtype=np.float64)
        return model


class LogisticRegressionModel:
    """L2-regularized logistic regression trained by full-batch gradient descent.

    Steps use the fixed size 1/L with L the gradient's Lipschitz bound
    (largest singular value of the design matrix via power iteration).
    Training stops when the gradient norm drops below ``tol`` or after
    ``max_epochs`` updates. The intercept is unregularized.
    """

    kind = "logistic_regression"
    param_names = frozenset({"C"})

    def __init__(self, C: float = 1.0, tol: float = 1e-6, max_epochs: int = 5000, seed: int = 0):
        if C <= 0:
            raise ValueError("C must be positive")
        self.C = float(C)
        self.tol = float(tol)
        self.max_epochs = int(max_epochs)
        self.seed = seed
        self.coef = None
        self.intercept = 0.0

    @staticmethod
    def _sq_spectral_norm(X) -> float:
        d = X.shape[1]
        v = np.full(d, 1.0 / np.sqrt(d))
        s = 0.0
        for _ in range(64):
            u = X @ v
            v2 = X.T @ u
            v2 = np.asarray(v2).ravel()
            s = float(np.linalg.norm(v2))
            if s == 0.0:
                return 0.0
            v = v2 / s
        return s

    @staticmethod
    def _sigmoid(z: np.ndarray) -> np.ndarray:
        out = np.empty_like(z)
        pos = z >= 0
        out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
        ez = np.exp(z[~pos])
        out[~pos] = ez / (1.0 + ez)
        return out

    def fit(self, X, y) -> "LogisticRegressionModel":
        ya = np.asarray(y, dtype=np.float64)
        n, d = X.shape
        lam = 1.0 / (self.C * n)
        lipschitz = self._sq_spectral_norm(X) / (4.0 * n) + lam
        step = 1.0 / lipschitz
        w = np.zeros(d, dtype=np.float64)
        b = 0.0
        for _ in range(self.max_epochs):
            z = np.asarray(X @ w).ravel() + b
            residual = (self._sigmoid(z) - ya) / n
            gw = np.asarray(X.T @ residual).ravel() + lam * w
            gb = float(residual.sum())
            gnorm = np.sqrt(float(gw @ gw) + gb * gb)
            if gnorm < self.tol:
                break
            w -= step * gw
            b -= step * gb
        self.coef = w
        self.intercept = b
        return self

    def decision_function(self, X) -> np.ndarray:
        if self.coef is None:
            raise RuntimeError("model is not fitted")
        return np.asarray(X @ self.coef).ravel() + self.intercept

    def predict(self, X) -> np.ndarray:
        return (self.decision_function(X) > 0).astype(np.int64)

    def get_state(self) -> dict:
        return {
            "C": self.C,
            "tol": self.tol,
            "max_epochs": self.max_epochs,
            "seed": self.seed,
            "coef": self.coef,
            "intercept": self.intercept,
        }

    @classmethod
    def from_state(cls, state: dict) -> "LogisticRegressionModel":
        model = cls(
            C=state["C"],
            tol=state["tol"],
            max_epochs=int(state["max_epochs"]),
            seed=int(state["seed"]),
        )
        model.coef = np.asarray(state["coef"], dtype=np.float64)
        model.intercept = float(state["intercept"])
        return model


MODEL_CLASSES = {
    "svm_rbf": SvmRbfModel,
    "logistic_regression": LogisticRegressionModel,
    "decision_tree": DecisionTreeModel,
    "random_forest": RandomForestModel,
    "adaboost": AdaBoostModel,
    "gaussian_nb": GaussianNBModel,
}


def build_model(spec: ModelSpec, threads: int = 1):
    """Instantiate an unfitted model from a spec, validating parameter names."""
    cls = MODEL_CLASSES[spec.kind]
    unknown = set(spec.hyperparameters) - cls.param_names
    if unknown:
        raise ValueError(f"{spec.kind} does not accept parameters {sorted(unknown)}")
    kwargs = dict(spec.hyperparameters)
    if spec.kind == "decision_tree":
        return cls(feature_seed=spec.seed, **kwargs)
    if spec.kind == "random_forest":
        return cls(seed=spec.seed, threads=threads, **kwargs)
    return cls(seed=spec.seed, **kwargs)


def train(spec: ModelSpec, train_data, threads: int = 1):
    """Fit a model on a Dataset; validates features and labels first."""
    train_data.validate()
    labels = np.asarray(train_data.labels)
    if labels.size == 0:
        raise ValueError("cannot train on an empty dataset")
    if np.unique(labels).size < 2:
        raise ValueError("training labels are constant; need both classes")
    model = build_model(spec, threads=threads)
    model.fit(train_data.features.values, labels)
    return model


def predict(model, features) -> np.ndarray:
    """Predict binary labels for a FeatureMatrix or raw matrix."""
    return model.predict(_values(features))
