"""Soft-margin RBF SVM trained with simplified SMO.

The dual problem is solved by sweeping all multipliers, pairing each KKT
violator with a random partner and optimizing the pair analytically. Sweeps
stop after ``max_passes`` consecutive clean sweeps or the ``max_sweeps``
hard cap. The full kernel matrix is precomputed, which bounds the model to
roughly 10k training rows; that covers this package's desk-scale corpora.
"""

from __future__ import annotations

import numpy as np

from electwit import kernels
from electwit.ml.tree import as_dense

_KERNEL_BYTES_LIMIT = 1_200_000_000


def rbf_kernel(A: np.ndarray, B: np.ndarray, gamma: float) -> np.ndarray:
    """exp(-gamma * ||a - b||^2) for all row pairs, dense float64."""
    a2 = np.einsum("ij,ij->i", A, A)
    b2 = np.einsum("ij,ij->i", B, B)
    d = a2[:, None] + b2[None, :] - 2.0 * (A @ B.T)
    np.maximum(d, 0.0, out=d)
    return np.exp(-gamma * d, out=d)


class SvmRbfModel:
    kind = "svm_rbf"
    param_names = frozenset({"C", "gamma"})

    def __init__(
        self,
        C: float = 1.0,
        gamma: float = 0.1,
        tol: float = 1e-3,
        max_passes: int = 10,
        max_sweeps: int = 200,
        seed: int = 0,
    ):
        if C <= 0 or gamma <= 0:
            raise ValueError("C and gamma must be positive")
        self.C = float(C)
        self.gamma = float(gamma)
        self.tol = float(tol)
        self.max_passes = int(max_passes)
        self.max_sweeps = int(max_sweeps)
        self.seed = seed
        self.sv_x = None
        self.sv_coef = None  # alpha_i * y_i for support vectors
        self.bias = 0.0

    def fit(self, X, y) -> "SvmRbfModel":
        Xd = as_dense(X)
        n = Xd.shape[0]
        if n * n * 8 > _KERNEL_BYTES_LIMIT:
            raise MemoryError(
                f"kernel matrix for {n} samples exceeds the in-memory budget; "
                "subsample the training set"
            )
        yf = (2.0 * np.asarray(y, dtype=np.float64) - 1.0)
        K = rbf_kernel(Xd, Xd, self.gamma)
        alpha = np.zeros(n, dtype=np.float64)
        b = 0.0
        state = (int(self.seed) & (2**64 - 1)) or 1
        passes = 0
        sweeps = 0
        while passes < self.max_passes and sweeps < self.max_sweeps:
            changed, b, state = kernels.smo_epoch(K, yf, alpha, b, self.C, self.tol, state)
            sweeps += 1
            passes = passes + 1 if changed == 0 else 0
        sv = alpha > 1e-12
        self.sv_x = Xd[sv]
        self.sv_coef = alpha[sv] * yf[sv]
        self.bias = float(b)
        return self

    def decision_function(self, X) -> np.ndarray:
        if self.sv_x is None:
            raise RuntimeError("model is not fitted")
        Xd = as_dense(X)
        if self.sv_x.shape[0] == 0:
            return np.full(Xd.shape[0], self.bias)
        K = rbf_kernel(self.sv_x, Xd, self.gamma)
        return self.sv_coef @ K + self.bias

    def predict(self, X) -> np.ndarray:
        return (self.decision_function(X) > 0).astype(np.int64)

    def get_state(self) -> dict:
        return {
            "C": self.C,
            "gamma": self.gamma,
            "tol": self.tol,
            "max_passes": self.max_passes,
            "max_sweeps": self.max_sweeps,
            "seed": self.seed,
            "sv_x": self.sv_x,
            "sv_coef": self.sv_coef,
            "bias": self.bias,
        }

    @classmethod
    def from_state(cls, state: dict) -> "SvmRbfModel":
        model = cls(
            C=state["C"],
            gamma=state["gamma"],
            tol=state["tol"],
            max_passes=int(state["max_passes"]),
            max_sweeps=int(state["max_sweeps"]),
            seed=int(state["seed"]),
        )
        model.sv_x = np.asarray(state["sv_x"], dtype=np.float64)
        model.sv_coef = np.asarray(state["sv_coef"], dtype=np.float64)
        model.bias = float(state["bias"])
        return model
