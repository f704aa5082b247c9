"""nu-one-class SVM trained by sequential minimal optimization.

The dual problem solved here is::

    min_alpha  1/2 alpha^T K alpha
    s.t.       sum(alpha) = 1,  0 <= alpha_i <= 1 / (nu n)

which is the usual nu-formulation rescaled so that the coefficients sum to one.
The discriminant is ``g(x) = sum_j alpha_j k(||x - u_j||)`` and points with
``g(x) < rho`` are outliers.
"""

import json
import logging
from collections import OrderedDict
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, ParameterError, ShapeError
from .kernels import KernelSpec, kernel_from_powdist, sq_distances

log = logging.getLogger(__name__)

ALPHA_PRUNE = 1e-12


@dataclass(frozen=True, eq=False)
class OneClassModel:
    support_vectors: np.ndarray
    alphas: np.ndarray
    kernel: KernelSpec
    nu: float
    rho: float
    n_train: int
    info: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        U = np.atleast_2d(np.asarray(self.support_vectors, dtype=float))
        a = np.asarray(self.alphas, dtype=float).ravel()
        if U.shape[0] != a.shape[0]:
            raise ShapeError(f"{U.shape[0]} support vectors but {a.shape[0]} coefficients")
        if a.size == 0:
            raise ParameterError("a model needs at least one support vector")
        if np.any(a <= 0):
            raise ParameterError("support vector coefficients must be positive")
        U.setflags(write=False)
        a.setflags(write=False)
        object.__setattr__(self, "support_vectors", U)
        object.__setattr__(self, "alphas", a)

    @property
    def m(self):
        return self.alphas.shape[0]

    @property
    def dim(self):
        return self.support_vectors.shape[1]

    @property
    def upper_bound(self):
        return 1.0 / (self.nu * self.n_train)

    def to_dict(self):
        return {
            "kernel": self.kernel.to_dict(),
            "nu": self.nu,
            "rho": self.rho,
            "n_train": self.n_train,
            "alphas": self.alphas.tolist(),
            "support_vectors": self.support_vectors.tolist(),
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            support_vectors=np.array(d["support_vectors"], dtype=float),
            alphas=np.array(d["alphas"], dtype=float),
            kernel=KernelSpec.from_dict(d["kernel"]),
            nu=float(d["nu"]),
            rho=float(d["rho"]),
            n_train=int(d.get("n_train", len(d["alphas"]))),
        )

    def to_json(self, **extra):
        # json's float repr is the shortest round-trip decimal
        return json.dumps({**self.to_dict(), **extra})

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def make_model(support_vectors, alphas, kernel, nu=1.0, rho=0.0, n_train=None):
    """Build a model from raw coefficients (renormalized to sum to one)."""
    a = np.asarray(alphas, dtype=float)
    return OneClassModel(
        support_vectors=support_vectors,
        alphas=a / a.sum(),
        kernel=kernel,
        nu=nu,
        rho=rho,
        n_train=n_train if n_train is not None else a.size,
    )


class KernelRows:
    """On-demand kernel matrix rows with an LRU cache of ``capacity`` rows."""

    def __init__(self, X, kernel, capacity):
        self.X = X
        self.kernel = kernel
        self.capacity = max(2, int(capacity))
        self._rows = OrderedDict()
        self.diag = np.full(X.shape[0], kernel.k0)

    def __getitem__(self, i):
        row = self._rows.get(i)
        if row is not None:
            self._rows.move_to_end(i)
            return row
        d2 = sq_distances(self.X[i : i + 1], self.X)[0]
        row = kernel_from_powdist(self.kernel, d2 ** (self.kernel.q / 2))
        self._rows[i] = row
        if len(self._rows) > self.capacity:
            self._rows.popitem(last=False)
        return row


def _initial_alphas(n, C):
    alpha = np.zeros(n)
    k = min(n, int(np.floor(1.0 / C)))
    alpha[:k] = C
    if k < n:
        alpha[k] = 1.0 - k * C
    return alpha


def train(data, kernel, nu=0.1, tol=1e-6, max_iter=10_000_000, cache_rows=4096,
          record_objective=False):
    """Solve the one-class dual by maximal-violating-pair SMO.

    Raises ``ConvergenceError`` (carrying the current iterate as a model) when
    the KKT gap is still above ``tol`` after ``max_iter`` pair updates.
    """
    X = np.asarray(data, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    n = X.shape[0]
    if n < 2:
        raise ParameterError("training needs at least two rows")
    if not 0 < nu <= 1:
        raise ParameterError(f"nu must lie in (0, 1], got {nu}")
    if not tol > 0:
        raise ParameterError(f"tol must be positive, got {tol}")
    if nu * n < 1:
        raise ParameterError(f"nu * n = {nu * n} < 1: coefficient bound exceeds 1")

    C = 1.0 / (nu * n)
    K = KernelRows(X, kernel, cache_rows)
    alpha = _initial_alphas(n, C)
    G = np.zeros(n)
    for i in np.flatnonzero(alpha):
        G += alpha[i] * K[i]
    objective = 0.5 * alpha @ G
    trace = [objective] if record_objective else None

    it = 0
    gap = np.inf
    while True:
        up = alpha < C
        low = alpha > 0
        # lowest index wins ties
        i = int(np.argmin(np.where(up, G, np.inf)))
        j = int(np.argmax(np.where(low, G, -np.inf)))
        gap = G[j] - G[i]
        if gap <= tol:
            break
        if it >= max_iter:
            best = _finish(X, alpha, G, kernel, nu, C)
            raise ConvergenceError(
                f"KKT gap {gap:.3g} > tol after {it} iterations", model=best
            )
        Ki, Kj = K[i], K[j]
        eta = K.diag[i] + K.diag[j] - 2.0 * Ki[j]
        if eta <= 0:
            eta = 1e-12
        delta = min(gap / eta, C - alpha[i], alpha[j])
        if delta == C - alpha[i]:
            alpha[i] = C
        else:
            alpha[i] += delta
        if delta == alpha[j]:
            alpha[j] = 0.0
        else:
            alpha[j] -= delta
        G += delta * (Ki - Kj)
        objective += -delta * gap + 0.5 * delta * delta * eta
        if trace is not None:
            trace.append(objective)
        it += 1

    model = _finish(X, alpha, G, kernel, nu, C)
    model.info.update(n_iter=it, kkt_gap=float(gap), objective=float(objective))
    if trace is not None:
        model.info["objective_trace"] = np.array(trace)
    log.debug("SMO converged after %d iterations, m=%d, rho=%.6g", it, model.m, model.rho)
    return model


def _finish(X, alpha, G, kernel, nu, C):
    keep = alpha > ALPHA_PRUNE
    a = alpha[keep]
    a = a / a.sum()
    free = keep & (alpha < C * (1 - 1e-9))
    if free.any():
        # free support vectors all sit on the boundary up to the KKT tolerance;
        # the smallest one is used so that every free support vector is an inlier
        model = OneClassModel(X[keep], a, kernel, nu, 0.0, X.shape[0])
        rho = float(discriminant(model, X[free]).min())
    else:
        hi = G[alpha < C].min() if (alpha < C).any() else G.max()
        lo = G[alpha > 0].max()
        rho = float(0.5 * (hi + lo))
    return OneClassModel(X[keep], a, kernel, nu, rho, X.shape[0])


def kernel_values(model, X):
    """Kernel evaluations ``k(||x - u_j||)`` for each row of ``X``: shape (n, m)."""
    return kernel_from_powdist(model.kernel, powdists(model, X))


def powdists(model, X):
    """``||x - u_j||**q`` for each row of ``X``: shape (n, m)."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != model.dim:
        raise ShapeError(f"expected dimension {model.dim}, got {X.shape[1]}")
    d2 = sq_distances(X, model.support_vectors)
    return d2 if model.kernel.q == 2 else d2 ** (model.kernel.q / 2)


def discriminant(model, x):
    """``g(x) = sum_j alpha_j k(||x - u_j||)``; vectorized over rows of ``x``."""
    x = np.asarray(x, dtype=float)
    # row-wise reduction: a point scores identically alone or inside a batch
    g = (kernel_values(model, x) * model.alphas).sum(axis=1)
    return float(g[0]) if x.ndim == 1 else g


def decide(model, x):
    """``"inlier"`` if ``g(x) >= rho`` else ``"outlier"``; an array of labels for rows."""
    g = discriminant(model, x)
    if np.ndim(g) == 0:
        return "inlier" if g >= model.rho else "outlier"
    return np.where(g >= model.rho, "inlier", "outlier")


def outlier_mask(model, X):
    return discriminant(model, np.atleast_2d(X)) < model.rho
