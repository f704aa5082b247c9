"""Deep Taylor decomposition of one-class SVM scores.

Inlierness is redistributed onto support vectors (``R_j = alpha_j k_j``).
Outlierness is redistributed onto support vectors by a first-order Taylor
expansion of the pooling layer, then onto input variables by integrated
gradients of ``R_j = C_j ||x - u_j||**q + D_j``, which has the closed form::

    R = sum_j [(x - u_j) / ||x - u_j||]**2 * Delta_j,   Delta_j = R_j - max(0, D_j)
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import SingularPointError
from .ocsvm import kernel_values, powdists
from .measures import effective_distances

SINGULAR_RADIUS = 1e-12


@dataclass(frozen=True)
class SvRelevance:
    r: np.ndarray
    delta: np.ndarray
    o: float
    aux: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Heatmap:
    r: np.ndarray
    total: float
    shape: Optional[tuple] = None

    @classmethod
    def from_values(cls, r, shape=None):
        r = np.asarray(r, dtype=float)
        return cls(r=r.ravel(), total=float(r.sum()), shape=shape)

    def grid(self):
        return self.r.reshape(self.shape) if self.shape else self.r


def student_coefficients(h):
    """Pooling weights ``c_j = m (1/h_j)**2 / (sum 1/h)**2`` of the harmonic mean.

    Equal to ``H((h_j'/h_j)_j')**2 / m``; invariant to rescaling ``h``.
    Works on the last axis.
    """
    inv = 1.0 / np.asarray(h, dtype=float)
    w = inv / inv.sum(axis=-1, keepdims=True)
    return inv.shape[-1] * w * w


def softmin_coefficients(h):
    """Softmin weights ``p_j`` and offsets ``eps_j = -LSE(-(h - h_j))``.

    Both are invariant to adding a constant to ``h``.  Works on the last axis.
    """
    h = np.asarray(h, dtype=float)
    lo = h.min(axis=-1, keepdims=True)
    e = np.exp(lo - h)
    s = e.sum(axis=-1, keepdims=True)
    p = e / s
    eps = (lo - h) - np.log(s)
    # -LSE(-(h - h_j)) <= min(h) - h_j <= 0
    return p, np.minimum(eps, 0.0)


def _outlier_terms(model, X):
    """Per-point, per-support-vector quantities for rows of ``X``."""
    d = powdists(model, X)
    h = effective_distances(model, d)
    spec = model.kernel
    if spec.is_exponential:
        p, eps = softmin_coefficients(h)
        lo = h.min(axis=1)
        o = lo - np.log(np.exp(lo[:, None] - h).sum(axis=1))
        r = p * o[:, None]
        delta = p * np.minimum(o[:, None], spec.scaled(d))
        aux = {"p": p, "eps": eps}
    else:
        c = student_coefficients(h)
        inv = 1.0 / h
        w = inv / inv.sum(axis=1, keepdims=True)
        o = h.shape[1] / inv.sum(axis=1)
        r = h * c
        delta = w * (d / (spec.a + d)) * o[:, None]
        aux = {"c": c}
    return d, h, o, r, delta, aux


def explain_inlier(model, x):
    """Sum-pooling redistribution ``R_j = alpha_j k(||x - u_j||)``."""
    s = kernel_values(model, np.asarray(x, dtype=float)[None, :])[0] * model.alphas
    return SvRelevance(r=s, delta=np.zeros_like(s), o=float(s.sum()))


def sv_relevance(model, x):
    """Outlierness redistributed onto support vectors."""
    d, h, o, r, delta, aux = _outlier_terms(model, np.asarray(x, dtype=float)[None, :])
    aux = {k: v[0] for k, v in aux.items()}
    aux["h"] = h[0]
    return SvRelevance(r=r[0], delta=delta[0], o=float(o[0]), aux=aux)


def decomposable_relevance(model, x):
    """``Delta_j``: the part of ``R_j`` that integrated gradients can pass down."""
    return sv_relevance(model, x).delta


def input_relevance_batch(model, X, chunk_elems=2**22):
    """Input relevance for every row of ``X``; returns an (n, d) array."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    U = model.support_vectors
    n, dim = X.shape
    out = np.empty((n, dim))
    step = max(1, chunk_elems // max(1, model.m * dim))
    for s in range(0, n, step):
        Xc = X[s : s + step]
        delta = _outlier_terms(model, Xc)[4]
        Z2 = (Xc[:, None, :] - U[None, :, :]) ** 2
        norm2 = Z2.sum(axis=2)
        # a coincident support vector has Delta_j = 0 and contributes nothing
        coef = np.divide(delta, norm2, out=np.zeros_like(delta), where=norm2 > 0)
        out[s : s + step] = np.einsum("nmd,nm->nd", Z2, coef)
    return out


def input_relevance(model, x):
    """Heatmap of outlierness over input variables for one point."""
    return Heatmap.from_values(input_relevance_batch(model, x)[0])


def sa_gradient(model, x):
    """Analytic gradient of the outlier score at ``x``."""
    x = np.asarray(x, dtype=float)
    spec = model.kernel
    Z = x[None, :] - model.support_vectors
    norm = np.linalg.norm(Z, axis=1)
    if spec.q < 2 and np.any(norm <= SINGULAR_RADIUS):
        raise SingularPointError("gradient undefined at a support vector for q < 2")
    d = norm**spec.q
    h = effective_distances(model, d)
    with np.errstate(divide="ignore", invalid="ignore"):
        radial = np.where(norm > 0, norm ** (spec.q - 2), 1.0 if spec.q == 2 else 0.0)
    if spec.is_exponential:
        p, _ = softmin_coefficients(h)
        coef = p * radial / spec.sigma**spec.q
    else:
        coef = student_coefficients(h) / model.alphas * spec.q * radial
    return coef @ Z
