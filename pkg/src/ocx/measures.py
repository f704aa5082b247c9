"""Inlierness/outlierness measures and their two-layer network form.

For exponential kernels ``o(x) = -log g(x)``; for t-Student kernels
``o(x) = m / g(x)``.  The same quantity is produced by a detection layer of
effective distances ``h_j`` followed by a soft min-pooling (negated
log-sum-exp of ``-h``, or the harmonic mean).
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .errors import DomainError, ParameterError
from .ocsvm import discriminant, powdists

G_FLOOR = 1e-300


@dataclass(frozen=True)
class Activations:
    h: np.ndarray
    o: float
    family: str


def harmonic_mean(v):
    """``m / sum(1 / v_j)`` for a positive vector ``v``."""
    v = np.asarray(v, dtype=float)
    if v.size == 0 or np.any(~(v > 0)):
        raise DomainError("harmonic mean needs strictly positive entries")
    return float(v.size / np.sum(1.0 / v))


def neg_lse_pool(h):
    """``-log sum_j exp(-h_j)`` evaluated around ``min(h)``."""
    h = np.asarray(h, dtype=float)
    if h.size == 0 or not np.all(np.isfinite(h)):
        raise DomainError("pooling needs a nonempty finite vector")
    lo = h.min()
    return float(lo - np.log(np.sum(np.exp(lo - h))))


def inlierness(model, x):
    return discriminant(model, x)


def outlierness(model, x):
    """Outlier score computed from the discriminant.

    Vectorized over rows of ``x``.  When ``g`` underflows below ``G_FLOOR`` for
    an exponential kernel the logarithm is taken in the log domain instead, so
    the score keeps growing with distance rather than saturating.
    """
    x = np.asarray(x, dtype=float)
    d = powdists(model, x)
    o = outlierness_from_powdists(model, d)
    return float(o[0]) if x.ndim == 1 else o


def outlierness_from_powdists(model, powdist):
    """Outlier score from ``||x - u_j||**q`` given as an array (..., m)."""
    spec = model.kernel
    a = model.alphas
    if spec.is_exponential:
        scaled = spec.scaled(powdist)
        g = (np.exp(-scaled) * a).sum(axis=-1)
        # dividing by sum(a) (1 up to rounding) makes o exactly 0 when all
        # distances vanish, since the two sums are then computed identically
        total = a.sum()
        with np.errstate(divide="ignore"):
            o = 0.0 - np.log(np.maximum(g / total, G_FLOOR))  # no -0.0 at g == 1
        tiny = g < G_FLOOR
        if np.any(tiny):
            o = np.where(tiny, np.log(total) - logsumexp(np.log(a) - scaled, axis=-1), o)
        return o
    g = (a / spec.scaled(powdist)).sum(axis=-1)
    return model.m / np.maximum(g, G_FLOOR)


def detection_activations(model, x):
    """Layer-1 effective distances and the pooled output for a single point."""
    if np.any(model.alphas <= 0):
        raise ParameterError("effective distances need positive coefficients")
    d = powdists(model, np.asarray(x, dtype=float)[None, :])[0]
    h = effective_distances(model, d)
    if model.kernel.is_exponential:
        o = neg_lse_pool(h)
    else:
        o = harmonic_mean(h)
    return Activations(h=h, o=o, family=model.kernel.family)


def effective_distances(model, powdist):
    """``h_j`` from powered distances (..., m)."""
    spec = model.kernel
    if spec.is_exponential:
        return -np.log(model.alphas) + spec.scaled(powdist)
    return spec.scaled(powdist) / model.alphas


def outlierness_via_network(model, x):
    return detection_activations(model, x).o
