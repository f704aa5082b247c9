"""Pixel flipping in the feature space of differences to support vectors.

A point ``x`` is represented by the d x m matrix ``Psi`` whose column ``j`` is
``x - u_j``.  Flipping input variable ``i`` zeroes row ``i`` of ``Psi``, which
removes that variable's contribution to every support-vector distance.  Once
all rows are zeroed the point coincides with every support vector.
"""

from dataclasses import dataclass

import numpy as np

from . import baselines
from .dtd import input_relevance
from .errors import ParameterError, ShapeError, UndefinedAUCError
from .measures import outlierness_from_powdists

METHODS = ("dtd", "sa", "nn", "ev", "sobel", "random")


@dataclass(frozen=True)
class FlipCurve:
    scores: np.ndarray
    order: np.ndarray
    method: str = ""

    @property
    def fractions(self):
        d = self.scores.size - 1
        return np.arange(d + 1) / d


def _check_order(order, d):
    order = np.asarray(order, dtype=int)
    if order.shape != (d,) or not np.array_equal(np.sort(order), np.arange(d)):
        raise ParameterError(f"order must be a permutation of 0..{d - 1}")
    return order


def flip_curve(model, x, order, method=""):
    """Outlier scores after flipping 0, 1, ..., d variables in ``order``."""
    x = np.asarray(x, dtype=float)
    if x.shape != (model.dim,):
        raise ShapeError(f"expected a vector of length {model.dim}, got shape {x.shape}")
    order = _check_order(order, model.dim)
    S = ((x[None, :] - model.support_vectors) ** 2)[:, order]
    # remaining squared column norms after k flips are suffix sums over the order;
    # the last entry is exactly zero
    remaining = np.zeros((model.dim + 1, model.m))
    remaining[:-1] = np.cumsum(S[:, ::-1], axis=1)[:, ::-1].T
    q = model.kernel.q
    powdist = remaining if q == 2 else remaining ** (q / 2)
    scores = outlierness_from_powdists(model, powdist)
    return FlipCurve(scores=scores, order=order, method=method)


def flip_auc(curve):
    """Area under the score curve over the flipped fraction, relative to the start."""
    s = np.asarray(curve.scores, dtype=float)
    if s[0] == 0:
        raise UndefinedAUCError("flip curve starts at zero")
    return float(np.trapezoid(s / s[0], curve.fractions))


def order_from_heatmap(heatmap):
    """Indices by decreasing relevance; ties keep the lower index first."""
    r = heatmap.r if hasattr(heatmap, "r") else np.asarray(heatmap, dtype=float)
    return np.argsort(-np.asarray(r, dtype=float).ravel(), kind="stable")


def method_order(method, model, x, seed=0, shape=None):
    """Flip order produced by one of ``METHODS``.

    ``shape`` (H, W) or (H, W, C) is needed for ``sobel`` only; the Sobel map is
    shared across channels.
    """
    if method == "random":
        return baselines.random_order(model.dim, seed)
    if method == "dtd":
        hm = input_relevance(model, x)
    elif method == "sa":
        hm = baselines.sensitivity(model, x)
    elif method == "nn":
        hm = baselines.nn_map(model, x)
    elif method == "ev":
        hm = baselines.ev_map(model, x)
    elif method == "sobel":
        if shape is None or int(np.prod(shape)) != model.dim:
            raise ParameterError("sobel ordering needs an image shape matching the input")
        img = np.asarray(x, dtype=float).reshape(shape)
        sob = baselines.sobel_map(img).grid()
        if len(shape) == 3:
            sob = np.repeat(sob[:, :, None], shape[2], axis=2)
        hm = sob.ravel()
    else:
        raise ParameterError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    return order_from_heatmap(hm)


def gen_two_panel(n, class_gen_a, class_gen_b, seed=0, blank=None):
    """Two-panel samples: ``n`` each of inliers, type-I and type-II outliers.

    ``class_gen_a(rng, k)`` and ``class_gen_b(rng, k)`` return (k, w) panels.
    Inliers are (A, blank), type-I outliers (A, B), type-II outliers (B, B').
    Returns the (3n, 2w) data and a matching array of labels.
    """
    rng = np.random.default_rng(seed)
    if n == 0:
        return np.zeros((0, 0)), np.array([], dtype=object)
    a_in = class_gen_a(rng, n)
    w = a_in.shape[1]
    if blank is None:
        blank = np.zeros(w)
    blank = np.broadcast_to(np.asarray(blank, dtype=float), (n, w))
    inl = np.hstack([a_in, blank])
    t1 = np.hstack([class_gen_a(rng, n), class_gen_b(rng, n)])
    t2 = np.hstack([class_gen_b(rng, n), class_gen_b(rng, n)])
    labels = np.array(["inlier"] * n + ["typeI"] * n + ["typeII"] * n, dtype=object)
    return np.vstack([inl, t1, t2]), labels


def panel_shares(heatmap, split_index):
    """Relevance summed over ``[:split]`` and ``[split:]``."""
    r = heatmap.r if hasattr(heatmap, "r") else np.asarray(heatmap, dtype=float)
    r = np.asarray(r, dtype=float).ravel()
    if not 0 < split_index < r.size:
        raise ParameterError(f"split index {split_index} out of range for {r.size} variables")
    return float(r[:split_index].sum()), float(r[split_index:].sum())
