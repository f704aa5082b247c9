"""Reference attribution methods compared against the deep Taylor heatmaps."""

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .dtd import Heatmap, sa_gradient
from .errors import ParameterError, ShapeError
from .kernels import sq_distances


def sensitivity(model, x):
    """Squared partial derivatives of the outlier score."""
    return Heatmap.from_values(sa_gradient(model, x) ** 2)


def nearest_support_vector(model, x):
    """Index of the closest support vector (lowest index on ties)."""
    return int(np.argmin(sq_distances(np.asarray(x, dtype=float)[None, :], model.support_vectors)[0]))


def nn_map(model, x):
    """Squared difference to the nearest support vector."""
    x = np.asarray(x, dtype=float)
    u = model.support_vectors[nearest_support_vector(model, x)]
    return Heatmap.from_values((x - u) ** 2)


def expected_point(model):
    return model.alphas @ model.support_vectors


def ev_map(model, x):
    """Squared difference to the coefficient-weighted support vector mean."""
    x = np.asarray(x, dtype=float)
    return Heatmap.from_values((x - expected_point(model)) ** 2)


def to_gray(image):
    image = np.asarray(image, dtype=float)
    if image.ndim == 3:
        return image.mean(axis=2)
    if image.ndim != 2:
        raise ShapeError(f"expected an H x W or H x W x C image, got shape {image.shape}")
    return image


def sobel_map(image):
    """Sobel gradient magnitude with replicated borders.

    Color images are reduced to gray by an unweighted channel mean.
    """
    gray = to_gray(image)
    gx = ndimage.sobel(gray, axis=1, mode="nearest")
    gy = ndimage.sobel(gray, axis=0, mode="nearest")
    return Heatmap.from_values(np.hypot(gx, gy), shape=gray.shape)


def random_order(d, seed):
    return np.random.default_rng(seed).permutation(d)


@dataclass(frozen=True)
class MvnModel:
    mu: np.ndarray
    var: np.ndarray
    lam: float

    def nll(self, x):
        x = np.asarray(x, dtype=float)
        return float(
            0.5 * np.sum(np.log(2 * np.pi * self.var)) + np.sum((x - self.mu) ** 2 / (2 * self.var))
        )


def mvn_fit(data, lam=1e-2):
    """Diagonal Gaussian maximum-likelihood fit with variance floor ``lam``."""
    data = np.atleast_2d(np.asarray(data, dtype=float))
    if data.shape[0] < 1:
        raise ParameterError("need at least one row")
    if not lam > 0:
        raise ParameterError(f"lambda must be positive, got {lam}")
    mu = data.mean(axis=0)
    var = ((data - mu) ** 2).mean(axis=0) + lam
    return MvnModel(mu=mu, var=var, lam=float(lam))


def mvn_decompose(mvn, x):
    """Per-feature terms of ``NLL(x) - NLL(mu)``."""
    x = np.asarray(x, dtype=float)
    return Heatmap.from_values((x - mvn.mu) ** 2 / (2 * mvn.var))
