"""Synthetic datasets used by the benchmarks and demos."""

import numpy as np


def gen_multimodal(seed, n=300, n_outliers=40, dim=20, modes=4, latent=2, spread=3.0,
                   mode_scale=0.5, noise=0.1, n_planted=3, magnitude=2.0):
    """Clustered inliers on a random 2-D plane in ``dim`` dimensions, plus outliers.

    Even-indexed outliers are inlier-like draws with ``n_planted`` coordinates
    pushed off by ``magnitude * U(0.5, 1)``; odd-indexed outliers sit on the
    segment between two random mode centers, off the data.

    Returns ``(train, outliers)``.
    """
    rng = np.random.default_rng(seed)
    basis, _ = np.linalg.qr(rng.normal(size=(dim, latent)))
    centers = rng.uniform(-spread, spread, size=(modes, latent))

    def sample(k):
        lab = rng.integers(modes, size=k)
        z = centers[lab] + mode_scale * rng.normal(size=(k, latent))
        return z @ basis.T + noise * rng.normal(size=(k, dim))

    X = sample(n)
    out = np.empty((n_outliers, dim))
    for i in range(n_outliers):
        if i % 2 == 0:
            o = sample(1)[0]
            idx = rng.choice(dim, n_planted, replace=False)
            o[idx] += magnitude * rng.choice([-1, 1], n_planted) * rng.uniform(0.5, 1.0, n_planted)
        else:
            a, b = rng.choice(modes, 2, replace=False)
            t = rng.uniform(0.3, 0.7)
            o = (t * centers[a] + (1 - t) * centers[b]) @ basis.T + noise * rng.normal(size=dim)
        out[i] = o
    return X, out


def blob_generator(center, scale=1.0):
    """Generator ``gen(rng, k)`` of isotropic Gaussian draws around ``center``."""
    center = np.asarray(center, dtype=float)

    def gen(rng, k):
        return center + scale * rng.normal(size=(k, center.size))

    return gen


def mixture_generator(centers, scale=1.0):
    """Generator picking a random center per draw, then adding Gaussian noise."""
    centers = np.atleast_2d(np.asarray(centers, dtype=float))

    def gen(rng, k):
        lab = rng.integers(centers.shape[0], size=k)
        return centers[lab] + scale * rng.normal(size=(k, centers.shape[1]))

    return gen


def panel_classes(width, n_classes=10, separation=4.0, scale=1.0, seed=0):
    """Random class centers for two-panel data; class 0 is the inlier class.

    Returns ``(gen_a, gen_b)`` where ``gen_b`` draws from the other classes.
    """
    rng = np.random.default_rng(seed)
    centers = separation * rng.normal(size=(n_classes, width)) / np.sqrt(2.0)
    return blob_generator(centers[0], scale), mixture_generator(centers[1:], scale)
