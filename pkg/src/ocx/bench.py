"""Desk-scale experiments: flip-curve comparison and two-panel validation."""

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist

from .baselines import mvn_decompose, mvn_fit
from .dtd import input_relevance
from .flipping import flip_auc, flip_curve, gen_two_panel, method_order, panel_shares
from .kernels import KernelSpec
from .ocsvm import train
from .synthetic import gen_multimodal, panel_classes

FLIP_METHODS = ("dtd", "nn", "sa", "ev", "random")


def median_bandwidth(X, scale=1.0):
    return scale * float(np.median(pdist(X)))


def make_kernel(family, q, X, bandwidth_scale=0.5, a=1.0):
    """Exponential kernels get ``bandwidth_scale`` times the median pairwise distance."""
    if family == "exponential":
        return KernelSpec.exponential(median_bandwidth(X, bandwidth_scale), q)
    return KernelSpec.tstudent(a, q)


def flip_benchmark(family="exponential", q=2.0, seeds=range(20), methods=FLIP_METHODS,
                   nu=0.1, bandwidth_scale=0.5, **data_kw):
    """Mean flip AUC per seed and method on :func:`gen_multimodal` outliers.

    Returns a (len(seeds), len(methods)) array.
    """
    seeds = list(seeds)
    out = np.empty((len(seeds), len(methods)))
    for s_i, seed in enumerate(seeds):
        X, outliers = gen_multimodal(seed, **data_kw)
        model = train(X, make_kernel(family, q, X, bandwidth_scale), nu)
        for m_i, method in enumerate(methods):
            aucs = [
                flip_auc(flip_curve(model, x, method_order(method, model, x, seed=seed * 1000 + i)))
                for i, x in enumerate(outliers)
            ]
            out[s_i, m_i] = np.mean(aucs)
    return out


@dataclass
class TwoPanelResult:
    labels: np.ndarray
    dtd: np.ndarray   # (n, 2) left/right relevance
    mvn: np.ndarray   # (n, 2)
    width: int

    def left_share(self, which, label):
        h = getattr(self, which)[self.labels == label]
        return h[:, 0] / h.sum(axis=1)


def two_panel_benchmark(n=500, width=16, n_train=300, separation=8.0, nu=0.1,
                        bandwidth_scale=0.5, lam=1e-2, seed=0):
    """Explain ``n`` each of inliers, type-I and type-II outliers.

    Both the Gaussian one-class SVM and the diagonal MVN are fit on inliers only.
    """
    gen_a, gen_b = panel_classes(width, separation=separation, seed=seed)
    X_train = gen_two_panel(n_train, gen_a, gen_b, seed=seed + 1000)[0][:n_train]
    X, labels = gen_two_panel(n, gen_a, gen_b, seed=seed + 1)
    model = train(X_train, KernelSpec.gaussian(median_bandwidth(X_train, bandwidth_scale)), nu)
    mvn = mvn_fit(X_train, lam)
    dtd = np.array([panel_shares(input_relevance(model, x), width) for x in X])
    mv = np.array([panel_shares(mvn_decompose(mvn, x), width) for x in X])
    return TwoPanelResult(labels=labels, dtd=dtd, mvn=mv, width=width)
