"""Patch-level one-class models for images.

Every ``p x p`` window of an image is scored by the same one-class SVM and the
image score is the sum of the patch outlier scores.  Explanations go top-down:
each patch keeps its own score as relevance, which is explained on its pixels,
and overlapping windows add up on the pixel grid.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .dtd import input_relevance_batch
from .errors import ParameterError, ShapeError
from .kernels import KernelSpec, bandwidth_heuristic
from .measures import outlierness
from .ocsvm import train


@dataclass(frozen=True)
class PatchConfig:
    patch: int = 7
    stride: int = 1
    subsample: int = 30_000
    seed: int = 0

    def __post_init__(self):
        if self.patch < 1 or self.stride < 1 or self.subsample < 1:
            raise ParameterError("patch, stride and subsample must all be >= 1")

    def to_dict(self):
        return {"patch": self.patch, "stride": self.stride, "subsample": self.subsample, "seed": self.seed}


@dataclass(frozen=True)
class ImageHeatmap:
    grid: np.ndarray
    total: float
    score: float


def _as_hwc(image):
    image = np.asarray(image, dtype=float)
    if image.ndim == 2:
        image = image[:, :, None]
    if image.ndim != 3:
        raise ShapeError(f"expected an H x W or H x W x C image, got shape {image.shape}")
    return image


def _windows(image, cfg):
    img = _as_hwc(image)
    p, s = cfg.patch, cfg.stride
    H, W, C = img.shape
    if H < p or W < p:
        raise ShapeError(f"image {H}x{W} is smaller than the {p}x{p} patch")
    win = sliding_window_view(img, (p, p), axis=(0, 1))[::s, ::s]
    # (rows, cols, C, p, p) -> (rows, cols, p, p, C): flatten channel-last
    return np.ascontiguousarray(win.transpose(0, 1, 3, 4, 2))


def extract_patches(image, cfg):
    """All stride-spaced windows in row-major order.

    Returns ``(patches, positions)`` with patches of length ``p*p*C`` and the
    top-left ``(row, col)`` of each window.
    """
    win = _windows(image, cfg)
    rows, cols = win.shape[:2]
    rr, cc = np.meshgrid(np.arange(rows) * cfg.stride, np.arange(cols) * cfg.stride, indexing="ij")
    positions = np.stack([rr.ravel(), cc.ravel()], axis=1)
    return win.reshape(rows * cols, -1), positions


def collect_patches(images, cfg):
    """Patches of one image or a list of images, subsampled to ``cfg.subsample``."""
    if isinstance(images, np.ndarray):
        images = [images]
    X = np.vstack([extract_patches(im, cfg)[0] for im in images])
    if X.shape[0] > cfg.subsample:
        rng = np.random.default_rng(cfg.seed)
        X = X[np.sort(rng.choice(X.shape[0], cfg.subsample, replace=False))]
    return X


def fit_image_model(images, cfg, kernel=None, nu=0.1, quantile=0.1, **train_kw):
    """Train a one-class SVM on (a random subset of) the patches of ``images``.

    ``images`` is one array or a list of arrays.  With ``kernel=None`` a
    Gaussian kernel is used whose bandwidth is the ``quantile`` of
    nearest-neighbor distances between patches.
    """
    X = collect_patches(images, cfg)
    if X.shape[0] < 2:
        raise ParameterError("need at least two patches to train")
    if kernel is None:
        kernel = KernelSpec.gaussian(bandwidth_heuristic(X, quantile))
    return train(X, kernel, nu, **train_kw)


def image_outlierness(model, image, cfg):
    """Sum of patch outlier scores."""
    return float(outlierness(model, extract_patches(image, cfg)[0]).sum())


def _threads():
    try:
        return max(1, int(os.environ.get("OCX_THREADS", "1")))
    except ValueError:
        return 1


def image_relevance(model, image, cfg, n_jobs=None):
    """Pixel relevance of the summed patch outlier score.

    Patches are explained independently (optionally on ``n_jobs`` threads,
    default from ``OCX_THREADS``) and added onto the grid in a fixed order, so
    the result does not depend on the thread count.
    """
    img = _as_hwc(image)
    win = _windows(img, cfg)
    rows, cols, p, _, C = win.shape
    P = win.reshape(rows * cols, -1)
    if P.shape[1] != model.dim:
        raise ShapeError(f"patch dimension {P.shape[1]} does not match the model ({model.dim})")
    n_jobs = n_jobs or _threads()
    chunks = np.array_split(np.arange(P.shape[0]), max(1, min(n_jobs * 4, P.shape[0])))
    if n_jobs > 1:
        with ThreadPoolExecutor(n_jobs) as ex:
            parts = list(ex.map(lambda idx: input_relevance_batch(model, P[idx]), chunks))
    else:
        parts = [input_relevance_batch(model, P[idx]) for idx in chunks]
    rel = np.vstack(parts).reshape(rows, cols, p, p, C)
    grid = np.zeros_like(img)
    s = cfg.stride
    for dy in range(p):
        for dx in range(p):
            grid[dy : dy + s * (rows - 1) + 1 : s, dx : dx + s * (cols - 1) + 1 : s] += rel[:, :, dy, dx]
    score = float(outlierness(model, P).sum())
    return ImageHeatmap(grid=grid, total=float(grid.sum()), score=score)
