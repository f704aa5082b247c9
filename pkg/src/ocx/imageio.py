"""8-bit PGM/PPM reading and writing, plus atomic file output."""

import os
import tempfile
from contextlib import contextmanager

import numpy as np
from PIL import Image

from .errors import ShapeError


@contextmanager
def atomic_write(path, mode="w"):
    """Write to a temporary file next to ``path`` and rename it into place."""
    path = os.fspath(path)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(os.path.abspath(path)), suffix=".tmp")
    try:
        with os.fdopen(fd, mode) as fh:
            yield fh
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_image(path):
    """Read a PGM (H x W) or PPM (H x W x 3) image as floats in 0..255."""
    with Image.open(path) as im:
        if im.mode not in ("L", "RGB"):
            raise ShapeError(f"{path}: expected an 8-bit grayscale or RGB image, got mode {im.mode}")
        return np.asarray(im, dtype=float)


def write_image(path, array):
    """Write a uint8 H x W (PGM) or H x W x 3 (PPM) array."""
    array = np.asarray(array)
    if array.dtype != np.uint8:
        raise ValueError("image data must be uint8")
    if array.ndim == 3 and array.shape[2] == 1:
        array = array[:, :, 0]
    im = Image.fromarray(array, "L" if array.ndim == 2 else "RGB")
    with atomic_write(path, "wb") as fh:
        im.save(fh, format="PPM")


def to_uint8(values):
    """Min-max scale to 0..255 with ties rounded up; a constant map becomes all zeros."""
    v = np.asarray(values, dtype=float)
    lo, hi = v.min(), v.max()
    if hi <= lo:
        return np.zeros(v.shape, dtype=np.uint8)
    return np.floor(255.0 * (v - lo) / (hi - lo) + 0.5).astype(np.uint8)  # ties round up
