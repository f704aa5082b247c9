"""Radial kernels acting on Euclidean distances.

Two families are supported:

* exponential: ``k(d) = exp(-d**q / (q * sigma**q))`` (q=1 Laplacian, q=2 Gaussian)
* t-Student:   ``k(d) = 1 / (a + d**q)``
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree

from .errors import DegenerateBandwidthError, ParameterError, ShapeError

EXPONENTIAL = "exponential"
TSTUDENT = "tstudent"
FAMILIES = (EXPONENTIAL, TSTUDENT)


@dataclass(frozen=True)
class KernelSpec:
    family: str
    q: float = 2.0
    sigma: Optional[float] = None
    a: Optional[float] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ParameterError(f"unknown kernel family {self.family!r}")
        if not np.isfinite(self.q) or self.q < 1:
            raise ParameterError(f"q must be >= 1, got {self.q}")
        if self.family == EXPONENTIAL:
            if self.sigma is None or not self.sigma > 0 or not np.isfinite(self.sigma):
                raise ParameterError(f"exponential kernel needs sigma > 0, got {self.sigma}")
            if self.a is not None:
                raise ParameterError("exponential kernel takes no 'a' parameter")
        else:
            if self.a is None or not self.a > 0 or not np.isfinite(self.a):
                raise ParameterError(f"t-Student kernel needs a > 0, got {self.a}")
            if self.sigma is not None:
                raise ParameterError("t-Student kernel takes no 'sigma' parameter")

    @classmethod
    def exponential(cls, sigma, q=2.0):
        return cls(EXPONENTIAL, q=float(q), sigma=float(sigma))

    @classmethod
    def gaussian(cls, sigma):
        return cls.exponential(sigma, q=2.0)

    @classmethod
    def laplacian(cls, sigma):
        return cls.exponential(sigma, q=1.0)

    @classmethod
    def tstudent(cls, a=1.0, q=2.0):
        return cls(TSTUDENT, q=float(q), a=float(a))

    @property
    def is_exponential(self):
        return self.family == EXPONENTIAL

    @property
    def k0(self):
        """Kernel value at zero distance."""
        return 1.0 if self.is_exponential else 1.0 / self.a

    def scaled(self, powdist):
        """Map ``d**q`` to the layer-1 distance term.

        ``d**q / (q sigma**q)`` for exponential kernels, ``a + d**q`` for t-Student.
        """
        if self.is_exponential:
            return powdist / (self.q * self.sigma**self.q)
        return self.a + powdist

    def to_dict(self):
        out = {"family": self.family, "q": self.q}
        if self.is_exponential:
            out["sigma"] = self.sigma
        else:
            out["a"] = self.a
        return out

    @classmethod
    def from_dict(cls, d):
        return cls(d["family"], q=float(d["q"]), sigma=d.get("sigma"), a=d.get("a"))


def eval_kernel(spec: KernelSpec, dist):
    """Evaluate the kernel at distance(s) ``dist`` (scalar or array)."""
    dist = np.asarray(dist, dtype=float)
    if np.any(dist < 0):
        raise ParameterError("distances must be nonnegative")
    return kernel_from_powdist(spec, dist**spec.q)


def kernel_from_powdist(spec: KernelSpec, powdist):
    """Kernel value given the already powered distance ``d**q``."""
    if spec.is_exponential:
        return np.exp(-spec.scaled(powdist))
    return 1.0 / spec.scaled(powdist)


def pow_distance(x, u, q):
    """``||x - u||_2 ** q``.  Broadcasts over leading axes."""
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    if x.shape[-1:] != u.shape[-1:]:
        raise ShapeError(f"dimension mismatch: {x.shape} vs {u.shape}")
    return np.linalg.norm(x - u, axis=-1) ** q


def sq_distances(X, U, chunk_elems=2**22):
    """Squared Euclidean distances between the rows of ``X`` (n, d) and ``U`` (m, d).

    Differences are formed explicitly (no ``|x|^2 + |u|^2 - 2xu`` expansion) so
    that nearby points keep full relative precision.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    U = np.atleast_2d(np.asarray(U, dtype=float))
    if X.shape[1] != U.shape[1]:
        raise ShapeError(f"dimension mismatch: {X.shape[1]} vs {U.shape[1]}")
    n, d = X.shape
    out = np.empty((n, U.shape[0]))
    step = max(1, chunk_elems // max(1, U.shape[0] * d))
    for s in range(0, n, step):
        diff = X[s : s + step, None, :] - U[None, :, :]
        out[s : s + step] = np.einsum("nmd,nmd->nm", diff, diff)
    return out


def bandwidth_heuristic(data, quantile=0.1):
    """Quantile of the one-nearest-neighbor distances within ``data``.

    Duplicated rows count as neighbors at distance zero, so a dataset made of
    copies of one point has no usable bandwidth.
    """
    data = np.asarray(data, dtype=float)
    if data.ndim == 1:
        data = data[:, None]
    if data.shape[0] < 2:
        raise ParameterError("bandwidth heuristic needs at least two rows")
    if not 0 < quantile <= 1:
        raise ParameterError(f"quantile must lie in (0, 1], got {quantile}")
    dist, _ = cKDTree(data).query(data, k=2)
    sigma = float(np.quantile(dist[:, 1], quantile))
    if sigma <= 0:
        raise DegenerateBandwidthError(
            f"the {quantile} quantile of nearest-neighbor distances is zero"
        )
    return sigma
