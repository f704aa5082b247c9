"""Train a one-class SVM on a 2-D blob and explain a few points.

Run: python demos/01_blob_outliers.py
"""

import numpy as np

from ocx import KernelSpec, train
from ocx.dtd import explain_inlier, input_relevance, sv_relevance
from ocx.measures import detection_activations
from ocx.ocsvm import decide, outlier_mask

rng = np.random.default_rng(0)
X = rng.normal(size=(400, 2))

model = train(X, KernelSpec.gaussian(1.0), nu=0.1)
print(f"{model.m} support vectors out of {X.shape[0]} points, rho = {model.rho:.4f}")
print(f"training outlier fraction: {outlier_mask(model, X).mean():.3f} (nu = 0.1)")

# three test points: the center, the edge, and far out along the first axis
for x in ([0.0, 0.0], [2.0, 0.5], [6.0, 0.0]):
    x = np.array(x)
    svr = sv_relevance(model, x)
    hm = input_relevance(model, x)
    act = detection_activations(model, x)
    top = np.argsort(-svr.r)[:3]
    print(f"\nx = {x}: {decide(model, x)}")
    print(f"  outlierness {svr.o:.4f} (network form {act.o:.4f})")
    print(f"  top support vectors {top}, share {svr.r[top].sum() / svr.o:.3f}")
    print(f"  input relevance {np.round(hm.r, 4)}  (sum {hm.total:.4f} <= o)")

# inlier evidence is split over the support vectors that are close to x
x = np.zeros(2)
ev = explain_inlier(model, x)
near = np.argsort(-ev.r)[:5]
print("\ninlier evidence at the origin from", near, "distances",
      np.round(np.linalg.norm(model.support_vectors[near] - x, axis=1), 3))
