"""Command line interface: ``ocx <command> ...``.

Exit codes: 0 success, 2 usage or validation error, 3 numerical failure.
"""

import argparse
import json
import logging
import sys

import numpy as np

from . import __version__
from .dtd import explain_inlier, input_relevance, sv_relevance
from .errors import ConvergenceError, DegenerateBandwidthError, OcxError
from .flipping import METHODS, flip_auc, flip_curve, method_order
from .imageio import atomic_write, read_image, to_uint8, write_image
from .kernels import KernelSpec, bandwidth_heuristic
from .ocsvm import OneClassModel, train
from .patches import PatchConfig, collect_patches, image_relevance

log = logging.getLogger("ocx")

EXIT_USAGE = 2
EXIT_NUMERIC = 3


class UsageError(Exception):
    pass


def _fmt(v):
    return repr(float(v))


def read_csv(path, header=False):
    try:
        data = np.loadtxt(path, delimiter=",", skiprows=1 if header else 0, ndmin=2, dtype=float)
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e}") from e
    except ValueError as e:
        raise UsageError(f"{path}: {e}") from e
    if data.size == 0:
        raise UsageError(f"{path}: no data")
    return data


def write_rows(path, rows):
    with atomic_write(path) as fh:
        for row in rows:
            fh.write(",".join(str(c) for c in row) + "\n")


def write_heatmap(path, values):
    write_rows(path, ((i, _fmt(v)) for i, v in enumerate(np.ravel(values))))


def load_model(path):
    try:
        with open(path) as fh:
            raw = json.load(fh)
        return OneClassModel.from_dict(raw), raw
    except (OSError, ValueError, KeyError, TypeError) as e:
        raise UsageError(f"cannot load model {path}: {e}") from e


def parse_shape(text):
    try:
        shape = tuple(int(t) for t in text.lower().split("x"))
    except ValueError as e:
        raise UsageError(f"bad shape {text!r}; expected HxW or HxWxC") from e
    if len(shape) not in (2, 3) or min(shape) < 1:
        raise UsageError(f"bad shape {text!r}; expected HxW or HxWxC")
    return shape


def _pick_row(data, row):
    if not -data.shape[0] <= row < data.shape[0]:
        raise UsageError(f"row {row} out of range for {data.shape[0]} rows")
    return data[row]


def kernel_from_args(args, data):
    name = args.kernel
    if name == "tstudent":
        if args.sigma is not None:
            raise UsageError("--sigma cannot be combined with --kernel tstudent")
        return KernelSpec.tstudent(args.a if args.a is not None else 1.0, args.q or 2.0)
    if args.a is not None:
        raise UsageError("--a is only valid with --kernel tstudent")
    fixed_q = {"gaussian": 2.0, "laplacian": 1.0}.get(name)
    if fixed_q is not None and args.q is not None and args.q != fixed_q:
        raise UsageError(f"--kernel {name} implies q={fixed_q:g}")
    q = fixed_q or args.q or 2.0
    sigma = args.sigma or "auto"
    if sigma == "auto":
        s = bandwidth_heuristic(data, args.quantile)
    else:
        try:
            s = float(sigma)
        except ValueError as e:
            raise UsageError(f"--sigma must be a number or 'auto', got {sigma!r}") from e
    return KernelSpec.exponential(s, q)


def _add_kernel_args(p):
    p.add_argument("--kernel", choices=["gaussian", "laplacian", "exponential", "tstudent"],
                   default="gaussian")
    p.add_argument("--q", type=float, default=None, help="distance exponent (>= 1)")
    p.add_argument("--sigma", default=None, help="bandwidth, or 'auto' (default for exponential kernels)")
    p.add_argument("--quantile", type=float, default=0.1,
                   help="nearest-neighbor distance quantile used by --sigma auto")
    p.add_argument("--a", type=float, default=None, help="t-Student offset (default 1)")
    p.add_argument("--nu", type=float, default=0.1)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--max-iter", type=int, default=10_000_000)


def _report(model):
    info = model.info
    print(f"support vectors: {model.m}")
    print(f"rho: {_fmt(model.rho)}")
    if "n_iter" in info:
        print(f"iterations: {info['n_iter']}  kkt gap: {info['kkt_gap']:.3g}")


def _train(data, kernel, args):
    if not 0 < args.nu <= 1:
        raise UsageError(f"--nu must lie in (0, 1], got {args.nu}")
    return train(data, kernel, args.nu, tol=args.tol, max_iter=args.max_iter)


def cmd_fit(args):
    data = read_csv(args.input, args.header)
    model = _train(data, kernel_from_args(args, data), args)
    with atomic_write(args.out) as fh:
        fh.write(model.to_json())
    _report(model)


def cmd_explain(args):
    model, _ = load_model(args.model)
    x = _pick_row(read_csv(args.input, args.header), args.row)
    if x.size != model.dim:
        raise UsageError(f"input has {x.size} variables, model expects {model.dim}")
    if args.mode == "inlier":
        rel = explain_inlier(model, x)
        write_heatmap(args.out, rel.r)
        print(f"inlierness: {_fmt(rel.o)}")
        return
    svr = sv_relevance(model, x)
    hm = input_relevance(model, x)
    write_heatmap(args.out, hm.r)
    print(f"outlierness: {_fmt(svr.o)}")
    print(f"decomposable relevance: {_fmt(svr.delta.sum())}")


def _patch_config(args, raw):
    stored = raw.get("patch", {})
    return PatchConfig(
        patch=args.patch or stored.get("patch", 7),
        stride=args.stride or stored.get("stride", 1),
        subsample=args.subsample or stored.get("subsample", 30_000),
        seed=args.seed if args.seed is not None else stored.get("seed", 0),
    )


def _read_image(path):
    try:
        return read_image(path)
    except OSError as e:
        raise UsageError(f"cannot read image {path}: {e}") from e


def cmd_image_fit(args):
    images = [_read_image(p) for p in args.input]
    cfg = _patch_config(args, {})
    patches = collect_patches(images, cfg)
    if patches.shape[0] < 2:
        raise UsageError("need at least two patches to train")
    model = _train(patches, kernel_from_args(args, patches), args)
    with atomic_write(args.out) as fh:
        fh.write(model.to_json(patch=cfg.to_dict()))
    _report(model)


def cmd_image_explain(args):
    model, raw = load_model(args.model)
    cfg = _patch_config(args, raw)
    image = _read_image(args.input)
    hm = image_relevance(model, image, cfg)
    write_heatmap(args.out, hm.grid)
    if args.render:
        write_image(args.render, to_uint8(hm.grid.sum(axis=2)))
    print(f"image outlierness: {_fmt(hm.score)}")
    print(f"heatmap total: {_fmt(hm.total)}")


def cmd_flip(args):
    model, _ = load_model(args.model)
    x = _pick_row(read_csv(args.input, args.header), args.row)
    if x.size != model.dim:
        raise UsageError(f"input has {x.size} variables, model expects {model.dim}")
    shape = parse_shape(args.shape) if args.shape else None
    order = method_order(args.method, model, x, seed=args.seed, shape=shape)
    curve = flip_curve(model, x, order, method=args.method)
    fr = curve.fractions
    write_rows(args.out, ((k, _fmt(fr[k]), _fmt(s)) for k, s in enumerate(curve.scores)))
    auc = flip_auc(curve)
    if args.summary:
        write_rows(args.summary, [("method", "seed", "auc"), (args.method, args.seed, _fmt(auc))])
    print(f"final score: {_fmt(curve.scores[-1])}")
    print(f"auc: {_fmt(auc)}")


def cmd_bench_two_panel(args):
    from .bench import two_panel_benchmark

    res = two_panel_benchmark(n=args.n, width=args.width, separation=args.separation,
                              nu=args.nu, seed=args.seed)
    rows = [("index", "label", "method", "h_left", "h_right")]
    for method in ("dtd", "mvn"):
        H = getattr(res, method)
        rows += [(i, res.labels[i], method, _fmt(l), _fmt(r)) for i, (l, r) in enumerate(H)]
    write_rows(args.out, rows)
    t1 = res.labels == "typeI"
    print(f"type-I right > left (dtd): {np.mean(res.dtd[t1, 1] > res.dtd[t1, 0]):.3f}")
    print(f"type-II median left share: dtd {np.median(res.left_share('dtd', 'typeII')):.3f}"
          f"  mvn {np.median(res.left_share('mvn', 'typeII')):.3f}")


def cmd_render(args):
    shape = parse_shape(args.shape)
    data = read_csv(args.input)
    values = data[:, -1]
    if values.size != int(np.prod(shape)):
        raise UsageError(f"heatmap has {values.size} entries, shape {args.shape} needs {int(np.prod(shape))}")
    grid = values.reshape(shape)
    if grid.ndim == 3:
        grid = grid.sum(axis=2)
    write_image(args.out, to_uint8(grid))


def build_parser():
    parser = argparse.ArgumentParser(prog="ocx", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="train a one-class SVM on CSV rows")
    p.add_argument("--input", required=True)
    p.add_argument("--header", action="store_true", help="skip the first CSV line")
    p.add_argument("--out", required=True)
    _add_kernel_args(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("explain", help="explain one CSV row")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--header", action="store_true")
    p.add_argument("--row", type=int, default=0)
    p.add_argument("--mode", choices=["outlier", "inlier"], default="outlier")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_explain)

    def patch_args(p):
        p.add_argument("--patch", type=int, default=None)
        p.add_argument("--stride", type=int, default=None)
        p.add_argument("--subsample", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("image-fit", help="train a patch model on PGM/PPM images")
    p.add_argument("--input", required=True, nargs="+")
    p.add_argument("--out", required=True)
    patch_args(p)
    _add_kernel_args(p)
    p.set_defaults(func=cmd_image_fit)

    p = sub.add_parser("image-explain", help="pixel heatmap for a PGM/PPM image")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--render", default=None, help="also write the heatmap as a PGM")
    patch_args(p)
    p.set_defaults(func=cmd_image_explain)

    p = sub.add_parser("flip", help="feature-space flipping curve for one CSV row")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--header", action="store_true")
    p.add_argument("--row", type=int, default=0)
    p.add_argument("--method", required=True, choices=METHODS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--shape", default=None, help="HxW[xC], needed by --method sobel")
    p.add_argument("--out", required=True)
    p.add_argument("--summary", default=None)
    p.set_defaults(func=cmd_flip)

    p = sub.add_parser("bench-two-panel", help="two-panel explanation benchmark on synthetic blobs")
    p.add_argument("--n", type=int, default=500)
    p.add_argument("--width", type=int, default=16)
    p.add_argument("--separation", type=float, default=8.0)
    p.add_argument("--nu", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_bench_two_panel)

    p = sub.add_parser("render", help="render a heatmap CSV as an 8-bit PGM")
    p.add_argument("--input", required=True)
    p.add_argument("--shape", required=True, help="HxW or HxWxC (channels are summed)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except UsageError as e:
        print(f"ocx {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceError, DegenerateBandwidthError, FloatingPointError) as e:
        print(f"ocx {args.command}: numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except OcxError as e:
        print(f"ocx {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())
