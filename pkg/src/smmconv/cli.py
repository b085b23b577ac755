"""Command-line interface.

Two subcommands:

* ``smmconv conv`` runs one backend on one geometry and prints the output
  checksum plus the scratch bytes the backend allocated.
* ``smmconv bench`` times backends on a network preset, a config file or a
  parameter sweep, writing CSV to stdout or a file.

Diagnostics go to stderr with a nonzero exit code; data goes to stdout or
the requested output file.
"""

import argparse
import sys

from .csvio import emit_csv
from .errors import SmmConvError
from .geometry import ConvGeometry, GeometryError
from .im2col import conv_im2col
from .layers import (NETWORK_NAMES, SWEEP_KINDS, builtin_network,
                     parse_layer_config, sweep)
from .mec import conv_mec
from .reference import conv_ref
from .runner import (BACKEND_ORDER, FLOAT_BYTES, default_threads, run_bench)
from .smm import repack_weights, smm_conv_parallel, smm_conv_single
from .tensors import random_tensor
from .workspace import metered

__all__ = ["main", "build_parser"]


def build_parser():
    parser = argparse.ArgumentParser(
        prog="smmconv",
        description="Channels-first CPU convolution kernels and benchmarks.")
    sub = parser.add_subparsers(dest="command", required=True)

    conv = sub.add_parser(
        "conv", help="run one convolution, print checksum and scratch bytes")
    conv.add_argument("--backend", required=True, choices=BACKEND_ORDER)
    conv.add_argument("--ci", type=int, required=True, help="input channels")
    conv.add_argument("--co", type=int, required=True, help="output channels")
    conv.add_argument("--h", type=int, required=True, help="input height")
    conv.add_argument("--w", type=int, required=True, help="input width")
    conv.add_argument("--kh", type=int, required=True, help="kernel height")
    conv.add_argument("--kw", type=int, required=True, help="kernel width")
    conv.add_argument("--sh", type=int, default=1, help="vertical stride")
    conv.add_argument("--sw", type=int, default=1, help="horizontal stride")
    conv.add_argument("--ph", type=int, default=0, help="vertical padding")
    conv.add_argument("--pw", type=int, default=0, help="horizontal padding")
    conv.add_argument("--threads", type=int, default=1,
                      help="worker count for the smm backend")
    conv.add_argument("--seed", type=int, default=0)
    conv.add_argument("--gemm", choices=("blocked", "blas"),
                      default="blocked",
                      help="matrix-multiply hook for the im2col backend")

    bench = sub.add_parser("bench", help="benchmark backends on layer sets")
    source = bench.add_mutually_exclusive_group(required=True)
    source.add_argument("--network", choices=NETWORK_NAMES)
    source.add_argument("--config", metavar="FILE",
                        help="layer config file (see README for the format)")
    source.add_argument("--sweep", choices=SWEEP_KINDS)
    bench.add_argument("--backends", default="im2col,mec,smm",
                       help="comma-separated subset of "
                            + ",".join(BACKEND_ORDER))
    bench.add_argument("--repeats", type=int, default=5)
    bench.add_argument("--threads", type=int, default=None,
                       help="default: detected core count")
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--out", metavar="FILE.csv",
                       help="CSV destination (default: stdout)")
    bench.add_argument("--gemm", choices=("blocked", "blas"),
                       default="blocked",
                       help="matrix-multiply hook for the im2col backend")
    return parser


def _run_conv(args):
    geom = ConvGeometry(
        in_channels=args.ci, out_channels=args.co, in_h=args.h, in_w=args.w,
        k_h=args.kh, k_w=args.kw, stride_h=args.sh, stride_w=args.sw,
        pad_h=args.ph, pad_w=args.pw)
    if args.threads < 1:
        raise ValueError("threads must be >= 1")
    inp = random_tensor(geom.input_shape, args.seed)
    weights = random_tensor(geom.weights_shape, args.seed + 1)
    weights_smm = repack_weights(weights, geom) \
        if args.backend == "smm" else None
    with metered() as meter:
        if args.backend == "ref":
            out = conv_ref(inp, weights, geom)
        elif args.backend == "im2col":
            out = conv_im2col(inp, weights, geom,
                              use_blas=args.gemm == "blas")
        elif args.backend == "mec":
            out = conv_mec(inp, weights, geom)
        elif args.threads > 1:
            out = smm_conv_parallel(inp, weights_smm, geom, args.threads)
        else:
            out = smm_conv_single(inp, weights_smm, geom)
    checksum = float(out.sum(dtype="float64"))
    print(f"checksum={checksum!r}")
    print(f"scratch_bytes={meter.total_alloc_bytes(FLOAT_BYTES)}")
    return 0


def _run_bench(args):
    if args.network:
        specs = builtin_network(args.network)
    elif args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            specs = parse_layer_config(fh.read())
        if not specs:
            raise SmmConvError(f"config {args.config!r} defines no layers")
    else:
        specs = sweep(args.sweep)
    backends = [b.strip() for b in args.backends.split(",") if b.strip()]
    if not backends:
        raise ValueError("no backends given")
    threads = default_threads() if args.threads is None else args.threads
    print(f"threads={threads}", file=sys.stderr)
    records = run_bench(specs, backends, repeats=args.repeats,
                        threads=threads, seed=args.seed,
                        use_blas=args.gemm == "blas")
    if args.out:
        emit_csv(records, args.out)
    else:
        sys.stdout.write(emit_csv(records))
    return 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "conv":
            return _run_conv(args)
        return _run_bench(args)
    except (SmmConvError, GeometryError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
