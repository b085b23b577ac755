"""Channels-first CPU convolution kernels and benchmarks.

Four interchangeable backends compute the same cross-correlation on dense
float32 NCHW tensors:

* ``conv_ref`` -- naive direct loops, the correctness oracle;
* ``conv_im2col`` -- window packing plus one large in-repo GEMM;
* ``conv_mec`` -- memory-efficient strip lowering with small multiplies;
* ``smm_conv_single`` / ``smm_conv_parallel`` -- scalar-matrix
  multiply-accumulate over a single reused slice buffer (the fast path).

``Conv2D`` wraps backend dispatch in a scikit-learn style transformer, and the
``smmconv`` command line (see ``smmconv --help``) benchmarks backends against
each other with instrumented scratch-memory accounting.
"""

from .errors import (
    BackendUnsupportedError,
    ChecksumMismatchError,
    ConfigError,
    GeometryError,
    ShapeMismatchError,
    SmmConvError,
)
from .estimator import Conv2D
from .gemm import gemm, gemm_naive
from .geometry import ConvGeometry, output_shape
from .im2col import conv_im2col, im2col_pack, im2col_workspace_elements
from .mec import conv_mec, mec_pack, mec_supported, mec_workspace_elements
from .reference import conv_ref
from .smm import (
    extract_slice,
    repack_weights,
    scalar_matrix_fma,
    shifted_view,
    smm_conv_parallel,
    smm_conv_single,
    smm_workspace_elements,
    unpack_weights,
)
from .tensors import fill_deterministic, max_rel_diff, random_tensor
from .workspace import WorkspaceMeter, metered

__version__ = "0.1.0"

__all__ = [
    "BackendUnsupportedError",
    "ChecksumMismatchError",
    "ConfigError",
    "Conv2D",
    "ConvGeometry",
    "GeometryError",
    "ShapeMismatchError",
    "SmmConvError",
    "WorkspaceMeter",
    "conv_im2col",
    "conv_mec",
    "conv_ref",
    "extract_slice",
    "fill_deterministic",
    "gemm",
    "gemm_naive",
    "im2col_pack",
    "im2col_workspace_elements",
    "max_rel_diff",
    "mec_pack",
    "mec_supported",
    "mec_workspace_elements",
    "metered",
    "output_shape",
    "random_tensor",
    "repack_weights",
    "scalar_matrix_fma",
    "shifted_view",
    "smm_conv_parallel",
    "smm_conv_single",
    "smm_workspace_elements",
    "unpack_weights",
]
