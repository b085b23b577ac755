"""Shape arithmetic for 2-D channels-first convolutions.

A ConvGeometry bundles every parameter that determines tensor shapes:
channel counts, spatial input size, kernel size, strides and zero padding.
The output size follows the usual floor formula

    out_h = (in_h + 2*pad_h - k_h) // stride_h + 1

and construction fails if either output dimension would be empty.
"""

from dataclasses import dataclass

from .errors import GeometryError

__all__ = ["ConvGeometry", "output_shape"]


@dataclass(frozen=True)
class ConvGeometry:
    in_channels: int
    out_channels: int
    in_h: int
    in_w: int
    k_h: int
    k_w: int
    stride_h: int = 1
    stride_w: int = 1
    pad_h: int = 0
    pad_w: int = 0

    def __post_init__(self):
        for field in ("in_channels", "out_channels", "in_h", "in_w", "k_h",
                      "k_w", "stride_h", "stride_w", "pad_h", "pad_w"):
            value = getattr(self, field)
            if not isinstance(value, int) or isinstance(value, bool):
                raise GeometryError(f"{field} must be an int, got {value!r}")
        if min(self.in_channels, self.out_channels, self.in_h, self.in_w,
               self.k_h, self.k_w) < 1:
            raise GeometryError("channel counts, spatial and kernel sizes must be >= 1")
        if min(self.stride_h, self.stride_w) < 1:
            raise GeometryError("strides must be >= 1")
        if min(self.pad_h, self.pad_w) < 0:
            raise GeometryError("paddings must be >= 0")
        if self.k_h > self.padded_h or self.k_w > self.padded_w:
            raise GeometryError(
                f"kernel {self.k_h}x{self.k_w} exceeds padded input "
                f"{self.padded_h}x{self.padded_w}")
        if self.out_h < 1 or self.out_w < 1:
            raise GeometryError("output would be empty for this geometry")

    @property
    def padded_h(self):
        return self.in_h + 2 * self.pad_h

    @property
    def padded_w(self):
        return self.in_w + 2 * self.pad_w

    @property
    def out_h(self):
        return (self.padded_h - self.k_h) // self.stride_h + 1

    @property
    def out_w(self):
        return (self.padded_w - self.k_w) // self.stride_w + 1

    @property
    def input_shape(self):
        return (self.in_channels, self.in_h, self.in_w)

    @property
    def output_shape(self):
        return (self.out_channels, self.out_h, self.out_w)

    @property
    def weights_shape(self):
        """Conventional kernel layout: (out_ch, in_ch, k_h, k_w)."""
        return (self.out_channels, self.in_channels, self.k_h, self.k_w)

    @property
    def weights_smm_shape(self):
        """Access-order kernel layout used by the slice-buffer backend."""
        return (self.in_channels, self.k_w, self.k_h, self.out_channels)


def output_shape(geom):
    """Return (out_h, out_w) for a valid geometry."""
    return geom.out_h, geom.out_w
