"""Benchmark layer descriptions: config files, network presets and sweeps.

The config format is line based; `#` starts a comment and blank lines are
skipped.  Each layer line reads

    layer name=<label> ci=<n> co=<n> h=<n> w=<n> kh=<n> kw=<n>
          [sh=<n> sw=<n> ph=<n> pw=<n>]

with strides defaulting to 1 and paddings to 0.  Network presets ship as
config files under ``smmconv/presets`` so the layer tables are data, not code.
"""

from dataclasses import dataclass
from importlib import resources

from .errors import ConfigError, GeometryError
from .geometry import ConvGeometry

__all__ = [
    "LayerSpec",
    "parse_layer_config",
    "builtin_network",
    "sweep",
    "NETWORK_NAMES",
    "SWEEP_KINDS",
]

NETWORK_NAMES = ("alexnet", "vgg16", "yolov3")
SWEEP_KINDS = ("in_channels", "spatial", "kernel", "out_channels")

_REQUIRED_KEYS = ("ci", "co", "h", "w", "kh", "kw")
_OPTIONAL_KEYS = {"sh": 1, "sw": 1, "ph": 0, "pw": 0}
_MIN_VALUE = {"ci": 1, "co": 1, "h": 1, "w": 1, "kh": 1, "kw": 1,
              "sh": 1, "sw": 1, "ph": 0, "pw": 0}


@dataclass(frozen=True)
class LayerSpec:
    name: str
    geometry: ConvGeometry


def _parse_layer_line(line, lineno):
    tokens = line.split()
    if tokens[0] != "layer":
        raise ConfigError(f"line {lineno}: expected 'layer', got {tokens[0]!r}")
    fields = {}
    for token in tokens[1:]:
        key, sep, value = token.partition("=")
        if not sep or not value:
            raise ConfigError(f"line {lineno}: malformed field {token!r}")
        if key in fields:
            raise ConfigError(f"line {lineno}: duplicate field {key!r}")
        fields[key] = value
    name = fields.pop("name", None)
    if not name:
        raise ConfigError(f"line {lineno}: missing field 'name'")
    values = {}
    for key, raw in fields.items():
        if key not in _MIN_VALUE:
            raise ConfigError(f"line {lineno}: unknown field {key!r}")
        try:
            values[key] = int(raw)
        except ValueError:
            raise ConfigError(
                f"line {lineno}: field {key!r} must be an integer, "
                f"got {raw!r}") from None
    for key in _REQUIRED_KEYS:
        if key not in values:
            raise ConfigError(f"line {lineno}: missing field {key!r}")
    for key, default in _OPTIONAL_KEYS.items():
        values.setdefault(key, default)
    for key, value in values.items():
        if value < _MIN_VALUE[key]:
            raise ConfigError(
                f"line {lineno}: {key} must be >= {_MIN_VALUE[key]}")
    try:
        geom = ConvGeometry(
            in_channels=values["ci"], out_channels=values["co"],
            in_h=values["h"], in_w=values["w"],
            k_h=values["kh"], k_w=values["kw"],
            stride_h=values["sh"], stride_w=values["sw"],
            pad_h=values["ph"], pad_w=values["pw"])
    except GeometryError as exc:
        raise ConfigError(f"line {lineno}: {exc}") from exc
    return LayerSpec(name=name, geometry=geom)


def parse_layer_config(text):
    """Parse config text into a list of LayerSpec (possibly empty)."""
    specs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        specs.append(_parse_layer_line(line, lineno))
    return specs


def builtin_network(name):
    """Convolutional layers of a named architecture, loaded from preset data."""
    if name not in NETWORK_NAMES:
        raise ConfigError(
            f"unknown network {name!r}; available: {', '.join(NETWORK_NAMES)}")
    text = (resources.files("smmconv") / "presets" / f"{name}.cfg").read_text()
    return parse_layer_config(text)


def _geom(ci, co, size, k):
    return ConvGeometry(in_channels=ci, out_channels=co, in_h=size,
                        in_w=size, k_h=k, k_w=k)


def sweep(kind):
    """Parameter-sweep layer grids (stride 1, no padding).

    in_channels:  {1,16,32,64,128,256} channels x {32,64} input, 3x3, 32 out.
    spatial:      {1,32,64} channels x {32,64,128,256,512} input, 3x3, 32 out.
    kernel:       {3,5,...,15} kernels x {64,256} input, 32 in/out channels.
    out_channels: {1,8,16,32,64,128} outputs at 256x256, 16 in channels, 3x3.
    """
    if kind == "in_channels":
        return [LayerSpec(f"ci{ci}_hw{size}", _geom(ci, 32, size, 3))
                for ci in (1, 16, 32, 64, 128, 256) for size in (32, 64)]
    if kind == "spatial":
        return [LayerSpec(f"hw{size}_ci{ci}", _geom(ci, 32, size, 3))
                for ci in (1, 32, 64) for size in (32, 64, 128, 256, 512)]
    if kind == "kernel":
        return [LayerSpec(f"k{k}_hw{size}", _geom(32, 32, size, k))
                for k in (3, 5, 7, 9, 11, 13, 15) for size in (64, 256)]
    if kind == "out_channels":
        return [LayerSpec(f"co{co}", _geom(16, co, 256, 3))
                for co in (1, 8, 16, 32, 64, 128)]
    raise ConfigError(
        f"unknown sweep {kind!r}; available: {', '.join(SWEEP_KINDS)}")
