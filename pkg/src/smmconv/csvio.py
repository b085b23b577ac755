"""CSV serialization of benchmark records.

The format is fixed: one header, one row per record, times with 6 decimals,
speedups with 4, checksums in shortest round-trip form, empty fields for
unsupported (backend, layer) pairs.  Emission is a pure function of the
record list, and parse(emit(records)) followed by emit is byte-identical.
"""

from .errors import ConfigError
from .runner import BenchRecord

__all__ = ["CSV_HEADER", "emit_csv", "parse_csv"]

CSV_HEADER = ("layer,backend,threads,repeats,median_time_s,scratch_bytes,"
              "speedup_vs_im2col,checksum")


def _format_row(record):
    median = "" if record.median_time_s is None \
        else f"{record.median_time_s:.6f}"
    speedup = "" if record.speedup_vs_im2col is None \
        else f"{record.speedup_vs_im2col:.4f}"
    checksum = "" if record.checksum is None else repr(record.checksum)
    return (f"{record.layer},{record.backend},{record.threads},"
            f"{record.repeats},{median},{record.scratch_bytes},"
            f"{speedup},{checksum}")


def emit_csv(records, destination=None):
    """Serialize records; optionally also write to a path or file object."""
    if not records:
        raise ValueError("no records to emit")
    text = "\n".join([CSV_HEADER] + [_format_row(r) for r in records]) + "\n"
    if destination is not None:
        if hasattr(destination, "write"):
            destination.write(text)
        else:
            with open(destination, "w", encoding="ascii") as fh:
                fh.write(text)
    return text


def _parse_optional(token, conv):
    return None if token == "" else conv(token)


def parse_csv(text):
    """Inverse of emit_csv."""
    lines = text.splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ConfigError("missing or unexpected CSV header")
    records = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 8:
            raise ConfigError(f"line {lineno}: expected 8 fields, "
                              f"got {len(parts)}")
        try:
            records.append(BenchRecord(
                layer=parts[0], backend=parts[1], threads=int(parts[2]),
                repeats=int(parts[3]),
                median_time_s=_parse_optional(parts[4], float),
                scratch_bytes=int(parts[5]),
                speedup_vs_im2col=_parse_optional(parts[6], float),
                checksum=_parse_optional(parts[7], float)))
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: {exc}") from None
    return records
