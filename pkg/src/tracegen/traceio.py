"""Trace and histogram file formats.

Three surfaces: a headerless binary stream of 64-bit little-endian
references, per-request text records (`asu,lba,size_bytes,opcode,timestamp`)
for storage replay tools, and plain `value,count` CSV for histograms and
`cache_size,hit_ratio` CSV for curves.  All numeric text uses `.` decimals,
no locale.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .analysis import IrdHistogram
from .cachesim import HitRatioCurve
from .distributions import IrdSpec, IrmSpec, build_irm, empirical_ird
from .generator import Trace

PathLike = Union[str, Path]

DEFAULT_BLOCK_SIZE = 4096


class TraceFormatError(ValueError):
    """Raised when a trace or histogram file does not match its format."""


@contextmanager
def _text_sink(dest):
    """Yield a writable text stream for a path or pass a file-like through."""
    if hasattr(dest, "write"):
        yield dest
    else:
        with open(dest, "w", encoding="ascii") as fh:
            yield fh


def write_parda(trace: Trace, path: PathLike) -> None:
    """Write references as a flat little-endian uint64 stream, no header."""
    data = np.ascontiguousarray(trace.refs, dtype="<u8").tobytes()
    Path(path).write_bytes(data)


def read_parda(path: PathLike) -> Trace:
    """Read a flat 64-bit reference stream written by write_parda."""
    data = Path(path).read_bytes()
    if len(data) % 8 != 0:
        good = len(data) - len(data) % 8
        raise TraceFormatError(
            f"{path}: truncated stream, {len(data)} bytes is not a multiple of 8 "
            f"(last whole record ends at offset {good})"
        )
    refs = np.frombuffer(data, dtype="<u8")
    return Trace(refs=refs.astype(np.uint64))


def write_spc(trace: Trace, path: PathLike, block_size: int = DEFAULT_BLOCK_SIZE) -> None:
    """Write one `asu,lba,size_bytes,opcode,timestamp` line per request.

    The ASU is fixed at 0, the timestamp is the request's position index,
    opcodes are lowercase r/w.  Undecorated traces default to single-block
    reads.
    """
    if block_size < 1:
        raise ValueError("block size must be >= 1")
    refs = trace.refs.tolist()
    reads = trace.reads.tolist() if trace.reads is not None else None
    sizes = trace.sizes.tolist() if trace.sizes is not None else None
    with open(path, "w", encoding="ascii") as out:
        for i, lba in enumerate(refs):
            op = "r" if reads is None or reads[i] else "w"
            nbytes = (sizes[i] if sizes is not None else 1) * block_size
            out.write(f"{0},{lba},{nbytes},{op},{float(i):.1f}\n")


def read_spc(path: PathLike, block_size: int = DEFAULT_BLOCK_SIZE) -> Trace:
    """Read request records, expanding each into per-block references.

    A record of s blocks at LBA a becomes references a, a+1, ..., a+s-1
    (mixed sizes thereby introduce sequential runs).  Timestamps are
    dropped; op flags are kept per block.
    """
    if block_size < 1:
        raise ValueError("block size must be >= 1")
    refs: list[int] = []
    reads: list[bool] = []
    with open(path, "r", encoding="ascii") as src:
        for lineno, raw in enumerate(src, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            if len(parts) != 5:
                raise TraceFormatError(
                    f"{path}:{lineno}: expected 5 comma-separated fields, got {len(parts)}"
                )
            try:
                lba = int(parts[1])
                nbytes = int(parts[2])
                float(parts[4])
            except ValueError as exc:
                raise TraceFormatError(f"{path}:{lineno}: {exc}") from None
            op = parts[3].strip().lower()
            if op not in ("r", "w"):
                raise TraceFormatError(f"{path}:{lineno}: opcode must be r or w, got {parts[3]!r}")
            if nbytes < block_size or nbytes % block_size != 0:
                raise TraceFormatError(
                    f"{path}:{lineno}: size {nbytes} is not a positive multiple of "
                    f"block size {block_size}"
                )
            blocks = nbytes // block_size
            refs.extend(range(lba, lba + blocks))
            reads.extend([op == "r"] * blocks)
    return Trace(refs=np.array(refs, dtype=np.uint64), reads=np.array(reads, dtype=bool))


@dataclass(frozen=True)
class EmpiricalHistogram:
    """`value,count` rows loaded from disk, with an optional infinity row."""

    values: np.ndarray
    counts: np.ndarray
    inf_count: float

    def to_ird_spec(self) -> IrdSpec:
        """Interpret rows as an inter-reference distance histogram."""
        return empirical_ird(self.values, self.counts, self.inf_count)

    def to_irm_spec(self) -> IrmSpec:
        """Interpret rows as per-item popularity counts (values = item ids)."""
        if self.inf_count:
            raise ValueError("popularity counts cannot contain an infinity row")
        if np.any(self.values < 0):
            raise ValueError("item ids must be non-negative")
        universe = int(self.values.max()) + 1
        dense = np.zeros(universe)
        dense[self.values] = self.counts
        return build_irm("empirical", universe, counts=dense)


def load_empirical_histogram(path: PathLike) -> EmpiricalHistogram:
    """Load `value,count` CSV rows; a value of `inf` maps to the infinity mass."""
    values: list[int] = []
    counts: list[float] = []
    inf_count = 0.0
    seen = False
    with open(path, "r", encoding="utf-8") as src:
        for lineno, raw in enumerate(src, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = [p.strip() for p in line.split(",")]
            if parts[0].lower() == "value":
                continue  # header row
            if len(parts) != 2:
                raise TraceFormatError(f"{path}:{lineno}: expected `value,count`")
            try:
                count = float(parts[1])
            except ValueError:
                raise TraceFormatError(f"{path}:{lineno}: bad count {parts[1]!r}") from None
            if count < 0:
                raise TraceFormatError(f"{path}:{lineno}: negative count")
            seen = True
            if parts[0].lower() in ("inf", "infinity"):
                inf_count += count
                continue
            try:
                value = int(parts[0])
            except ValueError:
                raise TraceFormatError(f"{path}:{lineno}: bad value {parts[0]!r}") from None
            values.append(value)
            counts.append(count)
    if not seen:
        raise TraceFormatError(f"{path}: empty histogram")
    return EmpiricalHistogram(
        values=np.array(values, dtype=np.int64),
        counts=np.array(counts, dtype=np.float64),
        inf_count=inf_count,
    )


def save_histogram_csv(hist: IrdHistogram, path) -> None:
    """Write exact `value,count` rows, ending with the infinity row."""
    with _text_sink(path) as out:
        out.write("value,count\n")
        for value, count in zip(hist.values.tolist(), hist.counts.tolist()):
            out.write(f"{value},{count}\n")
        out.write(f"inf,{hist.inf_count}\n")


def save_hrc_csv(curve: HitRatioCurve, path) -> None:
    """Write `cache_size,hit_ratio` rows with curve metadata in a comment."""
    with _text_sink(path) as out:
        out.write(
            f"# policy={curve.policy} footprint={curve.footprint} length={curve.length}\n"
        )
        out.write("cache_size,hit_ratio\n")
        for size, ratio in zip(curve.sizes.tolist(), curve.hit_ratios.tolist()):
            size_txt = f"{int(size)}" if float(size).is_integer() else repr(size)
            out.write(f"{size_txt},{ratio!r}\n")


def load_hrc_csv(path: PathLike) -> HitRatioCurve:
    """Read a curve written by save_hrc_csv."""
    policy = "unknown"
    footprint: Optional[int] = None
    length = 0
    sizes: list[float] = []
    ratios: list[float] = []
    with open(path, "r", encoding="ascii") as src:
        for lineno, raw in enumerate(src, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                for token in line[1:].split():
                    if "=" not in token:
                        continue
                    key, _, value = token.partition("=")
                    if key == "policy":
                        policy = value
                    elif key == "footprint":
                        footprint = int(value)
                    elif key == "length":
                        length = int(value)
                continue
            if line.lower().startswith("cache_size"):
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise TraceFormatError(f"{path}:{lineno}: expected `cache_size,hit_ratio`")
            try:
                sizes.append(float(parts[0]))
                ratios.append(float(parts[1]))
            except ValueError:
                raise TraceFormatError(f"{path}:{lineno}: bad number") from None
    if not sizes:
        raise TraceFormatError(f"{path}: no curve points")
    if footprint is None:
        footprint = int(math.ceil(max(sizes)))
    return HitRatioCurve(
        policy=policy,
        sizes=np.array(sizes),
        hit_ratios=np.array(ratios),
        footprint=footprint,
        length=length,
    )
