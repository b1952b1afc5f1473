"""Binary formats for tensor series (TTS1) and predictor checkpoints (TPA1).

All integers are little-endian. Both formats end with a CRC32 of every
preceding byte.

TTS1::

    magic "TTS1" | version u32 | field u8 | order u8 | dims u32[order] | T u64
    | payload (T * prod(dims) scalars, C order, f8 or c16)
    | [timestamps f8[T]] | crc32 u32

Timestamps are present iff the bytes between payload and trailer are 8*T.

TPA1::

    magic "TPA1" | version u32 | field u8 | order u8 | dims u32[order] | T u64
    | meta_len u32 | meta (UTF-8 JSON: hyperparams, aaw, frozen, objective, iterations)
    | ranks u32[order] | p u32 | alpha (p scalars) | n u64
    | U_1..U_M (I_m x R_m scalars each) | n cores | n history tensors | crc32 u32
"""

import json
import logging
import struct
import zlib
from collections.abc import Sequence
from pathlib import Path
from typing import Any

import numpy as np

from topa.schemas.aaw import AAWConfig
from topa.schemas.hyperparams import ARParams, Hyperparams
from topa.schemas.record import TTSRecord
from topa.schemas.report import BenchReport, RunReport
from topa.schemas.state import PredictorState
from topa.schemas.tensor import MAX_ORDER, DenseTensor, ScalarField

logger = logging.getLogger(__name__)

TTS_MAGIC = b"TTS1"
CHECKPOINT_MAGIC = b"TPA1"
FORMAT_VERSION = 1

# Refuse payloads above 64 GiB
MAX_PAYLOAD_BYTES = 1 << 36

_PREFIX = struct.Struct("<4sIBB")
_U32 = struct.Struct("<I")
_U64 = struct.Struct("<Q")


class TTSFormatError(ValueError):
    """Malformed, truncated or unsupported file."""

    pass


class ChecksumMismatchError(TTSFormatError):
    """CRC32 trailer does not match the file contents."""

    pass


def _scalar_dtype(field: ScalarField) -> np.dtype[Any]:
    return np.dtype("<f8") if field is ScalarField.REAL else np.dtype("<c16")


def _payload_bytes(field: ScalarField, count: int) -> int:
    size = field.scalar_bytes * count
    if size > MAX_PAYLOAD_BYTES:
        raise TTSFormatError(f"payload of {size} bytes exceeds the supported maximum")
    return size


def _header(magic: bytes, field: ScalarField, dims: Sequence[int], t: int) -> bytes:
    if not 1 <= len(dims) <= MAX_ORDER:
        raise TTSFormatError(f"unsupported tensor order {len(dims)}")
    if any(not 0 < d < 1 << 32 for d in dims):
        raise TTSFormatError(f"dims {tuple(dims)} do not fit u32")
    return (
        _PREFIX.pack(magic, FORMAT_VERSION, field.tag, len(dims))
        + struct.pack(f"<{len(dims)}I", *dims)
        + _U64.pack(t)
    )


def _array_bytes(array: DenseTensor, field: ScalarField) -> bytes:
    return np.ascontiguousarray(array, dtype=_scalar_dtype(field)).tobytes()


class _Reader:
    """Cursor over a verified byte buffer."""

    def __init__(self, data: bytes, path: Path):
        self.data = data
        self.offset = 0
        self.path = path

    def take(self, n: int) -> bytes:
        if n < 0 or self.offset + n > len(self.data):
            raise TTSFormatError(f"{self.path}: truncated file")
        chunk = self.data[self.offset : self.offset + n]
        self.offset += n
        return chunk

    def u32(self) -> int:
        return int(_U32.unpack(self.take(4))[0])

    def u64(self) -> int:
        return int(_U64.unpack(self.take(8))[0])

    def u32s(self, n: int) -> tuple[int, ...]:
        return tuple(int(v) for v in struct.unpack(f"<{n}I", self.take(4 * n)))

    def array(self, field: ScalarField, shape: tuple[int, ...]) -> DenseTensor:
        count = int(np.prod(shape, dtype=np.int64))
        raw = self.take(_payload_bytes(field, count))
        out = np.frombuffer(raw, dtype=_scalar_dtype(field)).reshape(shape)
        return out.astype(field.dtype)

    @property
    def remaining(self) -> int:
        return len(self.data) - self.offset


def _open_verified(path: Path, magic: bytes) -> tuple[_Reader, ScalarField, tuple[int, ...], int]:
    data = Path(path).read_bytes()
    if len(data) < _PREFIX.size + 4:
        raise TTSFormatError(f"{path}: truncated file")
    found, version, tag, order = _PREFIX.unpack_from(data)
    if found != magic:
        raise TTSFormatError(f"{path}: bad magic {found!r}, expected {magic!r}")
    if version != FORMAT_VERSION:
        raise TTSFormatError(f"{path}: unsupported version {version}")
    body, trailer = data[:-4], data[-4:]
    if zlib.crc32(body) != _U32.unpack(trailer)[0]:
        raise ChecksumMismatchError(f"{path}: checksum mismatch")
    try:
        field = ScalarField.from_tag(tag)
    except ValueError as e:
        raise TTSFormatError(f"{path}: {e}") from e
    if not 1 <= order <= MAX_ORDER:
        raise TTSFormatError(f"{path}: unsupported tensor order {order}")
    reader = _Reader(body, path)
    reader.take(_PREFIX.size)
    dims = reader.u32s(order)
    if 0 in dims:
        raise TTSFormatError(f"{path}: zero dimension in dims {dims}")
    t = reader.u64()
    return reader, field, dims, t


def _finish(path: Path, body: bytes) -> None:
    Path(path).write_bytes(body + _U32.pack(zlib.crc32(body)))


def write_tts(record: TTSRecord, path: Path | str) -> None:
    """Write a tensor series in the TTS1 format."""
    parts = [_header(TTS_MAGIC, record.field, record.dims, record.t)]
    parts.extend(_array_bytes(x, record.field) for x in record.tensors)
    if record.timestamps is not None:
        parts.append(np.asarray(record.timestamps, dtype="<f8").tobytes())
    _finish(Path(path), b"".join(parts))
    logger.debug("wrote %d tensors of dims %s to %s", record.t, record.dims, path)


def read_tts(path: Path | str) -> TTSRecord:
    """Read a TTS1 file; rejects unknown magic/version, truncation and bad checksums."""
    path = Path(path)
    reader, field, dims, t = _open_verified(path, TTS_MAGIC)
    per_tensor = int(np.prod(dims, dtype=np.int64))
    if per_tensor * t > MAX_PAYLOAD_BYTES // field.scalar_bytes:
        raise TTSFormatError(f"{path}: dims {dims} x T={t} overflow the supported size")
    if reader.remaining < field.scalar_bytes * per_tensor * t:
        raise TTSFormatError(f"{path}: truncated file")
    tensors = [reader.array(field, dims) for _ in range(t)]
    timestamps = None
    if reader.remaining == 8 * t and t > 0:
        timestamps = [float(v) for v in np.frombuffer(reader.take(8 * t), dtype="<f8")]
    if reader.remaining != 0:
        raise TTSFormatError(f"{path}: {reader.remaining} unexpected trailing bytes")
    return TTSRecord(dims=dims, field=field, tensors=tensors, timestamps=timestamps)


def write_checkpoint(state: PredictorState, hyper: Hyperparams, path: Path | str) -> None:
    """Write a predictor checkpoint in the TPA1 format."""
    field = ScalarField.of(state.params.alpha)
    if any(np.iscomplexobj(a) for a in (*state.us, *state.history)):
        field = ScalarField.COMPLEX
    meta = json.dumps(
        {
            "hyperparams": hyper.model_dump(mode="json"),
            "aaw": state.aaw.model_dump(mode="json") if state.aaw else None,
            "frozen": state.frozen,
            "objective": state.objective,
            "iterations": state.iterations,
        },
        sort_keys=True,
    ).encode()
    n = len(state.cores)
    parts = [
        _header(CHECKPOINT_MAGIC, field, state.dims, state.t),
        _U32.pack(len(meta)),
        meta,
        struct.pack(f"<{len(state.ranks)}I", *state.ranks),
        _U32.pack(state.params.p),
        _array_bytes(state.params.alpha, field),
        _U64.pack(n),
    ]
    parts.extend(_array_bytes(u, field) for u in state.us)
    parts.extend(_array_bytes(g, field) for g in state.cores)
    parts.extend(_array_bytes(x, field) for x in state.history)
    _finish(Path(path), b"".join(parts))


def read_checkpoint(path: Path | str) -> tuple[PredictorState, Hyperparams]:
    """Read a TPA1 checkpoint back into a state and its hyperparameters."""
    path = Path(path)
    reader, field, dims, t = _open_verified(path, CHECKPOINT_MAGIC)
    try:
        meta = json.loads(reader.take(reader.u32()).decode())
        hyper = Hyperparams.model_validate(meta["hyperparams"])
        aaw = AAWConfig.model_validate(meta["aaw"]) if meta["aaw"] else None
    except (ValueError, KeyError) as e:
        raise TTSFormatError(f"{path}: invalid checkpoint metadata: {e}") from e
    ranks = reader.u32s(len(dims))
    p = reader.u32()
    alpha = reader.array(field, (p,))
    n = reader.u64()
    if n * int(np.prod(dims, dtype=np.int64)) > MAX_PAYLOAD_BYTES // field.scalar_bytes:
        raise TTSFormatError(f"{path}: retained series of length {n} overflows the supported size")
    us = [reader.array(field, (i, r)) for i, r in zip(dims, ranks, strict=True)]
    cores = [reader.array(field, ranks) for _ in range(n)]
    history = [reader.array(field, dims) for _ in range(n)]
    if reader.remaining != 0:
        raise TTSFormatError(f"{path}: {reader.remaining} unexpected trailing bytes")
    state = PredictorState(
        us=us,
        cores=cores,
        params=ARParams(alpha=alpha),
        history=history,
        t=t,
        frozen=meta["frozen"],
        objective=meta["objective"],
        iterations=meta["iterations"],
        aaw=aaw,
    )
    return state, hyper


def load_matrix_series(path: Path | str, dims: Sequence[int], delimiter: str = ",") -> TTSRecord:
    """Read a delimited text file with one flattened (C order) tensor per line."""
    rows = np.loadtxt(Path(path), delimiter=delimiter, ndmin=2, dtype=np.float64)
    dims = tuple(int(d) for d in dims)
    size = int(np.prod(dims, dtype=np.int64))
    if rows.shape[1] != size:
        raise TTSFormatError(f"{path}: rows have {rows.shape[1]} values, dims {dims} need {size}")
    logger.info("loaded %d tensors of dims %s from %s", rows.shape[0], dims, path)
    return TTSRecord.from_arrays([row.reshape(dims) for row in rows])


def write_report(report: RunReport | BenchReport, path: Path | str) -> None:
    """Write a report as JSON."""
    Path(path).write_text(report.model_dump_json(indent=2) + "\n")
