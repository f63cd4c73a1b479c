"""
PGM (netpbm grayscale) reading and writing.

Supports ASCII ``P2`` and binary ``P5`` with 8-bit or 16-bit big-endian
samples. Comments (``#`` to end of line) may appear anywhere in the header.
"""
from pathlib import Path
from typing import List, Tuple, Union
import numpy as np
from app.exceptions import GridError, PgmError
from app.models.grid import ImageGrid

PathLike = Union[str, Path]

_WHITESPACE = b" \t\r\n\v\f"


def quantize(values: np.ndarray, maxval: int = 255) -> np.ndarray:
    """Round half up and clamp to ``[0, maxval]``."""
    return np.clip(np.floor(np.asarray(values, dtype=np.float64) + 0.5), 0, maxval)


def _next_token(data: bytes, pos: int) -> Tuple[bytes, int, int]:
    """
    Next whitespace-delimited token at or after ``pos``, skipping comments.
    
    Returns:
        tuple: (token, token_offset, position_after_token)
    """
    size = len(data)
    while pos < size:
        byte = data[pos:pos + 1]
        if byte == b"#":
            end = data.find(b"\n", pos)
            pos = size if end < 0 else end + 1
        elif byte in _WHITESPACE:
            pos += 1
        else:
            break
    start = pos
    while pos < size and data[pos:pos + 1] not in _WHITESPACE and data[pos:pos + 1] != b"#":
        pos += 1
    return data[start:pos], start, pos


def _header_int(data: bytes, pos: int, name: str) -> Tuple[int, int, int]:
    token, offset, pos = _next_token(data, pos)
    if not token:
        raise PgmError(f"truncated header: missing {name}", offset)
    if not token.isdigit():
        raise PgmError(f"invalid {name} {token!r}", offset)
    return int(token), offset, pos


def read_pgm(path: PathLike, allow_16bit: bool = False) -> ImageGrid:
    """
    Read a PGM file into a grid; sample values are kept exactly.
    
    Args:
        path: File to read
        allow_16bit: Accept maxval up to 65535 (residual and label maps)
        
    Raises:
        PgmError: Bad magic, malformed header, truncated payload or maxval
            out of range; the error carries the byte offset
    """
    data = Path(path).read_bytes()
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise PgmError(f"bad magic {magic!r}, expected P2 or P5", 0)
    
    width, _, pos = _header_int(data, 2, "width")
    height, _, pos = _header_int(data, pos, "height")
    maxval, maxval_offset, pos = _header_int(data, pos, "maxval")
    if width < 1 or height < 1:
        raise PgmError(f"invalid dimensions {width}x{height}", 2)
    limit = 65535 if allow_16bit else 255
    if not 1 <= maxval <= limit:
        raise PgmError(f"maxval {maxval} outside 1..{limit}", maxval_offset)
    
    count = width * height
    if magic == b"P5":
        samples = _binary_payload(data, pos, count, maxval)
    else:
        samples = _ascii_payload(data, pos, count)
    
    too_big = np.flatnonzero(samples > maxval)
    if too_big.size:
        raise PgmError(f"sample {int(too_big[0])} exceeds maxval {maxval}", pos)
    
    return ImageGrid(samples.reshape(height, width).astype(np.float64))


def _binary_payload(data: bytes, pos: int, count: int, maxval: int) -> np.ndarray:
    if pos >= len(data) or data[pos:pos + 1] not in _WHITESPACE:
        raise PgmError("missing whitespace before binary payload", pos)
    start = pos + 1
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    needed = count * dtype.itemsize
    available = len(data) - start
    if available < needed:
        raise PgmError(f"truncated payload: expected {needed} bytes, got {available}", len(data))
    return np.frombuffer(data, dtype=dtype, count=count, offset=start).astype(np.int64)


def _ascii_payload(data: bytes, pos: int, count: int) -> np.ndarray:
    samples: List[int] = []
    while len(samples) < count:
        token, offset, pos = _next_token(data, pos)
        if not token:
            raise PgmError(f"truncated payload: expected {count} samples, got {len(samples)}", offset)
        if not token.isdigit():
            raise PgmError(f"invalid sample {token!r}", offset)
        samples.append(int(token))
    return np.array(samples, dtype=np.int64)


def write_pgm(
    values: Union[np.ndarray, ImageGrid],
    path: PathLike,
    encoding: str = "P5",
    maxval: int = 255,
) -> Path:
    """
    Write a 2-D array as PGM.
    
    Real values are rounded half up and clamped to ``[0, maxval]``; integer
    arrays must already lie in that range. ``maxval > 255`` writes 16-bit
    samples.
    
    Raises:
        GridError: Integer samples outside ``[0, maxval]`` or a bad encoding
        OSError: Path not writable
    """
    if isinstance(values, ImageGrid):
        values = values.values
    array = np.asarray(values)
    if array.ndim != 2:
        raise GridError(f"expected a 2-D array, got shape {array.shape}")
    if encoding not in ("P2", "P5"):
        raise GridError(f"unknown PGM encoding {encoding!r}")
    if not 1 <= maxval <= 65535:
        raise GridError(f"maxval {maxval} outside 1..65535")
    
    if np.issubdtype(array.dtype, np.integer) or array.dtype == np.bool_:
        samples = array.astype(np.int64)
        if samples.size and (samples.min() < 0 or samples.max() > maxval):
            raise GridError(f"integer samples outside 0..{maxval}")
    else:
        samples = quantize(array, maxval).astype(np.int64)
    
    height, width = samples.shape
    header = f"{encoding}\n{width} {height}\n{maxval}\n".encode("ascii")
    if encoding == "P5":
        dtype = ">u2" if maxval > 255 else "u1"
        payload = samples.astype(dtype).tobytes()
    else:
        rows = (" ".join(str(v) for v in row) for row in samples.tolist())
        payload = ("\n".join(rows) + "\n").encode("ascii")
    
    path = Path(path)
    path.write_bytes(header + payload)
    return path
