"""
Grid and mask codecs.

F32G: b"F32G", width and height as little-endian uint32, then width * height
little-endian float32 values in row-major order; NaN and infinities are rejected.
PGM: binary P5 with maxval 255; masks are written as 0 / 255.
"""

import struct
from pathlib import Path

import numpy as np

from app.core.errors import GridFormatError
from app.core.types import BitMask, Grid

__all__ = (
    "decode_grid",
    "decode_pgm",
    "encode_grid",
    "encode_pgm",
    "read_grid",
    "read_map",
    "read_pgm",
    "write_grid",
    "write_pgm",
)

MAGIC = b"F32G"
HEADER = struct.Struct("<4sII")
MAX_CELLS = 1 << 28


def encode_grid(grid: Grid) -> bytes:
    grid = np.asarray(grid)
    if grid.ndim != 2:
        raise GridFormatError(f"expected a 2-D grid, got shape {grid.shape}")
    height, width = grid.shape
    return HEADER.pack(MAGIC, width, height) + grid.astype("<f4").tobytes()


def decode_grid(payload: bytes) -> Grid:
    """Decode an F32G payload into float64 values (exactly the stored float32 values)."""
    if len(payload) < HEADER.size:
        raise GridFormatError(f"payload of {len(payload)} bytes is shorter than the header")
    magic, width, height = HEADER.unpack_from(payload)
    if magic != MAGIC:
        raise GridFormatError(f"bad magic {magic!r}")
    cells = width * height
    if width == 0 or height == 0 or cells > MAX_CELLS:
        raise GridFormatError(f"unsupported dimensions {width}x{height}")
    body = payload[HEADER.size :]
    if len(body) < 4 * cells:
        raise GridFormatError(f"truncated payload: {len(body) // 4} of {cells} values")
    if len(body) > 4 * cells:
        raise GridFormatError(f"{len(body) - 4 * cells} trailing bytes after {cells} values")
    grid = np.frombuffer(body, dtype="<f4").astype(np.float64).reshape(height, width)
    if not np.isfinite(grid).all():
        raise GridFormatError(f"{np.count_nonzero(~np.isfinite(grid))} non-finite values")
    return grid


def encode_pgm(mask: BitMask) -> bytes:
    mask = np.asarray(mask)
    if mask.ndim != 2:
        raise GridFormatError(f"expected a 2-D mask, got shape {mask.shape}")
    height, width = mask.shape
    header = f"P5\n{width} {height}\n255\n".encode("ascii")
    return header + np.where(mask.astype(bool), 255, 0).astype(np.uint8).tobytes()


def _pgm_tokens(payload: bytes, count: int) -> tuple[list[bytes], int]:
    tokens: list[bytes] = []
    pos = 0
    while len(tokens) < count:
        while pos < len(payload) and payload[pos : pos + 1].isspace():
            pos += 1
        if payload[pos : pos + 1] == b"#":
            while pos < len(payload) and payload[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(payload) and not payload[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise GridFormatError("truncated PGM header")
        tokens.append(payload[start:pos])
    # exactly one whitespace byte separates the header from the raster
    return tokens, pos + 1


def decode_pgm(payload: bytes) -> BitMask:
    """Decode a binary PGM; any nonzero sample is set."""
    tokens, offset = _pgm_tokens(payload, 4)
    if tokens[0] != b"P5":
        raise GridFormatError(f"bad PGM magic {tokens[0]!r}")
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError:
        raise GridFormatError("non-numeric PGM header field") from None
    if width < 1 or height < 1 or width * height > MAX_CELLS or not 0 < maxval < 256:
        raise GridFormatError(f"unsupported PGM {width}x{height} maxval {maxval}")
    body = payload[offset : offset + width * height]
    if len(body) < width * height:
        raise GridFormatError(f"truncated PGM raster: {len(body)} of {width * height} bytes")
    return np.frombuffer(body, dtype=np.uint8).reshape(height, width) > 0


def read_grid(path: Path) -> Grid:
    try:
        return decode_grid(path.read_bytes())
    except GridFormatError as e:
        raise GridFormatError(f"{path}: {e}") from None


def write_grid(path: Path, grid: Grid) -> None:
    path.write_bytes(encode_grid(grid))


def read_pgm(path: Path) -> BitMask:
    try:
        return decode_pgm(path.read_bytes())
    except GridFormatError as e:
        raise GridFormatError(f"{path}: {e}") from None


def write_pgm(path: Path, mask: BitMask) -> None:
    path.write_bytes(encode_pgm(mask))


def read_map(path: Path) -> Grid:
    """A probability or ratio map from either format; PGM masks become 0 / 1 grids."""
    if path.suffix == ".pgm":
        return read_pgm(path).astype(np.float64)
    return read_grid(path)
