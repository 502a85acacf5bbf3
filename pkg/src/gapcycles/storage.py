"""Binary cycle cache files.

Layout, little-endian::

    b"GAPC"        magic
    u16            format version (1)
    u64            stage prime
    u8             bytes per gap (1 or 2)
    u64            gap count
    gaps           count * width bytes
    u32            CRC-32 of the gap bytes

Span and phi are not stored; they are recomputed and checked on load.
"""

from __future__ import annotations

import os
import struct
import zlib
from pathlib import Path
from typing import BinaryIO, Union

import numpy as np

from gapcycles.cycle import GapCycle
from gapcycles.errors import ChecksumError, MagicError, TruncationError

MAGIC = b"GAPC"
VERSION = 1
_HEADER = struct.Struct("<4sHQBQ")
_CRC = struct.Struct("<I")
_DTYPES = {1: np.dtype("<u1"), 2: np.dtype("<u2")}

# Above this many gaps, load() skips the full sum check when asked to.
SUM_CHECK_LIMIT = 50_000_000

PathLike = Union[str, os.PathLike]


def save_cycle(cycle: GapCycle, destination: PathLike | BinaryIO) -> None:
    data = cycle.gaps.astype(_DTYPES[cycle.width], copy=False).tobytes()
    header = _HEADER.pack(MAGIC, VERSION, cycle.prime, cycle.width, cycle.length)
    payload = header + data + _CRC.pack(zlib.crc32(data))
    if hasattr(destination, "write"):
        destination.write(payload)
    else:
        Path(destination).write_bytes(payload)


def load_cycle(source: PathLike | BinaryIO, skip_sum_check: bool = False) -> GapCycle:
    """Read and re-validate a cycle file.

    The sum check is skipped only if ``skip_sum_check`` is set and the cycle
    has more than ``SUM_CHECK_LIMIT`` gaps; the length check always runs.
    """
    raw = source.read() if hasattr(source, "read") else Path(source).read_bytes()
    if len(raw) < 4 or raw[:4] != MAGIC:
        raise MagicError(f"bad magic {raw[:4]!r}, expected {MAGIC!r}")
    if len(raw) < _HEADER.size:
        raise TruncationError(f"file ends inside the {_HEADER.size}-byte header")
    _, version, prime, width, count = _HEADER.unpack_from(raw)
    if version != VERSION:
        raise MagicError(f"unsupported format version {version}")
    if width not in _DTYPES:
        raise MagicError(f"unsupported gap width {width}")
    end = _HEADER.size + count * width
    if len(raw) < end + _CRC.size:
        raise TruncationError(f"expected {end + _CRC.size} bytes, file has {len(raw)}")
    data = raw[_HEADER.size : end]
    (crc,) = _CRC.unpack_from(raw, end)
    if zlib.crc32(data) != crc:
        raise ChecksumError(f"CRC mismatch: stored {crc:#010x}, computed {zlib.crc32(data):#010x}")
    gaps = np.frombuffer(data, dtype=_DTYPES[width]).astype(_DTYPES[width].newbyteorder("="))
    cycle = GapCycle(int(prime), gaps)
    cycle.validate(check_sum=not (skip_sum_check and count > SUM_CHECK_LIMIT))
    return cycle
