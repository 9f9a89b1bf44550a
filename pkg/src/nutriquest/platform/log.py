"""Append-only persistent record log.

Binary layout: an 8-byte header (magic ``NQLG`` + big-endian uint32
format version), then records, each a big-endian uint32 payload length
followed by that many bytes of canonical JSON (sorted keys, compact
separators). Canonical serialization makes replayed writes byte-identical
and the log diffable by hash.

Recovery rule: a truncated trailing record (crash mid-write) is dropped;
everything before it is intact because records are appended whole.
"""

from __future__ import annotations

import json
import pathlib
import struct

from ..errors import ParseError

MAGIC = b"NQLG"
VERSION = 1
_HEADER = struct.Struct(">4sI")
_LEN = struct.Struct(">I")


def encode_record(record: dict) -> bytes:
    payload = json.dumps(record, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return _LEN.pack(len(payload)) + payload


class RecordLog:
    """Writer with crash-recovery trimming on open."""

    def __init__(self, path):
        self.path = pathlib.Path(path)
        if self.path.exists() and self.path.stat().st_size > 0:
            valid = self._scan_valid_length()
            if valid < self.path.stat().st_size:
                with open(self.path, "r+b") as fh:
                    fh.truncate(valid)
            self._fh = open(self.path, "ab")
        else:
            self._fh = open(self.path, "wb")
            self._fh.write(_HEADER.pack(MAGIC, VERSION))
            self._fh.flush()

    def _scan_valid_length(self) -> int:
        with open(self.path, "rb") as fh:
            header = fh.read(_HEADER.size)
            if len(header) < _HEADER.size:
                return 0
            magic, version = _HEADER.unpack(header)
            if magic != MAGIC:
                raise ParseError(f"not a record log (magic {magic!r})",
                                 path=str(self.path))
            if version != VERSION:
                raise ParseError(f"unsupported log version {version}",
                                 path=str(self.path))
            offset = _HEADER.size
            while True:
                length_bytes = fh.read(_LEN.size)
                if len(length_bytes) < _LEN.size:
                    return offset
                (length,) = _LEN.unpack(length_bytes)
                payload = fh.read(length)
                if len(payload) < length:
                    return offset
                offset += _LEN.size + length

    def append(self, record: dict) -> None:
        self._fh.write(encode_record(record))
        self._fh.flush()

    def close(self) -> None:
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def read_log(path):
    """Yield records; silently stops at a truncated tail."""
    path = pathlib.Path(path)
    if not path.exists():
        return
    with open(path, "rb") as fh:
        header = fh.read(_HEADER.size)
        if len(header) < _HEADER.size:
            return
        magic, version = _HEADER.unpack(header)
        if magic != MAGIC:
            raise ParseError(f"not a record log (magic {magic!r})", path=str(path))
        if version != VERSION:
            raise ParseError(f"unsupported log version {version}", path=str(path))
        while True:
            length_bytes = fh.read(_LEN.size)
            if len(length_bytes) < _LEN.size:
                return
            (length,) = _LEN.unpack(length_bytes)
            payload = fh.read(length)
            if len(payload) < length:
                return
            yield json.loads(payload.decode("utf-8"))
