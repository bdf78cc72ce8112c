"""Canonical binary encoding helpers.

All persistent binary structures use the same primitives: little-endian
fixed-width integers, length-prefixed byte strings (u32 length), and
count-prefixed lists. 32-byte digests render as ``h256:<64 hex>`` in text.
"""

from __future__ import annotations


class Writer:
    """Accumulates a canonical byte encoding."""

    def __init__(self):
        self._parts: list[bytes] = []

    def u8(self, v: int) -> "Writer":
        self._parts.append(v.to_bytes(1, "little"))
        return self

    def u32(self, v: int) -> "Writer":
        self._parts.append(v.to_bytes(4, "little"))
        return self

    def u64(self, v: int) -> "Writer":
        self._parts.append(v.to_bytes(8, "little"))
        return self

    def raw(self, b: bytes) -> "Writer":
        self._parts.append(b)
        return self

    def bytes(self, b: bytes) -> "Writer":
        self.u32(len(b))
        self._parts.append(b)
        return self

    def str(self, s: str) -> "Writer":
        return self.bytes(s.encode("utf-8"))

    def getvalue(self) -> bytes:
        return b"".join(self._parts)


class Reader:
    """Decodes a canonical byte encoding, validating lengths as it goes."""

    def __init__(self, data: bytes):
        self._data = data
        self._pos = 0

    def _take(self, n: int) -> bytes:
        if self._pos + n > len(self._data):
            raise ValueError("truncated encoding")
        out = self._data[self._pos : self._pos + n]
        self._pos += n
        return out

    def u8(self) -> int:
        return self._take(1)[0]

    def u32(self) -> int:
        return int.from_bytes(self._take(4), "little")

    def u64(self) -> int:
        return int.from_bytes(self._take(8), "little")

    def raw(self, n: int) -> bytes:
        return self._take(n)

    def bytes(self) -> bytes:
        return self._take(self.u32())

    def str(self) -> str:
        return self.bytes().decode("utf-8")

    def expect_end(self) -> None:
        if self._pos != len(self._data):
            raise ValueError("trailing bytes after encoding")


def digest_to_text(digest: bytes) -> str:
    """Render a 32-byte digest as ``h256:<hex>``."""
    if len(digest) != 32:
        raise ValueError("digest must be 32 bytes")
    return "h256:" + digest.hex()


def digest_from_text(text: str) -> bytes:
    """Parse a ``h256:<hex>`` digest rendering."""
    if not text.startswith("h256:"):
        raise ValueError("digest text must start with 'h256:'")
    hexpart = text[5:]
    if len(hexpart) != 64 or hexpart != hexpart.lower():
        raise ValueError("digest text must be 64 lowercase hex characters")
    return bytes.fromhex(hexpart)
