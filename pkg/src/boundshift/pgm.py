"""Strict PGM (P5 binary, P2 ASCII) decoding and canonical encoding.

Decode errors always carry the byte offset of the offending data. The
encoder emits the canonical header form ``P5\\n<w> <h>\\n255\\n`` so that
write -> read -> write is byte-identical.
"""

import numpy as np

from .errors import PgmFormatError
from .imagecore import as_gray

_WHITESPACE = b" \t\n\r\x0b\x0c"


def _skip_separators(data, pos, allow_comments):
    """Advance past whitespace (and, in the header, '#' comments)."""
    n = len(data)
    while pos < n:
        b = data[pos]
        if b in _WHITESPACE:
            pos += 1
        elif allow_comments and b == ord("#"):
            while pos < n and data[pos] not in b"\r\n":
                pos += 1
        else:
            break
    return pos


def _next_token(data, pos, allow_comments, what):
    pos = _skip_separators(data, pos, allow_comments)
    if pos >= len(data):
        raise PgmFormatError(f"unexpected end of data while reading {what}", offset=len(data))
    start = pos
    n = len(data)
    while pos < n and data[pos] not in _WHITESPACE and not (allow_comments and data[pos] == ord("#")):
        pos += 1
    return data[start:pos], start, pos


def _int_token(data, pos, allow_comments, what, max_value):
    tok, start, pos = _next_token(data, pos, allow_comments, what)
    if not tok.isdigit():
        raise PgmFormatError(f"non-numeric {what} token {tok!r}", offset=start)
    value = int(tok)
    if value > max_value:
        raise PgmFormatError(f"{what} {value} exceeds {max_value}", offset=start)
    return value, start, pos


def read_pgm(data):
    """Decode a PGM byte stream (P5 or P2) into a 2-D uint8 image."""
    data = bytes(data)
    if len(data) < 2 or data[:1] != b"P":
        raise PgmFormatError("not a PGM stream (bad magic)", offset=0)
    magic = data[:2]
    if magic not in (b"P5", b"P2"):
        raise PgmFormatError(f"unsupported PGM flavor {magic!r}", offset=0)
    pos = 2

    width, w_off, pos = _int_token(data, pos, True, "width", 2**31 - 1)
    if width < 1:
        raise PgmFormatError("width must be positive", offset=w_off)
    height, h_off, pos = _int_token(data, pos, True, "height", 2**31 - 1)
    if height < 1:
        raise PgmFormatError("height must be positive", offset=h_off)
    maxval, m_off, pos = _int_token(data, pos, True, "maxval", 2**31 - 1)
    if not 1 <= maxval <= 255:
        raise PgmFormatError(f"maxval {maxval} unsupported (need 1..255)", offset=m_off)

    count = width * height
    if magic == b"P5":
        if pos >= len(data) or data[pos] not in _WHITESPACE:
            raise PgmFormatError("maxval must be followed by one whitespace byte", offset=pos)
        pos += 1
        raster = data[pos:pos + count]
        if len(raster) < count:
            raise PgmFormatError(
                f"truncated raster: expected {count} bytes, found {len(raster)}",
                offset=len(data),
            )
        if len(data) > pos + count:
            raise PgmFormatError("trailing data after raster", offset=pos + count)
        pixels = np.frombuffer(raster, dtype=np.uint8)
        if maxval < 255:
            over = np.flatnonzero(pixels > maxval)
            if over.size:
                raise PgmFormatError(
                    f"pixel value {pixels[over[0]]} exceeds maxval {maxval}",
                    offset=pos + int(over[0]),
                )
        return pixels.reshape(height, width).copy()

    # P2: whitespace-separated ASCII sample values. Each needs at least one
    # byte plus a separator, which bounds the plausible sample count.
    if count > len(data) - pos + 1:
        raise PgmFormatError(
            f"truncated raster: expected {count} samples", offset=len(data)
        )
    values = np.empty(count, dtype=np.uint8)
    for k in range(count):
        v, v_off, pos = _int_token(data, pos, False, "raster", 2**31 - 1)
        if v > maxval:
            raise PgmFormatError(f"pixel value {v} exceeds maxval {maxval}", offset=v_off)
        values[k] = v
    tail = _skip_separators(data, pos, False)
    if tail != len(data):
        raise PgmFormatError("trailing data after raster", offset=tail)
    return values.reshape(height, width)


def write_pgm(img, flavor="P5"):
    """Encode an image in the canonical header form; P2 emits one row per line."""
    a = as_gray(img)
    if flavor not in ("P5", "P2"):
        raise PgmFormatError(f"unsupported PGM flavor {flavor!r}")
    h, w = a.shape
    header = f"{flavor}\n{w} {h}\n255\n".encode("ascii")
    if flavor == "P5":
        return header + a.tobytes()
    body = "\n".join(" ".join(str(v) for v in row) for row in a.tolist())
    return header + body.encode("ascii") + b"\n"


def load_pgm(path):
    """Read a PGM file from disk."""
    with open(path, "rb") as fh:
        return read_pgm(fh.read())


def save_pgm(path, img, flavor="P5"):
    """Write an image to disk as PGM."""
    data = write_pgm(img, flavor)
    with open(path, "wb") as fh:
        fh.write(data)
