"""Reversible payload embedding on interior-range images, plus the frame format.

The reference embedder is prediction-error histogram shifting on the even
checkerboard lattice: odd-parity pixels are never touched, so the decoder
re-derives the exact predictions the encoder used. Errors e = value -
prediction carry one bit each at e = 0 and e = -1; all other errors shift
outward by one to make room. Per-pixel change is at most 1, so any image
inside [1, 254] survives without overflow.

Everything embedded in-band travels as one framed bitstream: a 104-bit
header (magic, version, shift, t_even, t_odd, map bit length, payload bit
length), then the compressed location map, then the payload, MSB-first.
"""

import abc

import numpy as np

from .codec import CompressedMap
from .errors import CapacityError, CorruptionError, ValidationError
from .imagecore import as_gray, parity_mask
from .predictor import predict_grid
from .preprocess import PreprocessParams

FRAME_MAGIC = 0xB5
FRAME_VERSION = 1
FRAME_HEADER_BITS = 104


def bytes_to_bits(data):
    """Expand bytes into a 0/1 uint8 array, most significant bit first."""
    if not data:
        return np.zeros(0, dtype=np.uint8)
    return np.unpackbits(np.frombuffer(bytes(data), dtype=np.uint8))


def bits_to_bytes(bits):
    """Pack a 0/1 array into bytes, zero-padding the final byte."""
    return np.packbits(as_bits(bits)).tobytes()


def as_bits(bits):
    """Validate a bit sequence and return it as a 1-D uint8 array of 0/1."""
    a = np.asarray(bits)
    if a.ndim != 1:
        raise ValidationError(f"bit stream must be 1-D, got shape {a.shape}")
    if a.size and not np.isin(a, (0, 1)).all():
        raise ValidationError("bit stream values must be 0 or 1")
    return a.astype(np.uint8)


def uint_to_bits(value, width):
    """Fixed-width big-endian bit field."""
    value = int(value)
    if not 0 <= value < (1 << width):
        raise ValidationError(f"value {value} does not fit in {width} bits")
    return ((value >> np.arange(width - 1, -1, -1)) & 1).astype(np.uint8)


def bits_to_uint(bits):
    value = 0
    for b in np.asarray(bits).tolist():
        value = (value << 1) | int(b)
    return value


class Embedder(abc.ABC):
    """Contract every embedder fulfils: reversible bit transport on images
    whose pixels keep at least min_T headroom from 0 and 255, moving each
    pixel by at most max_shift."""

    max_shift = 1
    min_T = 1

    @abc.abstractmethod
    def capacity(self, img):
        """Number of payload bits img can carry."""

    @abc.abstractmethod
    def embed(self, img, bits):
        """Return a marked image carrying bits (plus deterministic filler)."""

    @abc.abstractmethod
    def extract(self, marked):
        """Return (full carrier bit stream, original image)."""


class PredictionErrorEmbedder(Embedder):
    """Histogram shifting on even-lattice prediction errors, peaks 0 and -1."""

    max_shift = 1
    min_T = 1

    def _even_errors(self, grid):
        a = grid.astype(np.int64)
        pred = predict_grid(a)
        even = parity_mask(a.shape[0], a.shape[1], 0)
        idx = np.flatnonzero(even.ravel())
        errors = a.ravel()[idx] - pred.ravel()[idx]
        return idx, errors, pred

    def capacity(self, img):
        a = as_gray(img)
        _, errors, _ = self._even_errors(a)
        return int(((errors == 0) | (errors == -1)).sum())

    def embed(self, img, bits):
        a = as_gray(img)
        payload = as_bits(bits)
        if a.size and (int(a.min()) < self.min_T or int(a.max()) > 255 - self.min_T):
            raise ValidationError(
                f"embedding needs pixels in [{self.min_T}, {255 - self.min_T}]"
            )
        idx, errors, pred = self._even_errors(a)
        carrier = (errors == 0) | (errors == -1)
        room = int(carrier.sum())
        if payload.size > room:
            raise CapacityError(
                f"payload of {payload.size} bits exceeds capacity {room}",
                deficit_bits=payload.size - room,
            )
        fill = np.zeros(room, dtype=np.int64)
        fill[: payload.size] = payload
        coded = errors.copy()
        coded[errors >= 1] += 1
        coded[errors <= -2] -= 1
        at_zero = errors[carrier] == 0
        coded[carrier] = np.where(at_zero, fill, -1 - fill)
        flat = a.astype(np.int64).ravel()
        flat[idx] = pred.ravel()[idx] + coded
        return flat.reshape(a.shape).astype(np.uint8)

    def extract(self, marked):
        a = as_gray(marked)
        idx, coded, pred = self._even_errors(a)
        carrier = (coded >= -2) & (coded <= 1)
        c = coded[carrier]
        bits = np.where(c >= 0, c, -(c + 1)).astype(np.uint8)
        errors = coded.copy()
        errors[(coded == 1)] = 0
        errors[(coded == -2)] = -1
        errors[coded >= 2] -= 1
        errors[coded <= -3] += 1
        flat = a.astype(np.int64).ravel()
        flat[idx] = pred.ravel()[idx] + errors
        if int(flat.min()) < 0 or int(flat.max()) > 255:
            raise CorruptionError("recovered pre-embedding image leaves [0, 255]")
        return bits, flat.reshape(a.shape).astype(np.uint8)


def frame_payload(payload, cmap, params):
    """Concatenate header bits, map bits, and payload bits into one stream."""
    bits = as_bits(payload)
    if not isinstance(cmap, CompressedMap):
        raise ValidationError("expected a CompressedMap")
    if not isinstance(params, PreprocessParams):
        raise ValidationError("expected PreprocessParams")
    if bits.size >= 1 << 32 or cmap.bit_length >= 1 << 32:
        raise ValidationError("length field overflow")
    header = np.concatenate(
        [
            uint_to_bits(FRAME_MAGIC, 8),
            uint_to_bits(FRAME_VERSION, 8),
            uint_to_bits(params.shift, 8),
            uint_to_bits(params.t_even, 8),
            uint_to_bits(params.t_odd, 8),
            uint_to_bits(cmap.bit_length, 32),
            uint_to_bits(bits.size, 32),
        ]
    )
    map_bits = bytes_to_bits(cmap.data)[: cmap.bit_length]
    return np.concatenate([header, map_bits, bits])


def deframe_payload(bits, width, height):
    """Parse a framed stream back into (payload, CompressedMap, params).

    The frame does not carry grid dimensions; they come from the marked
    image, so the caller supplies them here.
    """
    stream = as_bits(bits)
    if stream.size < FRAME_HEADER_BITS:
        raise CorruptionError(
            f"stream of {stream.size} bits is shorter than the {FRAME_HEADER_BITS}-bit header"
        )
    magic = bits_to_uint(stream[0:8])
    version = bits_to_uint(stream[8:16])
    if magic != FRAME_MAGIC:
        raise CorruptionError(f"bad frame magic 0x{magic:02X}")
    if version != FRAME_VERSION:
        raise CorruptionError(f"unsupported frame version {version}")
    shift = bits_to_uint(stream[16:24])
    t_even = bits_to_uint(stream[24:32])
    t_odd = bits_to_uint(stream[32:40])
    map_bits = bits_to_uint(stream[40:72])
    payload_bits = bits_to_uint(stream[72:104])
    try:
        params = PreprocessParams(shift, t_even, t_odd)
    except ValidationError as exc:
        raise CorruptionError(f"corrupt frame parameters: {exc}") from exc
    need = FRAME_HEADER_BITS + map_bits + payload_bits
    if need > stream.size:
        raise CorruptionError(
            f"frame declares {need} bits but only {stream.size} are available"
        )
    map_start = FRAME_HEADER_BITS
    map_slice = stream[map_start:map_start + map_bits]
    cmap = CompressedMap(
        2 * params.shift + 1, width, height, map_bits, bits_to_bytes(map_slice)
    )
    payload = stream[map_start + map_bits:map_start + map_bits + payload_bits]
    return payload, cmap, params
