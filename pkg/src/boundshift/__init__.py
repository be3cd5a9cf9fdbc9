"""Reversible data embedding for 8-bit grayscale images full of boundary pixels.

The package clears boundary pixels with an invertible prediction-driven
checkerboard shift, compresses the resulting location map, and embeds the
map and a payload in-band with a histogram-shifting embedder, so a blind
decoder recovers both the payload and the original image bit for bit.
"""

from .codec import (
    CompressedMap,
    compress,
    compress_binary_baseline,
    decompress,
    deserialize_map,
    serialize_map,
)
from .embedder import (
    FRAME_HEADER_BITS,
    Embedder,
    PredictionErrorEmbedder,
    bits_to_bytes,
    bytes_to_bits,
    deframe_payload,
    frame_payload,
)
from .errors import (
    BoundShiftError,
    CapacityError,
    CorruptionError,
    PgmFormatError,
    ValidationError,
)
from .imagecore import (
    LocationMap,
    count_boundary_pixels,
    parity_mask,
    parity_of,
    psnr,
)
from .pgm import load_pgm, read_pgm, save_pgm, write_pgm
from .pipeline import (
    EmbedResult,
    SweepRecord,
    embed_full,
    evaluate_cell,
    extract_full,
    max_payload,
    max_payload_baseline,
    sweep,
)
from .predictor import predict, predict_grid
from .preprocess import (
    PreprocessOutput,
    PreprocessParams,
    boundary_count_after,
    forward,
    inverse,
)

__version__ = "0.1.0"

__all__ = [
    "BoundShiftError",
    "CapacityError",
    "CompressedMap",
    "CorruptionError",
    "EmbedResult",
    "Embedder",
    "FRAME_HEADER_BITS",
    "LocationMap",
    "PgmFormatError",
    "PredictionErrorEmbedder",
    "PreprocessOutput",
    "PreprocessParams",
    "SweepRecord",
    "ValidationError",
    "bits_to_bytes",
    "boundary_count_after",
    "bytes_to_bits",
    "compress",
    "compress_binary_baseline",
    "count_boundary_pixels",
    "decompress",
    "deframe_payload",
    "deserialize_map",
    "embed_full",
    "evaluate_cell",
    "extract_full",
    "forward",
    "frame_payload",
    "inverse",
    "load_pgm",
    "max_payload",
    "max_payload_baseline",
    "parity_mask",
    "parity_of",
    "predict",
    "predict_grid",
    "psnr",
    "read_pgm",
    "save_pgm",
    "serialize_map",
    "sweep",
    "write_pgm",
]
