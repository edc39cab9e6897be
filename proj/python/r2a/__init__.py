"""Rationale-to-attention transfer pipeline.

Thin wrapper over the native core. The heavy lifting (training, inference,
file I/O) lives in C++; this module exposes the numeric primitives and the
pipeline stages.
"""

from r2a._core import (
    __version__,
    assign_bins,
    attention_distance,
    commands,
    normalize_mask,
    rationale_frequency,
    run,
    run_with_overrides,
    soft_margin_cosine_distance,
    softmax,
)

__all__ = [
    "__version__",
    "assign_bins",
    "attention_distance",
    "commands",
    "normalize_mask",
    "rationale_frequency",
    "run",
    "run_with_overrides",
    "soft_margin_cosine_distance",
    "softmax",
]
