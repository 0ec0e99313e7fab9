"""Tabulated random functions and brute-force claw/collision verifiers.

Elements of a domain ``X`` and range ``Y`` are plain integers in
``[0, |X|)`` and ``[0, |Y|)``. A :class:`FunctionTable` is the simulated
oracle: every value is materialised up front so that repeated searches see
a consistent function.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "FunctionTable",
    "ClawWitness",
    "CollisionWitness",
    "sample_random_function",
    "image_size",
    "verify_claw",
    "verify_collision",
    "partition_domain",
    "restrict_domain",
]

_BINARY_MAGIC = b"MCFT"


def _value_dtype(range_size: int) -> np.dtype:
    return np.dtype(np.int32) if range_size <= np.iinfo(np.int32).max else np.dtype(np.int64)


@dataclass(frozen=True, eq=False)
class FunctionTable:
    """An explicit table ``f: [0, domain_size) -> [0, range_size)``."""

    domain_size: int
    range_size: int
    values: np.ndarray

    def __post_init__(self):
        if self.domain_size < 1 or self.range_size < 1:
            raise ValueError("domain and range must be non-empty")
        values = np.asarray(self.values)
        if values.ndim != 1 or values.shape[0] != self.domain_size:
            raise ValueError(
                f"expected {self.domain_size} values, got shape {values.shape}"
            )
        if not np.issubdtype(values.dtype, np.integer):
            raise ValueError("function values must be integers")
        lo, hi = int(values.min()), int(values.max())
        if lo < 0 or hi >= self.range_size:
            raise ValueError(f"values must lie in [0, {self.range_size})")
        # read-only view; callers keep ownership of the buffer
        frozen = values.view()
        frozen.flags.writeable = False
        object.__setattr__(self, "values", frozen)

    @classmethod
    def from_values(cls, values: Iterable[int], range_size: int | None = None) -> FunctionTable:
        arr = np.asarray(list(values) if not isinstance(values, np.ndarray) else values)
        if range_size is None:
            range_size = int(arr.max()) + 1
        return cls(len(arr), range_size, arr.astype(_value_dtype(range_size), copy=False))

    def __call__(self, x: int) -> int:
        return int(self.values[x])

    def __len__(self) -> int:
        return self.domain_size

    def __eq__(self, other) -> bool:
        if not isinstance(other, FunctionTable):
            return NotImplemented
        return (
            self.domain_size == other.domain_size
            and self.range_size == other.range_size
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None  # type: ignore[assignment]

    @cached_property
    def preimage_counts(self) -> np.ndarray:
        """``counts[y] == |f^{-1}(y)|`` for every ``y`` in the range."""
        counts = np.bincount(self.values, minlength=self.range_size)
        counts.flags.writeable = False
        return counts

    def slice(self, start: int, stop: int) -> FunctionTable:
        """Restriction of ``f`` to ``[start, stop)``, re-indexed from zero."""
        if not 0 <= start < stop <= self.domain_size:
            raise ValueError(f"bad slice [{start}, {stop}) of domain {self.domain_size}")
        return FunctionTable(stop - start, self.range_size, self.values[start:stop])

    # -- serialisation -------------------------------------------------

    def to_json(self) -> str:
        return json.dumps(
            {
                "domain_size": self.domain_size,
                "range_size": self.range_size,
                "values": self.values.tolist(),
            }
        )

    @classmethod
    def from_json(cls, text: str) -> FunctionTable:
        data = json.loads(text)
        rs = int(data["range_size"])
        values = np.asarray(data["values"], dtype=_value_dtype(rs))
        return cls(int(data["domain_size"]), rs, values)

    def to_bytes(self) -> bytes:
        """Flat binary: magic, two little-endian u64 sizes, then u64 values."""
        header = _BINARY_MAGIC + struct.pack("<QQ", self.domain_size, self.range_size)
        return header + self.values.astype("<u8").tobytes()

    @classmethod
    def from_bytes(cls, blob: bytes) -> FunctionTable:
        if blob[:4] != _BINARY_MAGIC:
            raise ValueError("not a function table blob")
        domain_size, range_size = struct.unpack_from("<QQ", blob, 4)
        raw = np.frombuffer(blob, dtype="<u8", offset=20)
        if raw.shape[0] != domain_size:
            raise ValueError("truncated function table blob")
        return cls(domain_size, range_size, raw.astype(_value_dtype(range_size)))


@dataclass(frozen=True)
class ClawWitness:
    """One input per function, all mapping to ``y``."""

    inputs: tuple[int, ...]
    y: int

    def to_dict(self) -> dict:
        return {"inputs": list(self.inputs), "y": self.y}


@dataclass(frozen=True)
class CollisionWitness:
    """Pairwise-distinct inputs of a single function, all mapping to ``y``."""

    inputs: tuple[int, ...]
    y: int

    def to_dict(self) -> dict:
        return {"inputs": list(self.inputs), "y": self.y}


def sample_random_function(
    domain_size: int, range_size: int, seed: int | np.random.Generator | None = None
) -> FunctionTable:
    """Draw ``f`` uniformly from all functions ``[domain_size] -> [range_size]``."""
    if domain_size < 1 or range_size < 1:
        raise ValueError("domain_size and range_size must both be >= 1")
    rng = np.random.default_rng(seed)
    dtype = _value_dtype(range_size)
    values = rng.integers(0, range_size, size=domain_size, dtype=dtype)
    return FunctionTable(domain_size, range_size, values)


def image_size(f: FunctionTable) -> int:
    return int(np.count_nonzero(f.preimage_counts))


def verify_claw(functions: Sequence[FunctionTable], w: ClawWitness) -> bool:
    if len(functions) != len(w.inputs):
        raise ValueError(f"{len(functions)} functions but {len(w.inputs)} claw inputs")
    for f, x in zip(functions, w.inputs):
        if not 0 <= x < f.domain_size:
            raise ValueError(f"input {x} outside domain of size {f.domain_size}")
    return all(f(x) == w.y for f, x in zip(functions, w.inputs))


def verify_collision(f: FunctionTable, w: CollisionWitness) -> bool:
    xs = w.inputs
    if len(set(xs)) != len(xs):
        return False
    return all(0 <= x < f.domain_size and f(x) == w.y for x in xs)


def partition_domain(domain_size: int, ell: int) -> list[range]:
    """Split ``[0, domain_size)`` into ``ell`` contiguous near-equal ranges.

    The first ``domain_size % ell`` ranges get the extra element.
    """
    if ell < 1 or domain_size < ell:
        raise ValueError(f"cannot split a domain of {domain_size} into {ell} parts")
    base, extra = divmod(domain_size, ell)
    parts, start = [], 0
    for i in range(ell):
        size = base + (1 if i < extra else 0)
        parts.append(range(start, start + size))
        start += size
    return parts


def restrict_domain(f: FunctionTable, new_size: int) -> FunctionTable:
    """Keep the first ``new_size`` points of the domain."""
    if new_size > f.domain_size:
        raise ValueError(f"cannot restrict domain {f.domain_size} to {new_size}")
    if new_size == f.domain_size:
        return f
    return f.slice(0, new_size)
