"""Dataset ingestion, synthetic generators, streams, and the binary cache.

Sparse-text (LIBSVM-style) files are parsed into dense row-major float64
arrays.  Synthetic Gaussian data is drawn from a planted-spectrum
covariance: eigenvalues are given explicitly and the eigenbasis is the
orthogonal factor of a seeded Gaussian matrix, so the ground-truth top
direction is known by construction.  Samples are unit-normalized unless a
caller opts out.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass, replace
from typing import Iterator

import numpy as np

from . import seeding
from .core import Batch, Vector
from .schedules import SampleSchedule

__all__ = [
    "DataFormatError",
    "Provenance",
    "Dataset",
    "parse_libsvm",
    "load_libsvm",
    "write_libsvm",
    "normalize_unit",
    "load_any",
    "shuffle",
    "OnePassStream",
    "IIDStream",
    "stream_batches",
    "CovarianceSpec",
    "gen_gaussian",
    "ShiftStreamSpec",
    "gen_shift_stream",
    "write_cache",
    "read_cache",
    "DATASET_MANIFEST",
]

# name -> (dimension, train rows, validation rows) for the benchmark
# datasets; used by the CLI's fetch-check to validate local files.
DATASET_MANIFEST: dict[str, tuple[int, int, int]] = {
    "letter": (16, 15000, 5000),
    "shuttle": (9, 43500, 14500),
    "year-prediction-msd": (90, 463715, 51630),
    "sensit-vehicle": (100, 78823, 19705),
}

_CACHE_MAGIC = b"DCSTRM01"
_CACHE_HEADER = struct.Struct("<8sIQQB")
_CACHE_VERSION = 1


class DataFormatError(ValueError):
    """Malformed or inconsistent input data."""


@dataclass(frozen=True)
class Provenance:
    """Where a dataset came from and what has been done to it."""

    source: str
    normalized: bool = False
    shuffle_seed: int | None = None
    mode: str = "one-pass"


@dataclass(frozen=True)
class Dataset:
    """Dense sample matrix with provenance.  Rows are samples."""

    samples: Batch
    provenance: Provenance
    labels: np.ndarray | None = None

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=np.float64)
        if s.ndim != 2 or s.shape[0] == 0:
            raise DataFormatError(f"dataset needs a nonempty (n, m) sample array, got shape {s.shape}")
        if not np.all(np.isfinite(s)):
            raise DataFormatError("dataset contains non-finite values")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @property
    def dimension(self) -> int:
        return self.samples.shape[1]

    def __len__(self) -> int:
        return self.samples.shape[0]


def parse_libsvm(
    text: str, dimension_hint: int | None = None, keep_labels: bool = False, source: str = "libsvm"
) -> Dataset:
    """Parse LIBSVM-style sparse text into a dense dataset.

    Each nonempty line is ``label idx:value ...`` with 1-based, strictly
    increasing indices; missing indices are zero.  The dimension is the
    largest index seen, or ``dimension_hint`` when given (an index beyond
    the hint is an error).  Labels are parsed and discarded unless
    ``keep_labels`` is set.  All errors carry the offending line number.
    """
    rows: list[dict[int, float]] = []
    labels: list[float] = []
    max_index = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        tokens = line.split()
        try:
            label = float(tokens[0])
        except ValueError:
            raise DataFormatError(f"line {lineno}: label {tokens[0]!r} is not numeric") from None
        entries: dict[int, float] = {}
        prev = 0
        for token in tokens[1:]:
            idx_s, sep, val_s = token.partition(":")
            if not sep:
                raise DataFormatError(f"line {lineno}: feature {token!r} is not index:value")
            try:
                idx = int(idx_s)
            except ValueError:
                raise DataFormatError(f"line {lineno}: index {idx_s!r} is not an integer") from None
            try:
                val = float(val_s)
            except ValueError:
                raise DataFormatError(f"line {lineno}: value {val_s!r} is not numeric") from None
            if idx < 1:
                raise DataFormatError(f"line {lineno}: index {idx} must be >= 1")
            if idx <= prev:
                raise DataFormatError(
                    f"line {lineno}: index {idx} not strictly increasing after {prev}"
                )
            if not np.isfinite(val):
                raise DataFormatError(f"line {lineno}: value {val!r} is not finite")
            if dimension_hint is not None and idx > dimension_hint:
                raise DataFormatError(
                    f"line {lineno}: index {idx} exceeds the declared dimension {dimension_hint}"
                )
            entries[idx] = val
            prev = idx
        rows.append(entries)
        labels.append(label)
        max_index = max(max_index, prev)
    if not rows:
        raise DataFormatError("no samples found")
    dimension = dimension_hint if dimension_hint is not None else max_index
    if dimension < 1:
        raise DataFormatError("no feature indices found and no dimension hint given")
    dense = np.zeros((len(rows), dimension))
    for i, entries in enumerate(rows):
        for idx, val in entries.items():
            dense[i, idx - 1] = val
    return Dataset(
        samples=dense,
        provenance=Provenance(source=source),
        labels=np.array(labels) if keep_labels else None,
    )


def load_libsvm(path, dimension_hint: int | None = None, keep_labels: bool = False) -> Dataset:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DataFormatError(f"cannot read {path}: {exc}") from exc
    return parse_libsvm(text, dimension_hint=dimension_hint, keep_labels=keep_labels, source=str(path))


def load_any(path, dimension_hint: int | None = None) -> Dataset:
    """Load a dataset from either the text format or the binary cache.

    The binary cache is detected by its leading magic bytes; everything
    else is parsed as sparse index:value text.
    """
    try:
        with open(path, "rb") as fh:
            head = fh.read(len(_CACHE_MAGIC))
    except OSError as exc:
        raise DataFormatError(f"cannot read {path}: {exc}") from exc
    if head == _CACHE_MAGIC:
        return read_cache(path)
    return load_libsvm(path, dimension_hint=dimension_hint)


def write_libsvm(dataset: Dataset, path) -> None:
    """Write a dataset as LIBSVM text with 17-significant-digit values.

    Exact zeros are omitted (they are implied by the format), so a
    parse -> write -> parse round trip reproduces the sample matrix
    bit for bit.
    """
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for i, row in enumerate(dataset.samples):
            label = dataset.labels[i] if dataset.labels is not None else 0.0
            parts = [f"{label:.17g}"]
            for j, v in enumerate(row, start=1):
                if v != 0.0:
                    parts.append(f"{j}:{v:.17g}")
            fh.write(" ".join(parts) + "\n")


def normalize_unit(dataset: Dataset) -> Dataset:
    """Scale every sample to unit Euclidean norm."""
    norms = np.linalg.norm(dataset.samples, axis=1)
    zero = np.flatnonzero(norms == 0.0)
    if zero.size:
        listed = ", ".join(str(i) for i in zero[:10])
        more = f" (+{zero.size - 10} more)" if zero.size > 10 else ""
        raise DataFormatError(f"cannot normalize zero samples at rows {listed}{more}")
    return Dataset(
        samples=dataset.samples / norms[:, None],
        provenance=replace(dataset.provenance, normalized=True),
        labels=dataset.labels,
    )


def shuffle(dataset: Dataset, seed: int) -> Dataset:
    """Seeded uniform permutation of the sample rows (PCG64 Fisher-Yates)."""
    rng = seeding.make_rng(seed, seeding.SHUFFLE)
    perm = rng.permutation(len(dataset))
    return Dataset(
        samples=dataset.samples[perm].copy(),
        provenance=replace(dataset.provenance, shuffle_seed=seed),
        labels=dataset.labels[perm].copy() if dataset.labels is not None else None,
    )


class OnePassStream:
    """Single sequential pass over a dataset's rows."""

    def __init__(self, dataset: Dataset):
        self.dataset = dataset
        self._cursor = 0

    def draw(self, n: int) -> Batch:
        if n < 0:
            raise ValueError(f"draw size must be >= 0, got {n}")
        batch = self.dataset.samples[self._cursor : self._cursor + n]
        self._cursor += batch.shape[0]
        return batch

    @property
    def drawn(self) -> int:
        return self._cursor

    @property
    def remaining(self) -> int:
        return len(self.dataset) - self._cursor


class IIDStream:
    """Unbounded i.i.d. resampling of a dataset's rows (with replacement)."""

    def __init__(self, dataset: Dataset, seed: int):
        self.dataset = dataset
        self._rng = seeding.make_rng(seed, seeding.DATA)
        self._drawn = 0

    def draw(self, n: int) -> Batch:
        if n < 0:
            raise ValueError(f"draw size must be >= 0, got {n}")
        idx = self._rng.integers(0, len(self.dataset), size=n)
        self._drawn += n
        return self.dataset.samples[idx]

    @property
    def drawn(self) -> int:
        return self._drawn


def stream_batches(dataset: Dataset, schedule: SampleSchedule) -> Iterator[Batch]:
    """Yield schedule-sized batches of one pass; the last is the remainder."""
    stream = OnePassStream(dataset)
    k = 1
    while stream.remaining > 0:
        yield stream.draw(schedule.size(k))
        k += 1


@dataclass(frozen=True)
class CovarianceSpec:
    """Planted-spectrum covariance: given eigenvalues, seeded eigenbasis.

    The basis is the Q factor of a seeded standard Gaussian matrix with
    column signs fixed by the QR diagonal, so every derived quantity is a
    pure function of (eigenvalues, basis_seed).
    """

    eigenvalues: tuple[float, ...]
    basis_seed: int = 0

    def __post_init__(self):
        if len(self.eigenvalues) == 0:
            raise ValueError("at least one eigenvalue is required")
        if any(not (v > 0 and np.isfinite(v)) for v in self.eigenvalues):
            raise ValueError(f"eigenvalues must be positive and finite, got {self.eigenvalues}")

    @property
    def dimension(self) -> int:
        return len(self.eigenvalues)

    def basis(self) -> np.ndarray:
        rng = seeding.make_rng(self.basis_seed, seeding.DATA)
        a = rng.standard_normal((self.dimension, self.dimension))
        q, r = np.linalg.qr(a)
        return q * np.sign(np.diag(r))

    def matrix(self) -> np.ndarray:
        q = self.basis()
        return (q * np.asarray(self.eigenvalues)) @ q.T

    def top_direction(self) -> Vector:
        return self.basis()[:, int(np.argmax(self.eigenvalues))]


def gen_gaussian(
    covariance: CovarianceSpec, count: int, rng_or_seed, normalize: bool = True
) -> Dataset:
    """Draw ``count`` centered Gaussian samples with the planted covariance.

    ``rng_or_seed`` is either an integer master seed or a ready Generator.
    Samples are unit-normalized afterwards unless ``normalize`` is False.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    if isinstance(rng_or_seed, np.random.Generator):
        rng = rng_or_seed
    else:
        rng = seeding.make_rng(int(rng_or_seed), seeding.DATA)
    q = covariance.basis()
    factor = q * np.sqrt(np.asarray(covariance.eigenvalues))
    samples = rng.standard_normal((count, covariance.dimension)) @ factor.T
    ds = Dataset(samples=samples, provenance=Provenance(source="gaussian", normalized=False))
    return normalize_unit(ds) if normalize else ds


@dataclass(frozen=True)
class ShiftStreamSpec:
    """Training stream whose covariance switches mid-stream.

    Samples before ``switch_index`` follow ``covariance_a``, the rest
    ``covariance_b``.  Validation sets of ``validation_count`` samples are
    drawn i.i.d. from each covariance with independent seeds.
    """

    covariance_a: CovarianceSpec
    covariance_b: CovarianceSpec
    switch_index: int
    total: int
    seed: int = 0
    validation_count: int = 10_000

    def __post_init__(self):
        if self.covariance_a.dimension != self.covariance_b.dimension:
            raise ValueError(
                f"covariance dimensions differ: {self.covariance_a.dimension} "
                f"vs {self.covariance_b.dimension}"
            )
        if not (1 <= self.switch_index < self.total):
            raise ValueError(
                f"switch index must satisfy 1 <= switch < total, got "
                f"{self.switch_index} of {self.total}"
            )
        if self.validation_count < 1:
            raise ValueError(f"validation_count must be >= 1, got {self.validation_count}")

    @property
    def dimension(self) -> int:
        return self.covariance_a.dimension


def gen_shift_stream(spec: ShiftStreamSpec) -> tuple[OnePassStream, Dataset, Dataset]:
    """Materialize a shifted training stream plus its two validation sets.

    Returns ``(train_stream, validation_a, validation_b)``; the stream's
    ``dataset`` attribute exposes the ordered concatenation.
    """
    part_a = gen_gaussian(spec.covariance_a, spec.switch_index, seeding.make_rng(spec.seed, seeding.DATA, 0))
    part_b = gen_gaussian(
        spec.covariance_b, spec.total - spec.switch_index, seeding.make_rng(spec.seed, seeding.DATA, 1)
    )
    train = Dataset(
        samples=np.vstack([part_a.samples, part_b.samples]),
        provenance=Provenance(source=f"shift-stream(switch={spec.switch_index})", normalized=True),
    )
    val_a = gen_gaussian(spec.covariance_a, spec.validation_count, seeding.make_rng(spec.seed, seeding.DATA, 2))
    val_b = gen_gaussian(spec.covariance_b, spec.validation_count, seeding.make_rng(spec.seed, seeding.DATA, 3))
    return OnePassStream(train), val_a, val_b


def write_cache(dataset: Dataset, path) -> None:
    """Write the binary cache: fixed little-endian header + row-major float64."""
    samples = np.ascontiguousarray(dataset.samples, dtype="<f8")
    header = _CACHE_HEADER.pack(
        _CACHE_MAGIC,
        _CACHE_VERSION,
        dataset.dimension,
        len(dataset),
        1 if dataset.provenance.normalized else 0,
    )
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(samples.tobytes(order="C"))


def read_cache(path) -> Dataset:
    """Read a binary cache written by ``write_cache`` (bit-exact round trip)."""
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise DataFormatError(f"cannot read {path}: {exc}") from exc
    if len(raw) < _CACHE_HEADER.size:
        raise DataFormatError(f"{path}: truncated header")
    magic, version, dimension, count, normalized = _CACHE_HEADER.unpack_from(raw)
    if magic != _CACHE_MAGIC:
        raise DataFormatError(f"{path}: bad magic {magic!r}")
    if version != _CACHE_VERSION:
        raise DataFormatError(f"{path}: unsupported cache version {version}")
    expected = _CACHE_HEADER.size + 8 * dimension * count
    if len(raw) != expected:
        raise DataFormatError(f"{path}: expected {expected} bytes, found {len(raw)}")
    samples = np.frombuffer(raw, dtype="<f8", offset=_CACHE_HEADER.size).reshape(count, dimension)
    return Dataset(
        samples=samples.astype(np.float64, copy=True),
        provenance=Provenance(source=f"cache:{path}", normalized=bool(normalized)),
    )
