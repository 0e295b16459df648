"""Sequence containers, stable descending sort and majorization checks.

Majorization here means: with both sequences sorted in decreasing order,
every prefix sum of ``lam`` is at least the matching prefix sum of ``d``,
and the two totals agree. Partial sums are accumulated with Neumaier's
compensated summation because the slack near zero is exactly where the
yes/no decision is made.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch

DEFAULT_TOL = 1e-12


@dataclass(frozen=True)
class RealSeq:
    values: tuple[float, ...]
    is_sorted_desc: bool = False

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) < 1:
            raise ValueError("sequence must have length >= 1")
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("sequence values must be finite")
        if self.is_sorted_desc and any(a < b for a, b in zip(vals, vals[1:])):
            raise ValueError("sequence flagged as sorted but is not descending")

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def to_array(self) -> np.ndarray:
        return np.array(self.values, dtype=float)

    def norm_inf(self) -> float:
        return max(abs(v) for v in self.values)


@dataclass(frozen=True)
class ComplexSeq:
    values: tuple[complex, ...]

    def __post_init__(self):
        vals = tuple(complex(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) < 1:
            raise ValueError("sequence must have length >= 1")
        if not all(cmath.isfinite(v) for v in vals):
            raise ValueError("sequence values must be finite")

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]

    @property
    def is_real(self) -> bool:
        return all(v.imag == 0.0 for v in self.values)

    def to_array(self) -> np.ndarray:
        return np.array(self.values, dtype=complex)

    def norm_inf(self) -> float:
        return max(abs(v) for v in self.values)


@dataclass(frozen=True)
class Permutation:
    """Index map with ``out[i] = seq[map[i]]``."""

    map: tuple[int, ...]

    def __post_init__(self):
        m = tuple(int(i) for i in self.map)
        object.__setattr__(self, "map", m)
        if sorted(m) != list(range(len(m))):
            raise ValueError("permutation map is not a bijection")

    def __len__(self):
        return len(self.map)

    def __getitem__(self, i):
        return self.map[i]

    def apply(self, values: Sequence) -> list:
        return [values[j] for j in self.map]

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.map)
        for i, j in enumerate(self.map):
            inv[j] = i
        return Permutation(tuple(inv))


@dataclass(frozen=True)
class MajorizationReport:
    holds: bool
    slacks: tuple[float, ...]
    trace_gap: float
    tolerance_used: float
    first_violation: int | None = field(default=None)

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "slacks": list(self.slacks),
            "trace_gap": self.trace_gap,
            "tolerance_used": self.tolerance_used,
            "first_violation": self.first_violation,
        }


def as_real_seq(x) -> RealSeq:
    if isinstance(x, RealSeq):
        return x
    if isinstance(x, ComplexSeq):
        if not x.is_real:
            raise ValueError("complex sequence has nonzero imaginary parts")
        return RealSeq(tuple(v.real for v in x.values))
    return RealSeq(tuple(np.asarray(x, dtype=float).ravel().tolist()))


def as_complex_seq(x) -> ComplexSeq:
    if isinstance(x, ComplexSeq):
        return x
    if isinstance(x, RealSeq):
        return ComplexSeq(tuple(complex(v) for v in x.values))
    return ComplexSeq(tuple(np.asarray(x, dtype=complex).ravel().tolist()))


class _Neumaier:
    """Running compensated sum."""

    __slots__ = ("s", "c")

    def __init__(self):
        self.s = 0.0
        self.c = 0.0

    def add(self, x: float):
        t = self.s + x
        if abs(self.s) >= abs(x):
            self.c += (self.s - t) + x
        else:
            self.c += (x - t) + self.s
        self.s = t

    @property
    def value(self) -> float:
        return self.s + self.c


def compensated_prefix_diffs(a: Iterable[float], b: Iterable[float]) -> list[float]:
    """Compensated prefix sums of ``a - b``, adding ``+a[k]`` and ``-b[k]`` as separate terms."""
    acc = _Neumaier()
    out = []
    for x, y in zip(a, b):
        acc.add(x)
        acc.add(-y)
        out.append(acc.value)
    return out


def sort_desc(seq) -> tuple[RealSeq, Permutation]:
    seq = as_real_seq(seq)
    vals = seq.values
    # sorted() is stable, so equal keys keep their input order
    order = sorted(range(len(vals)), key=lambda i: -vals[i])
    return RealSeq(tuple(vals[i] for i in order), is_sorted_desc=True), Permutation(tuple(order))


def check_majorization(lam, d, tol: float = DEFAULT_TOL) -> MajorizationReport:
    """Report whether ``lam`` majorizes ``d``.

    Input order does not matter; both are sorted internally. The effective
    threshold is ``tol * max(1, max|lam|)`` and is returned as
    ``tolerance_used``.
    """
    lam = as_real_seq(lam)
    d = as_real_seq(d)
    if len(lam) != len(d):
        raise DimensionMismatch(len(lam), len(d))
    if tol < 0:
        raise ValueError("tol must be >= 0")
    ls, _ = sort_desc(lam)
    ds, _ = sort_desc(d)
    slacks = compensated_prefix_diffs(ls.values, ds.values)
    thr = tol * max(1.0, lam.norm_inf())
    n = len(slacks)
    first = None
    for k in range(n - 1):
        if slacks[k] < -thr:
            first = k
            break
    trace_gap = slacks[-1]
    if first is None and abs(trace_gap) > thr:
        first = n - 1
    return MajorizationReport(
        holds=first is None,
        slacks=tuple(slacks),
        trace_gap=trace_gap,
        tolerance_used=thr,
        first_violation=first,
    )


def complex_fsum(values: Iterable[complex]) -> complex:
    vals = list(values)
    return complex(math.fsum(v.real for v in vals), math.fsum(v.imag for v in vals))


def trace_gap(lam, d) -> complex:
    lam = as_complex_seq(lam)
    d = as_complex_seq(d)
    if len(lam) != len(d):
        raise DimensionMismatch(len(lam), len(d))
    return complex_fsum(list(lam.values) + [-v for v in d.values])


def trace_match(lam, d, tol: float = DEFAULT_TOL) -> bool:
    """True iff ``|sum(lam) - sum(d)| <= tol * max(1, |sum(lam)|)``."""
    lam = as_complex_seq(lam)
    d = as_complex_seq(d)
    if len(lam) != len(d):
        raise DimensionMismatch(len(lam), len(d))
    if tol < 0:
        raise ValueError("tol must be >= 0")
    total = complex_fsum(lam.values)
    return abs(trace_gap(lam, d)) <= tol * max(1.0, abs(total))
