"""Seeded test-input generators.

All randomness comes from SplitMix64 so that outputs are reproducible bit
for bit on any platform (and in any language that implements the same
recipe):

    state += 0x9E3779B97F4A7C15                      (mod 2**64)
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9         (mod 2**64)
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB         (mod 2**64)
    out = z ^ (z >> 31)

A uniform double in [0, 1) is ``(out >> 11) * 2**-53``. Bounded integers in
[0, n) use rejection below the largest multiple of n, then ``out % n``.
Each generator op derives its own stream from the seed:
``initial state = seed ^ (tag * 0xD1B54A32D192ED03 mod 2**64)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NotCorrelationSpectrum
from .seqkit import ComplexSeq, RealSeq, as_real_seq, check_majorization

MASK64 = (1 << 64) - 1

_TAG_SPECTRUM = 1
_TAG_MIX = 2
_TAG_TRACE = 3


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * 2.0 ** -53

    def below(self, n: int) -> int:
        if n < 1:
            raise ValueError("bound must be >= 1")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            z = self.next_u64()
            if z < limit:
                return z % n

    def shuffle(self, items: list) -> list:
        """Fisher-Yates, in place; returns ``items``."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]
        return items


def stream(seed: int, tag: int) -> SplitMix64:
    return SplitMix64((seed & MASK64) ^ ((tag * 0xD1B54A32D192ED03) & MASK64))


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    n: int = 4
    value_range: tuple[float, float] = (-10.0, 10.0)
    mix_count: int = 8

    def __post_init__(self):
        lo, hi = self.value_range
        if not lo < hi:
            raise ValueError("value_range needs lo < hi")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.mix_count < 1:
            raise ValueError("mix_count must be >= 1")
        if not 0 <= self.seed <= MASK64:
            raise ValueError("seed must be an unsigned 64-bit integer")


def _uniforms(rng: SplitMix64, n: int, lo: float, hi: float) -> list[float]:
    return [lo + (hi - lo) * rng.uniform() for _ in range(n)]


def random_spectrum(cfg: GenConfig) -> RealSeq:
    rng = stream(cfg.seed, _TAG_SPECTRUM)
    vals = _uniforms(rng, cfg.n, *cfg.value_range)
    return RealSeq(tuple(sorted(vals, reverse=True)), is_sorted_desc=True)


def random_majorized_diag(lam, cfg: GenConfig) -> RealSeq:
    """d = S lam with S the mean of ``cfg.mix_count`` random permutation matrices.

    Any such S is doubly stochastic, so lam majorizes d.
    """
    lam = as_real_seq(lam)
    n = len(lam)
    rng = stream(cfg.seed, _TAG_MIX)
    cols = [[] for _ in range(n)]
    for _ in range(cfg.mix_count):
        perm = rng.shuffle(list(range(n)))
        for i in range(n):
            cols[i].append(lam[perm[i]])
    return RealSeq(tuple(math.fsum(c) / cfg.mix_count for c in cols))


def trace_matched_pair(cfg: GenConfig, complex_flag: bool = False) -> tuple[ComplexSeq, ComplexSeq]:
    """Random (lam, d) with d[-1] chosen so the sums agree."""
    rng = stream(cfg.seed, _TAG_TRACE)
    n = cfg.n
    lo, hi = cfg.value_range

    def draw():
        re = _uniforms(rng, n, lo, hi)
        im = _uniforms(rng, n, lo, hi) if complex_flag else [0.0] * n
        return [complex(x, y) for x, y in zip(re, im)]

    lam = draw()
    d = draw()
    last_re = math.fsum(v.real for v in lam) - math.fsum(v.real for v in d[:-1])
    last_im = math.fsum(v.imag for v in lam) - math.fsum(v.imag for v in d[:-1])
    d[-1] = complex(last_re, last_im)
    return ComplexSeq(tuple(lam)), ComplexSeq(tuple(d))


def corr_preset(lambda_raw, tol: float = 1e-12) -> tuple[RealSeq, RealSeq]:
    """Scale a nonnegative spectrum to trace n and pair it with the all-ones diagonal.

    A symmetric matrix built from the result is a correlation matrix when
    the spectrum is nonnegative.
    """
    raw = as_real_seq(lambda_raw)
    n = len(raw)
    total = math.fsum(raw)
    if total <= 0 or any(v < 0 for v in raw):
        raise NotCorrelationSpectrum(
            "not a correlation spectrum: values must be >= 0 with positive sum"
        )
    lam = RealSeq(tuple(v * n / total for v in raw))
    ones = RealSeq((1.0,) * n)
    rep = check_majorization(lam, ones, tol)
    if not rep.holds:
        raise NotCorrelationSpectrum(
            f"not a correlation spectrum: majorization fails at prefix {rep.first_violation}"
        )
    return lam, ones
