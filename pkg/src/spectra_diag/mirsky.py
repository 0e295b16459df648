"""Prescribed diagonal for a prescribed spectrum by unit lower triangular similarity.

Start from the upper bidiagonal matrix with ``lam`` on the diagonal and ones
just above it. For k = 0 .. N-2 conjugate by ``E_k = I + c_k e_{k+1} e_k^T``
with ``c_k = d_k - A[k, k]``:

* ``A E_k`` adds ``c_k`` times column k+1 to column k;
* ``E_k^{-1} (.)`` subtracts ``c_k`` times row k from row k+1.

Column k+1 still holds only the superdiagonal 1 and ``A[k+1, k+1]`` at that
point, so the step sets ``A[k, k] = d_k``, turns ``A[k+1, k+1]`` into
``lambda_next = A[k, k] + A[k+1, k+1] - d_k`` and leaves the trailing block a
bidiagonal matrix of the same shape. The last diagonal entry lands on
``d[N-1]`` because the trace is preserved.

No sorting happens: the diagonal order is what the caller prescribed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, TraceMismatch
from .seqkit import DEFAULT_TOL, ComplexSeq, as_complex_seq, trace_gap, trace_match

GROWTH_WARN = 1e8


@dataclass(frozen=True, eq=False)
class CompanionBidiagonal:
    diag: ComplexSeq

    @property
    def n(self) -> int:
        return len(self.diag)

    def to_array(self) -> np.ndarray:
        vals = self.diag.to_array()
        if self.diag.is_real:
            vals = vals.real.copy()
        n = len(vals)
        m = np.diag(vals)
        if n > 1:
            m[np.arange(n - 1), np.arange(1, n)] = 1.0
        return m


@dataclass(frozen=True, eq=False)
class UnitLowerTriangular:
    entries: np.ndarray

    def __post_init__(self):
        arr = np.array(self.entries)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {arr.shape}")
        if np.any(np.diag(arr) != 1) or np.any(np.triu(arr, 1) != 0):
            raise ValueError("matrix is not unit lower triangular")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def growth(self) -> float:
        return float(np.max(np.abs(self.entries)))


@dataclass(frozen=True, eq=False)
class MirskyCertificate:
    l: UnitLowerTriangular
    a: np.ndarray
    lam: ComplexSeq
    d: ComplexSeq
    c_values: tuple[complex, ...]
    similarity_residual: float
    diag_residual: float
    is_real: bool

    @property
    def growth(self) -> float:
        return self.l.growth


def _scaled(c, v):
    """c * v for a scalar c and vector v.

    Complex products are written out in real arithmetic because numpy's
    vectorized complex multiply may use fused multiply-add depending on
    the CPU, which would make A machine-dependent.
    """
    if not np.iscomplexobj(v):
        return c * v
    c = complex(c)
    out = np.empty(v.shape, dtype=complex)
    out.real = c.real * v.real - c.imag * v.imag
    out.imag = c.real * v.imag + c.imag * v.real
    return out


_SPLIT = 134217729.0  # 2**27 + 1


def _two_prod(x, y):
    """Exact product x*y = p + e (Dekker), elementwise; separate ops so nothing fuses."""
    p = x * y
    xc = _SPLIT * x
    xh = xc - (xc - x)
    xl = x - xh
    yc = _SPLIT * y
    yh = yc - (yc - y)
    yl = y - yh
    e = xl * yl - (((p - xh * yh) - xl * yh) - xh * yl)
    return p, e


def _cprod_terms(c, v):
    """Real and imaginary parts of c * v as lists of exactly summing term arrays."""
    c = complex(c)
    vr = np.ascontiguousarray(np.real(v), dtype=float)
    vi = np.ascontiguousarray(np.imag(v), dtype=float)
    re, im = [], []
    for coef, part, sink, sign in ((c.real, vr, re, 1), (c.imag, vi, re, -1),
                                   (c.real, vi, im, 1), (c.imag, vr, im, 1)):
        if coef != 0:
            p, e = _two_prod(np.full_like(part, coef), part)
            sink += [sign * p, sign * e]
    return re, im


def _similarity_residual(lam, cs, l, a):
    """max |U L - L A| with every entry summed exactly and rounded once.

    L = I + sum_k c_k e_{k+1} e_k^T, so a row of either product has at most
    two terms. Products are split error-free and added with fsum; the
    result is the true residual of the stored matrices, independent of
    the order in which A was built.
    """
    n = len(lam)
    worst = 0.0
    for i in range(n):
        re, im = _cprod_terms(lam[i], l[i])
        if i + 1 < n:
            re.append(np.real(l[i + 1]))
            im.append(np.imag(l[i + 1]))
        re.append(-np.real(a[i]))
        im.append(-np.imag(a[i]))
        if i > 0:
            r2, i2 = _cprod_terms(cs[i - 1], a[i - 1])
            re += [-t for t in r2]
            im += [-t for t in i2]
        rr = np.array([math.fsum(col) for col in np.array(re).T])
        ri = np.array([math.fsum(col) for col in np.array(im).T])
        worst = max(worst, float(np.max(np.hypot(rr, ri))))
    return worst


def companion_of(lam) -> CompanionBidiagonal:
    return CompanionBidiagonal(as_complex_seq(lam))


def elementary_step(lambda_k, d_k):
    """Shift c with diag(L^-1 [[lambda_k, 1], [0, .]] L)[0] = d_k for L = [[1, 0], [c, 1]]."""
    return d_k - lambda_k


def mirsky_construct(lam, d, tol: float = DEFAULT_TOL) -> MirskyCertificate:
    lam = as_complex_seq(lam)
    d = as_complex_seq(d)
    n = len(lam)
    if n != len(d):
        raise DimensionMismatch(n, len(d))
    if not trace_match(lam, d, tol):
        raise TraceMismatch(trace_gap(lam, d))

    is_real = lam.is_real and d.is_real
    if is_real:
        dv = d.to_array().real.copy()
        dtype = float
    else:
        dv = d.to_array()
        dtype = complex
    a = companion_of(lam).to_array().astype(dtype)
    l = np.eye(n, dtype=dtype)

    cs = []
    for k in range(n - 1):
        c = elementary_step(a[k, k], dv[k])
        cs.append(c)
        if c == 0:
            continue
        # A <- A E_k: column k of A picks up c * column k+1 (two nonzeros)
        a[k, k] += c
        a[k + 1, k] += c * a[k + 1, k + 1]
        # A <- E_k^{-1} A: row k+1 loses c * row k (nonzeros in columns 0..k+1)
        a[k + 1, : k + 2] -= _scaled(c, a[k, : k + 2])
        # L <- L E_k
        l[:, k] += _scaled(c, l[:, k + 1])

    lt = UnitLowerTriangular(l)
    lam_vals = lam.to_array().real if is_real else lam.to_array()
    sim = _similarity_residual(lam_vals, cs, l, a)
    diag_res = float(np.max(np.abs(np.diag(a) - dv)))
    return MirskyCertificate(
        l=lt,
        a=a,
        lam=lam,
        d=d,
        c_values=tuple(complex(c) for c in cs),
        similarity_residual=sim,
        diag_residual=diag_res,
        is_real=is_real,
    )
