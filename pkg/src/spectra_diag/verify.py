"""Independent checks for Horn and Mirsky certificates.

Nothing here calls into the constructors. Products are formed with a
plain triple loop (no BLAS), eigenvalues come from a cyclic-by-row Jacobi
solver, and the characteristic polynomial is obtained by the
Faddeev-LeVerrier recursion. A bug in a constructor therefore cannot vouch
for itself. The similarity residual U L - L A is summed in doubled
precision: evaluated naively it would replay the very products that built
A and cancel to zero whatever A's true error.

Default thresholds, with ``scale = max(1, max|lam|)``:

    diag    1e-10 * N * scale       (Horn)
    orth    1e-12 * N
    eig     1e-8 * scale
    schur   1e-10 * N * scale
    stoch   1e-12 * N               (row/column sums of the squared matrix)

    diag    1e-12 * max(1, max|lam|, max|d|)   (Mirsky)
    sim     1e-10 * N * growth(L)
    charpoly 1e-8 relative, only for N <= 6
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .errors import NoConvergence, NotSymmetric

CHARPOLY_MAX_N = 6


@dataclass(frozen=True, eq=False)
class DoublyStochasticMatrix:
    entries: np.ndarray
    row_residual: float
    col_residual: float

    @classmethod
    def from_entries(cls, s) -> "DoublyStochasticMatrix":
        s = np.array(s, dtype=float)
        if s.ndim != 2 or s.shape[0] != s.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {s.shape}")
        if np.any(s < 0):
            raise ValueError("doubly stochastic matrix has negative entries")
        s.setflags(write=False)
        rows = [math.fsum(r) for r in s]
        cols = [math.fsum(c) for c in s.T]
        return cls(
            s,
            max(abs(x - 1.0) for x in rows),
            max(abs(x - 1.0) for x in cols),
        )


@dataclass(frozen=True)
class TolProfile:
    diag: float = 1e-10  # times N * scale (Horn) / times scale (Mirsky: see mirsky_diag)
    orth: float = 1e-12  # times N
    eig: float = 1e-8  # times scale
    schur: float = 1e-10  # times N * scale
    stoch: float = 1e-12  # times N
    mirsky_diag: float = 1e-12  # times max(1, |lam|_inf, |d|_inf)
    similarity: float = 1e-10  # times N * growth(L)
    similarity_rel: float = 1e-12  # times N, componentwise against |U||L| + |L||A|
    charpoly: float = 1e-8  # relative


@dataclass(frozen=True)
class VerifyReport:
    kind: str
    n: int
    diag_err: float
    eig_err: float | None = None
    orth_err: float | None = None
    schur_relation_err: float | None = None
    stochastic_err: float | None = None
    similarity_err: float | None = None
    similarity_rel_err: float | None = None
    charpoly_err: float | None = None
    tolerances: dict = field(default_factory=dict)
    notes: tuple[str, ...] = ()

    @property
    def errors(self) -> dict:
        keys = ("diag_err", "eig_err", "orth_err", "schur_relation_err",
                "stochastic_err", "similarity_err", "similarity_rel_err", "charpoly_err")
        return {k: getattr(self, k) for k in keys if getattr(self, k) is not None}

    @property
    def passed(self) -> bool:
        for k, v in self.errors.items():
            if not (v <= self.tolerances[k]):  # NaN fails
                return False
        return not self.notes

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "n": self.n, "pass": self.passed}
        out.update(self.errors)
        out["tolerances"] = dict(self.tolerances)
        if self.notes:
            out["notes"] = list(self.notes)
        return out


@njit(cache=True)
def _matmul_kernel(ar, ai, br, bi, cr, ci):
    # complex products spelled out in real arithmetic, no fused multiply-add
    n, m = ar.shape
    p = br.shape[1]
    for i in range(n):
        for j in range(p):
            sr = 0.0
            si = 0.0
            for k in range(m):
                xr = ar[i, k] * br[k, j] - ai[i, k] * bi[k, j]
                xi = ar[i, k] * bi[k, j] + ai[i, k] * br[k, j]
                sr += xr
                si += xi
            cr[i, j] = sr
            ci[i, j] = si


@njit(cache=True)
def _matmul_kernel_real(a, b, c):
    n, m = a.shape
    p = b.shape[1]
    for i in range(n):
        for j in range(p):
            acc = 0.0
            for k in range(m):
                acc += a[i, k] * b[k, j]
            c[i, j] = acc


def _matmul(a, b):
    """Plain triple-loop product (deliberately not BLAS)."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape[1] != b.shape[0]:
        raise ValueError("inner dimensions differ")
    if not (np.iscomplexobj(a) or np.iscomplexobj(b)):
        c = np.zeros((a.shape[0], b.shape[1]))
        _matmul_kernel_real(np.ascontiguousarray(a, dtype=float), np.ascontiguousarray(b, dtype=float), c)
        return c
    a = a.astype(complex)
    b = b.astype(complex)
    cr = np.zeros((a.shape[0], b.shape[1]))
    ci = np.zeros_like(cr)
    _matmul_kernel(
        np.ascontiguousarray(a.real), np.ascontiguousarray(a.imag),
        np.ascontiguousarray(b.real), np.ascontiguousarray(b.imag), cr, ci,
    )
    return cr + 1j * ci


@njit(cache=True)
def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


@njit(cache=True)
def _two_prod(a, b):
    p = a * b
    ac = 134217729.0 * a
    ah = ac - (ac - a)
    al = a - ah
    bc = 134217729.0 * b
    bh = bc - (bc - b)
    bl = b - bh
    return p, al * bl - (((p - ah * bh) - al * bh) - ah * bl)


@njit(cache=True)
def _acc(s, c, x, y, sign):
    p, e = _two_prod(x, y)
    s, t = _two_sum(s, sign * p)
    return s, c + t + sign * e


@njit(cache=True)
def _commutator_kernel(ur, ui, lr, li, ar, ai, rr, ri):
    # R = U L - L A in doubled precision (compensated dot products), so the
    # residual is not hostage to the rounding pattern that produced A
    n = ur.shape[0]
    for i in range(n):
        for j in range(n):
            sr = 0.0
            cr = 0.0
            si = 0.0
            ci = 0.0
            for k in range(n):
                sr, cr = _acc(sr, cr, ur[i, k], lr[k, j], 1.0)
                sr, cr = _acc(sr, cr, ui[i, k], li[k, j], -1.0)
                si, ci = _acc(si, ci, ur[i, k], li[k, j], 1.0)
                si, ci = _acc(si, ci, ui[i, k], lr[k, j], 1.0)
                sr, cr = _acc(sr, cr, lr[i, k], ar[k, j], -1.0)
                sr, cr = _acc(sr, cr, li[i, k], ai[k, j], 1.0)
                si, ci = _acc(si, ci, lr[i, k], ai[k, j], -1.0)
                si, ci = _acc(si, ci, li[i, k], ar[k, j], -1.0)
            rr[i, j] = sr + cr
            ri[i, j] = si + ci


def _commutator(u, l, a):
    """U L - L A, accurate to about a unit roundoff of the result."""
    parts = []
    for m in (u, l, a):
        m = np.asarray(m)
        parts += [np.ascontiguousarray(m.real, dtype=float), np.ascontiguousarray(np.imag(m), dtype=float)]
    rr = np.zeros(parts[0].shape)
    ri = np.zeros_like(rr)
    _commutator_kernel(*parts, rr, ri)
    return rr + 1j * ri


@njit(cache=True)
def _off_norm(a):
    n = a.shape[0]
    acc = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                acc += a[i, j] * a[i, j]
    return math.sqrt(acc)


@njit(cache=True)
def _sweep(a, tiny):
    n = a.shape[0]
    for p in range(n - 1):
        for q in range(p + 1, n):
            apq = a[p, q]
            if abs(apq) <= tiny:
                continue
            app = a[p, p]
            aqq = a[q, q]
            theta = (aqq - app) / (2.0 * apq)
            t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
            c = 1.0 / math.sqrt(t * t + 1.0)
            s = t * c
            for r in range(n):
                if r == p or r == q:
                    continue
                arp = a[r, p]
                arq = a[r, q]
                a[r, p] = c * arp - s * arq
                a[r, q] = s * arp + c * arq
                a[p, r] = a[r, p]
                a[q, r] = a[r, q]
            a[p, p] = app - t * apq
            a[q, q] = aqq + t * apq
            a[p, q] = 0.0
            a[q, p] = 0.0


def _jacobi(a, tol=1e-12, max_sweeps=30):
    """Cyclic-by-row Jacobi. Returns (diagonal, sweeps used, final off-norm)."""
    a = np.array(a, dtype=float)
    n = a.shape[0]
    if a.ndim != 2 or a.shape[1] != n:
        raise ValueError("expected a square matrix")
    amax = float(np.max(np.abs(a))) if n else 0.0
    if np.max(np.abs(a - a.T), initial=0.0) > 1e-12 * amax:
        raise NotSymmetric("not symmetric")
    a = (a + a.T) / 2
    fro = float(np.linalg.norm(a))
    target = tol * fro

    off = _off_norm(a)
    sweeps = 0
    # rotations below this size cannot move the off-norm meaningfully
    tiny = 1e-3 * target / max(n, 1)
    while off > target:
        if sweeps >= max_sweeps:
            raise NoConvergence(off, sweeps)
        sweeps += 1
        _sweep(a, tiny)
        off = _off_norm(a)
    return np.diag(a).copy(), sweeps, off


def jacobi_eigenvalues(a, tol: float = 1e-12, max_sweeps: int = 30) -> np.ndarray:
    """Eigenvalues of a symmetric matrix, sorted decreasingly."""
    if max_sweeps < 1:
        raise ValueError("max_sweeps must be >= 1")
    diag, _, _ = _jacobi(a, tol, max_sweeps)
    return np.sort(diag)[::-1]


def _poly_from_roots(roots):
    """Monic coefficients, highest degree first."""
    coeffs = [1.0 + 0j]
    for r in roots:
        nxt = coeffs + [0j]
        for i in range(1, len(nxt)):
            nxt[i] -= r * coeffs[i - 1]
        coeffs = nxt
    return np.array(coeffs)


def charpoly_leverrier(a) -> np.ndarray:
    """det(xI - A) coefficients, highest degree first, by Faddeev-LeVerrier."""
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    coeffs = [1.0 + 0j]
    m = np.zeros_like(a)
    eye = np.eye(n, dtype=complex)
    for k in range(1, n + 1):
        m = _matmul(a, m) + coeffs[-1] * eye
        am = _matmul(a, m)
        coeffs.append(-np.trace(am) / k)
    return np.array(coeffs)


def verify_horn(cert, profile: TolProfile | None = None) -> VerifyReport:
    profile = profile or TolProfile()
    q = np.asarray(cert.q.entries if hasattr(cert.q, "entries") else cert.q, dtype=float)
    lam = np.array(list(cert.lam), dtype=float)
    d = np.array(list(cert.d), dtype=float)
    n = len(lam)
    scale = max(1.0, float(np.max(np.abs(lam))))
    tols = {
        "diag_err": profile.diag * n * scale,
        "orth_err": profile.orth * n,
        "eig_err": profile.eig * scale,
        "schur_relation_err": profile.schur * n * scale,
        "stochastic_err": profile.stoch * n,
    }
    notes = []
    if q.shape != (n, n) or len(d) != n:
        return VerifyReport("horn", n, math.inf, tolerances=tols, notes=("shape mismatch",))

    a = _matmul(q * lam, q.T)
    a = (a + a.T) / 2
    diag_err = float(np.max(np.abs(np.diag(a) - d)))
    orth_err = float(np.max(np.abs(_matmul(q.T, q) - np.eye(n))))
    s = q * q
    sl = np.array([math.fsum(s[i] * lam) for i in range(n)])
    schur_err = float(np.max(np.abs(sl - d)))
    stoch_err = max(
        max(abs(math.fsum(r) - 1.0) for r in s),
        max(abs(math.fsum(c) - 1.0) for c in s.T),
    )
    try:
        ev = jacobi_eigenvalues(a)
        eig_err = float(np.max(np.abs(ev - np.sort(lam)[::-1])))
    except (NoConvergence, NotSymmetric) as exc:
        eig_err = math.inf
        notes.append(str(exc))
    return VerifyReport(
        "horn", n, diag_err,
        eig_err=eig_err, orth_err=orth_err, schur_relation_err=schur_err,
        stochastic_err=stoch_err, tolerances=tols, notes=tuple(notes),
    )


def verify_mirsky(cert, profile: TolProfile | None = None) -> VerifyReport:
    profile = profile or TolProfile()
    lam = np.array(list(cert.lam), dtype=complex)
    d = np.array(list(cert.d), dtype=complex)
    l = np.asarray(cert.l.entries if hasattr(cert.l, "entries") else cert.l)
    a = np.asarray(cert.a)
    n = len(lam)
    growth = max(1.0, float(np.max(np.abs(l)))) if l.size else 1.0
    scale = max(1.0, float(np.max(np.abs(lam))), float(np.max(np.abs(d))))
    tols = {
        "diag_err": profile.mirsky_diag * scale,
        "similarity_err": profile.similarity * n * growth,
        "similarity_rel_err": profile.similarity_rel * n,
    }
    if l.shape != (n, n) or a.shape != (n, n) or len(d) != n:
        return VerifyReport("mirsky", n, math.inf, tolerances=tols, notes=("shape mismatch",))
    notes = []
    if np.any(np.diag(l) != 1) or np.any(np.triu(l, 1) != 0):
        notes.append("L is not unit lower triangular")

    u = np.diag(lam) + np.diag(np.ones(n - 1), 1)
    diag_err = float(np.max(np.abs(np.diag(a) - d)))
    resid = np.abs(_commutator(u, l, a))
    sim_err = float(np.max(resid))
    # residual measured against the sizes of the terms that produced it;
    # stays meaningful when A's fill-in is astronomically large
    size = _matmul(np.abs(u), np.abs(l)) + _matmul(np.abs(l), np.abs(a))
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.where(size > 0, resid / size, np.where(resid > 0, np.inf, 0.0))
    rel_err = float(np.max(ratio))
    cp_err = None
    if n <= CHARPOLY_MAX_N:
        ref = _poly_from_roots(lam)
        got = charpoly_leverrier(a)
        cp_err = float(np.max(np.abs(got - ref) / np.maximum(1.0, np.abs(ref))))
        tols["charpoly_err"] = profile.charpoly
    return VerifyReport(
        "mirsky", n, diag_err,
        similarity_err=sim_err, similarity_rel_err=rel_err, charpoly_err=cp_err, tolerances=tols, notes=tuple(notes),
    )
