"""Constructive Schur-Horn: a real orthogonal Q with diag(Q diag(lam) Q^T) = d.

The construction is the classical induction on N, run as a loop over an
active index set:

1. sort ``lam`` and ``d`` decreasingly and pair them position by position;
2. pick the smallest K with ``d[K+1] >= lam[K+1]``; then
   ``lam[K] >= d[K] >= d[K+1] >= lam[K+1]``;
3. a plane rotation on the pair (K, K+1) moves ``d[K]`` onto the diagonal
   and leaves ``lam[K] + lam[K+1] - d[K]`` in the other slot;
4. drop the finished index K and repeat on what is left.

Rows of Q are indexed by the caller's ordering of ``d`` and columns by the
caller's ordering of ``lam``, so no un-permuting is needed afterwards.

Orthogonality is certified when an :class:`OrthogonalMatrix` is built:
``max|Q^T Q - I| <= KAPPA_ORTH * N * eps``. Each row is touched by at most
N - 1 rotations, and every rotation has ``u**2 + v**2 = 1`` to a few ulps,
so the residual grows at most linearly in N.
"""

from __future__ import annotations

import math
from dataclasses import InitVar, dataclass, field

import numpy as np

from .errors import DimensionMismatch, IntervalViolation, MajorizationViolated
from .seqkit import (
    DEFAULT_TOL,
    RealSeq,
    as_real_seq,
    check_majorization,
    sort_desc,
)
from .verify import DoublyStochasticMatrix

EPS = float(np.finfo(float).eps)
KAPPA_ORTH = 32.0


@dataclass(frozen=True, eq=False)
class OrthogonalMatrix:
    """Dense real square matrix with its orthogonality residual attached.

    Pass ``certify=False`` to wrap a matrix that is only claimed to be
    orthogonal (e.g. one read back from disk for re-verification).
    """

    entries: np.ndarray
    certify: InitVar[bool] = True
    residual: float = field(init=False)

    def __post_init__(self, certify):
        q = np.array(self.entries, dtype=float)
        if q.ndim != 2 or q.shape[0] != q.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {q.shape}")
        q.setflags(write=False)
        object.__setattr__(self, "entries", q)
        n = q.shape[0]
        res = float(np.max(np.abs(q.T @ q - np.eye(n)))) if n else 0.0
        object.__setattr__(self, "residual", res)
        if certify and res > self.bound:
            raise ValueError(f"matrix is not orthogonal: residual {res:.3e} > {self.bound:.3e}")

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def bound(self) -> float:
        return KAPPA_ORTH * max(1, self.n) * EPS


@dataclass(frozen=True)
class TwoByTwoKernel:
    u: float
    v: float

    @property
    def is_identity(self) -> bool:
        return self.u == 1.0 and self.v == 0.0

    def matrix(self) -> np.ndarray:
        return np.array([[self.u, -self.v], [self.v, self.u]])


@dataclass(frozen=True)
class PivotStep:
    k: int  # 1-based position in the active (sorted) list
    lambda_k: float
    lambda_k1: float
    d_k: float
    lambda_k1_new: float
    rows: tuple[int, int]  # rows of Q that were rotated, in the caller's d-ordering
    kernel: TwoByTwoKernel


@dataclass(frozen=True, eq=False)
class HornCertificate:
    q: OrthogonalMatrix
    lam: RealSeq
    d: RealSeq
    diag_residual: float
    orth_residual: float
    steps: tuple[PivotStep, ...]
    tol: float = DEFAULT_TOL


def kernel2(lambda1: float, lambda2: float, d1: float, tol: float = DEFAULT_TOL) -> TwoByTwoKernel:
    """Rotation ``[[u, -v], [v, u]]`` whose conjugation of diag(lambda1, lambda2) has d1 first.

    u = sqrt((d1 - lambda2) / (lambda1 - lambda2)), v = sqrt((lambda1 - d1) / (lambda1 - lambda2)).
    Radicands that are negative by less than the slack are clamped to zero.
    """
    slack = tol * max(1.0, abs(lambda1) + abs(lambda2))
    if lambda1 < lambda2 - slack:
        raise IntervalViolation(f"interval violation: lambda1={lambda1!r} < lambda2={lambda2!r}")
    if not (lambda2 - slack <= d1 <= lambda1 + slack):
        raise IntervalViolation(
            f"interval violation: d1={d1!r} not in [{lambda2!r}, {lambda1!r}]"
        )
    if lambda1 - lambda2 <= slack:
        return TwoByTwoKernel(1.0, 0.0)
    a = max(d1 - lambda2, 0.0)
    b = max(lambda1 - d1, 0.0)
    # a + b == lambda1 - lambda2 up to rounding; dividing by it keeps u^2 + v^2 = 1
    s = a + b
    return TwoByTwoKernel(math.sqrt(a / s), math.sqrt(b / s))


def select_pivot(lam_active, d_active, slack: float = 0.0) -> int:
    """Smallest 1-based K < m with ``d[K+1] >= lam[K+1] - slack``.

    Both inputs are sorted decreasingly. If no such K exists the totals
    cannot agree, i.e. the pair was not majorized.
    """
    m = len(lam_active)
    if m != len(d_active):
        raise DimensionMismatch(m, len(d_active))
    if m < 2:
        raise ValueError("need at least two active entries")
    for j in range(m - 1):
        if d_active[j + 1] >= lam_active[j + 1] - slack:
            return j + 1
    raise MajorizationViolated(m - 1)


def horn_construct(lam, d, tol: float = DEFAULT_TOL, debug: bool = False) -> HornCertificate:
    """Build Q with diag(Q diag(lam) Q^T) = d, both in the caller's ordering.

    With ``debug=True`` every intermediate spectrum (finished targets plus
    the still-active values) is re-checked to majorize ``d``.
    """
    lam = as_real_seq(lam)
    d = as_real_seq(d)
    n = len(lam)
    if n != len(d):
        raise DimensionMismatch(n, len(d))
    rep = check_majorization(lam, d, tol)
    if not rep.holds:
        idx = rep.first_violation
        raise MajorizationViolated(idx, rep.slacks[idx])
    slack = rep.tolerance_used

    ls, pl = sort_desc(lam)
    ds, pd = sort_desc(d)
    q = np.zeros((n, n))
    q[list(pd.map), list(pl.map)] = 1.0

    act = list(pd.map)
    cur = list(ls.values)
    tgt = list(ds.values)
    finished = []
    steps = []
    while len(act) > 1:
        k = select_pivot(cur, tgt, slack) - 1
        lk, lk1, dk = cur[k], cur[k + 1], tgt[k]
        ker = kernel2(lk, lk1, dk, tol=slack / max(1.0, abs(lk) + abs(lk1)))
        i, j = act[k], act[k + 1]
        if not ker.is_identity:
            qi = q[i].copy()
            qj = q[j]
            q[i] = ker.u * qi - ker.v * qj
            q[j] = ker.v * qi + ker.u * qj
        new = lk1 + (lk - dk)
        steps.append(PivotStep(k + 1, lk, lk1, dk, new, (i, j), ker))
        # lk1 <= new <= lk, so the active values stay sorted after dropping k
        cur[k + 1] = new
        finished.append(dk)
        del act[k], cur[k], tgt[k]
        if debug:
            inter = check_majorization(finished + cur, d, tol)
            if not inter.holds:
                raise AssertionError(
                    f"intermediate spectrum lost majorization after step {len(steps)}: "
                    f"slacks {inter.slacks}"
                )

    qm = OrthogonalMatrix(q)
    diag = (qm.entries ** 2) @ lam.to_array()
    diag_res = float(np.max(np.abs(diag - d.to_array())))
    return HornCertificate(qm, lam, d, diag_res, qm.residual, tuple(steps), tol)


def orthostochastic_of(q) -> DoublyStochasticMatrix:
    """Squared entries of an orthogonal matrix, a doubly stochastic matrix."""
    arr = q.entries if isinstance(q, OrthogonalMatrix) else np.asarray(q, dtype=float)
    return DoublyStochasticMatrix.from_entries(arr * arr)


def hermitian_of(q, lam) -> np.ndarray:
    """A = Q diag(lam) Q^T, symmetrized."""
    arr = q.entries if isinstance(q, OrthogonalMatrix) else np.asarray(q, dtype=float)
    lam = as_real_seq(lam)
    if arr.shape[1] != len(lam):
        raise DimensionMismatch(arr.shape[1], len(lam))
    a = (arr * lam.to_array()) @ arr.T
    return (a + a.T) / 2
