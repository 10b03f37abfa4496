"""Resolvent ``(U - lambda I)^{-1}`` through its Green's kernel.

For ``lambda`` off the spectral segment the smaller characteristic root
``a = alpha1`` has ``|a| < 1`` and the inverse is the half-line Green's
kernel (rows and columns 1-based)::

    G(k, n) = (a^{|k-n|+1} - a^{k+n+1}) / (s (a^2 - 1))

It solves ``s G(k-1, n) + (r - lambda) G(k, n) + s G(k+1, n) = delta_kn``
with the Dirichlet condition ``G(0, n) = 0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import lapack
from scipy.signal import lfilter

from .core import (
    CharRoots,
    ResolventUndefinedError,
    SingularTruncationError,
    TriBandParams,
    as_sequence,
    char_roots,
    truncation_matrix,
)

__all__ = [
    "NEAR_SEGMENT_MARGIN",
    "ResolventKernel",
    "LpCertificate",
    "resolvent_kernel",
    "kernel_entry",
    "uncorrected_kernel_entry",
    "apply_resolvent",
    "dense_solve_oracle",
    "resolvent_norm_l1",
    "resolvent_norm_linf",
    "resolvent_in_lp_certificate",
]

# refuse |alpha1| above 1 - margin unless forced
NEAR_SEGMENT_MARGIN = 1e-9
ON_SEGMENT_TOL = 1e-12
# geometric tails are summed in closed form; the sup over columns is scanned
# until |alpha1|^n drops below exp(-TAIL_LOG) or MAX_SCAN columns
TAIL_LOG = 40.0
MAX_SCAN = 2_000_000


@dataclass(frozen=True)
class ResolventKernel:
    op: TriBandParams
    lam: complex
    roots: CharRoots

    @property
    def alpha(self):
        a = self.roots.alpha1
        if isinstance(self.op.s, float) and a.imag == 0:
            return a.real
        return a

    @property
    def normalization(self):
        a = self.alpha
        return 1 / (self.op.s * (a * a - 1))

    def entry(self, k: int, n: int):
        """``G(k, n)`` for 1-based ``k, n``."""
        if k < 1 or n < 1:
            raise IndexError(f"kernel indices are 1-based, got ({k}, {n})")
        a = self.alpha
        return self.normalization * a ** (abs(k - n) + 1) * (1 - a ** (2 * min(k, n)))

    def block(self, rows, cols) -> np.ndarray:
        """Kernel values on the grid ``rows x cols`` (1-based index arrays)."""
        k = np.asarray(rows, dtype=np.int64)[:, None]
        n = np.asarray(cols, dtype=np.int64)[None, :]
        if (k < 1).any() or (n < 1).any():
            raise IndexError("kernel indices are 1-based")
        a = self.alpha
        near = np.power(a, np.abs(k - n) + 1)
        return self.normalization * near * (1 - np.power(a, 2 * np.minimum(k, n)))


def resolvent_kernel(op: TriBandParams, lam, *, force: bool = False) -> ResolventKernel:
    """Kernel of ``(U - lam I)^{-1}``.

    Raises
    ------
    ResolventUndefinedError
        If ``lam`` lies on the spectral segment, or within
        ``NEAR_SEGMENT_MARGIN`` of it in root modulus and ``force`` is false.
    """
    roots = char_roots(op, lam)
    m = roots.modulus
    if roots.is_double_root or m >= 1 - ON_SEGMENT_TOL:
        raise ResolventUndefinedError(
            f"lambda = {lam} lies on the spectrum (|alpha1| = {m:.17g})")
    if m > 1 - NEAR_SEGMENT_MARGIN and not force:
        raise ResolventUndefinedError(
            f"lambda = {lam} is within the near-segment margin "
            f"(1 - |alpha1| = {1 - m:.3g}); pass force=True to evaluate anyway")
    return ResolventKernel(op, complex(lam), roots)


def kernel_entry(op: TriBandParams, lam, k: int, n: int, *, force: bool = False):
    """Single entry ``G(k, n)`` of the resolvent, 1-based."""
    return resolvent_kernel(op, lam, force=force).entry(k, n)


def uncorrected_kernel_entry(op: TriBandParams, lam, k: int, n: int):
    """Kernel with exponents ``(k+1-n, k+3-n)`` / ``(n+1-k, n+3-k)``.

    This form agrees with :func:`kernel_entry` whenever ``min(k, n) == 1`` but
    reduces to ``-a^{|k-n|+1}/s`` everywhere, which misses the boundary
    reflection term; it does not invert ``U - lam I``. Kept for comparison.
    """
    kern = resolvent_kernel(op, lam, force=True)
    a = kern.alpha
    if k >= n:
        t = a ** (k + 1 - n) - a ** (k + 3 - n)
    else:
        t = a ** (n + 1 - k) - a ** (n + 3 - k)
    return kern.normalization * t


def apply_resolvent(op: TriBandParams, lam, y, K: int, *, force: bool = False) -> np.ndarray:
    """First ``K`` coordinates of ``(U - lam I)^{-1} y``.

    ``y[0]`` is ``y_1``; the returned ``x[0]`` is ``x_1``. Only the support
    of ``y`` enters the (finite) sum.
    """
    y = as_sequence(y)
    kern = resolvent_kernel(op, lam, force=force)
    support = np.flatnonzero(y)
    rows = np.arange(1, K + 1)
    if support.size == 0:
        return np.zeros(K, dtype=np.result_type(y.dtype, np.asarray(kern.normalization).dtype))
    return kern.block(rows, support + 1) @ y[support]


def _lapack(name, dtype):
    prefix = "z" if np.dtype(dtype).kind == "c" else "d"
    return getattr(lapack, prefix + name)


def dense_solve_oracle(op: TriBandParams, lam, y, N: int, *, rcond_min: float = 1e-12) -> np.ndarray:
    """Solve the order-``N`` section ``(U_N - lam I) x = y`` directly.

    Uses LAPACK's tridiagonal LU with partial pivoting (``gttrf``/``gttrs``)
    and estimates the reciprocal 1-norm condition number with ``gtcon``.
    ``y`` may be 1-D or a 2-D block of right-hand sides (columns), zero-padded
    to ``N`` rows.

    Raises
    ------
    SingularTruncationError
        If the factorization breaks down or ``rcond < rcond_min``.
    """
    mat = truncation_matrix(op, N, lam)
    y = np.asarray(y)
    if y.shape[0] > N:
        raise ValueError(f"right-hand side has {y.shape[0]} rows > N = {N}")
    dtype = np.result_type(y.dtype, mat.dtype, np.float64)
    rhs = np.zeros((N,) + y.shape[1:], dtype=dtype)
    rhs[: y.shape[0]] = y

    d = np.full(N, mat.diagonal, dtype=dtype)
    off = np.full(N - 1, mat.offdiagonal, dtype=dtype)
    dl, d, du, du2, ipiv, info = _lapack("gttrf", dtype)(off.copy(), d, off.copy())
    if info > 0:
        raise SingularTruncationError(
            f"exactly singular section at N={N}, lambda={lam} (zero pivot {info})", 0.0)
    anorm = abs(mat.diagonal) + (2 * abs(mat.offdiagonal) if N > 2 else abs(mat.offdiagonal) * (N - 1))
    rcond, info = _lapack("gtcon", dtype)(dl, d, du, du2, ipiv, anorm)
    if rcond < rcond_min:
        raise SingularTruncationError(
            f"near-singular section at N={N}, lambda={lam}: rcond ~ {rcond:.3g}", rcond)
    x, info = _lapack("gttrs", dtype)(dl, d, du, du2, ipiv, rhs)
    return x


def _scan_length(a_mod: float) -> int:
    return max(2, min(MAX_SCAN, math.ceil(TAIL_LOG / -math.log(a_mod)) + 2))


def _line_sums(alpha: complex, length: int) -> np.ndarray:
    """``sum_m |alpha^{|j-m|+1} - alpha^{j+m+1}|`` for ``j = 1..length``.

    The entries beyond ``j`` form a geometric tail ``a |1 - alpha^{2j}| / (1 - a)``
    and the ``j - 1`` entries before it obey ``H_{j+1} = a (H_j + a |1 - alpha^{2j}|)``,
    run as a stable first-order filter (no growing powers ``a^{-j}``). The
    expression is symmetric in the two indices, so the same numbers describe
    a row or a column of the kernel.
    """
    a = abs(alpha)
    j = np.arange(1, length + 1, dtype=float)
    w = np.abs(1 - alpha ** (2 * j))
    head = np.concatenate(([0.0], lfilter([1.0], [1.0, -a], a * a * w[:-1])))
    return head + w * a / (1 - a)


def _sup_line_sum(op: TriBandParams, lam) -> float:
    kern = resolvent_kernel(op, lam, force=True)
    alpha = complex(kern.alpha)
    a = abs(alpha)
    sums = _line_sums(alpha, _scan_length(a))
    limit = a * (1 + a) / (1 - a)
    return abs(kern.normalization) * max(float(np.max(sums)), limit)


def resolvent_norm_l1(op: TriBandParams, lam) -> float:
    """``sup_n sum_k |G(k, n)|``: the (l1, l1) operator norm of the resolvent.

    Column ``n`` splits into the rows ``k >= n``, a geometric series summed in
    closed form, and the ``n - 1`` rows above it, accumulated recursively.
    Columns are scanned until the sums have converged to their ``n -> inf``
    limit ``c a (1 + a) / (1 - a)`` to working precision.
    """
    return _sup_line_sum(op, lam)


def resolvent_norm_linf(op: TriBandParams, lam) -> float:
    """``sup_k sum_n |G(k, n)|``: the (l_inf, l_inf) operator norm.

    ``G(k, n) = G(n, k)``, so row ``k`` carries the same entries as column
    ``k`` and the row sums coincide term by term with the column sums of
    :func:`resolvent_norm_l1`.
    """
    return _sup_line_sum(op, lam)


@dataclass(frozen=True)
class LpCertificate:
    l1_norm: float
    linf_norm: float
    lp_bounded: bool

    def lp_bound(self, p: float) -> float:
        """Riesz-Thorin bound ``||R||_1^{1/p} ||R||_inf^{1-1/p}`` on ``||R||_p``."""
        if not self.lp_bounded:
            return math.inf
        return self.l1_norm ** (1 / p) * self.linf_norm ** (1 - 1 / p)


def resolvent_in_lp_certificate(op: TriBandParams, lam) -> LpCertificate:
    """Boundedness of the resolvent on every lp, 1 < p < inf.

    The resolvent is bounded on l1 and on l_inf (finite column and row
    sums), hence on lp by interpolation. On the spectrum both norms are
    reported as infinite.
    """
    try:
        l1 = resolvent_norm_l1(op, lam)
        linf = resolvent_norm_linf(op, lam)
    except ResolventUndefinedError:
        return LpCertificate(math.inf, math.inf, False)
    return LpCertificate(l1, linf, math.isfinite(l1) and math.isfinite(linf))
