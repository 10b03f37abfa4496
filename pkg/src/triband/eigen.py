"""Formal eigenvectors, finite-section eigenvalues and pseudospectra.

An eigenvector of U(s, r, s) with ``x_1 != 0`` must solve

    x_2 = -q x_1,    x_{n+2} + q x_{n+1} + x_n = 0,    q = (r - lam)/s,

so it is unique up to scale. It never lies in lp: either it grows
(geometrically, or linearly at a double root) or it oscillates with
non-decaying amplitude. The checkpoint tests below make that visible.
"""
from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal, svdvals
from scipy.signal import lfilter

from .core import CharRoots, TriBandParams, char_roots, truncation_matrix
from .spectrum import distance_to_segment

__all__ = [
    "RootCase",
    "RecurrenceSolution",
    "DivergenceEvidence",
    "PseudospectrumGrid",
    "GROWTH_CHECKPOINTS",
    "GROWTH_RATIO",
    "OSCILLATION_CHECKPOINTS",
    "OSCILLATION_MASS_RATIO",
    "recurrence_solution",
    "formal_eigenvector",
    "partial_lp_norms",
    "divergence_evidence",
    "no_eigenvalue_verdict",
    "finite_section_eigenvalues",
    "hausdorff_to_segment",
    "pseudospectrum_grid",
]

# x_n = mantissa * exp(log_scale); rescale once a chunk could exceed exp(500)
_CHUNK_LOG_BUDGET = 500.0
_LOG_FLOAT_MAX = math.log(np.finfo(float).max)

# norm(10^4) >= 10^3 norm(10): geometric or linear growth
GROWTH_CHECKPOINTS = (10, 10_000)
GROWTH_RATIO = 1e3
# (norm(10^5) / norm(10^2))^p >= 100: p-th power mass keeps accruing per index
OSCILLATION_CHECKPOINTS = (100, 100_000)
OSCILLATION_MASS_RATIO = 100.0


class RootCase(enum.Enum):
    DOUBLE_ROOT = "DoubleRoot"
    DISTINCT_ROOTS = "DistinctRoots"


@dataclass(frozen=True)
class RecurrenceSolution:
    """The eigen-recurrence solution seeded with ``x_1``."""

    lam: complex
    roots: CharRoots
    x1: complex

    @property
    def case(self) -> RootCase:
        return RootCase.DOUBLE_ROOT if self.roots.is_double_root else RootCase.DISTINCT_ROOTS

    @property
    def q(self):
        q = self.roots.ratio_q
        return q.real if q.imag == 0 else q

    def closed_form(self, n):
        """``x_n`` from the root formulas (no overflow protection)."""
        n = np.asarray(n)
        if self.case is RootCase.DOUBLE_ROOT:
            if self.roots.alpha1.real > 0:
                return n * self.x1
            return (-1.0) ** (n + 1) * n * self.x1
        a1, a2 = self.roots.alpha1, self.roots.alpha2
        return (a2 ** n - a1 ** n) / (a2 - a1) * self.x1

    def scaled_terms(self, N: int) -> tuple[np.ndarray, np.ndarray]:
        """``(mantissa, log_scale)`` with ``x_n = mantissa[n-1] * exp(log_scale[n-1])``.

        The double-root cases use the exact closed forms (integer seeds stay
        integer). Otherwise the recurrence is run forward in chunks, with the
        filter state rescaled between chunks; forward iteration is stable
        here because the wanted solution is the dominant one.
        """
        if N < 1:
            raise ValueError("N must be positive")
        if self.case is RootCase.DOUBLE_ROOT:
            n = np.arange(1, N + 1)
            # alpha = 1 (q = -2): x_n = n x_1; alpha = -1 (q = 2): alternating signs
            mant = n * self.x1 if self.roots.alpha1.real > 0 else np.where(n % 2, n, -n) * self.x1
            return mant, np.zeros(N)
        q = self.q
        dtype = np.complex128 if isinstance(q, complex) or isinstance(self.x1, complex) else np.float64
        coeffs = np.array([1.0, q, 1.0], dtype=np.result_type(dtype, type(q)))
        growth = math.log(abs(self.roots.alpha2))
        chunk = N if growth <= 0 else max(1, min(N, int(_CHUNK_LOG_BUDGET / growth)))
        mant = np.empty(N, dtype=coeffs.dtype)
        logs = np.empty(N)
        state = np.zeros(2, dtype=coeffs.dtype)
        scale = 0.0
        for start in range(0, N, chunk):
            u = np.zeros(min(chunk, N - start), dtype=coeffs.dtype)
            if start == 0:
                u[0] = 1.0
            out, state = lfilter([1.0], coeffs, u, zi=state)
            mant[start:start + len(u)] = out
            logs[start:start + len(u)] = scale
            top = np.abs(state).max()
            if top > 0:
                state = state / top
                scale += math.log(top)
        return mant * self.x1, logs


def recurrence_solution(op: TriBandParams, lam, x1=1) -> RecurrenceSolution:
    if x1 == 0:
        raise ValueError("x1 = 0 forces the zero sequence; an eigenvector needs x1 != 0")
    return RecurrenceSolution(complex(lam), char_roots(op, lam), x1)


def formal_eigenvector(op: TriBandParams, lam, N: int, x1=1) -> np.ndarray:
    """First ``N`` entries ``(x_1, ..., x_N)`` of the formal eigenvector.

    Raises ``OverflowError`` when entries leave the float range; use
    :meth:`RecurrenceSolution.scaled_terms` for those.

    Examples
    --------
    >>> from triband.core import make_operator
    >>> formal_eigenvector(make_operator(0, 1), 3, 4).tolist()
    [1.0, 3.0, 8.0, 21.0]
    """
    mant, logs = recurrence_solution(op, lam, x1).scaled_terms(N)
    if not logs.any():
        return mant
    with np.errstate(divide="ignore"):
        peak = np.max(np.log(np.abs(mant)) + logs)
    if peak > _LOG_FLOAT_MAX:
        raise OverflowError(
            f"|x_n| reaches exp({peak:.1f}); use recurrence_solution(...).scaled_terms")
    return mant * np.exp(logs)


def _log_abs_terms(mant, logs, differenced):
    if differenced:
        # x_n - x_{n-1} with x_0 = 0, aligned to the scale of x_n
        mant = mant.astype(np.result_type(mant.dtype, np.float64))
        prev = mant[:-1] * np.exp(logs[:-1] - logs[1:])
        mant = np.concatenate((mant[:1], mant[1:] - prev))
    with np.errstate(divide="ignore"):
        return np.log(np.abs(mant)) + logs


def partial_lp_norms(op: TriBandParams, lam, p, checkpoints, *, x1=1,
                     differenced: bool = False, log: bool = False) -> list[float]:
    """lp norms of the first ``N`` formal-eigenvector entries, per checkpoint ``N``.

    Accumulation happens in the log domain. With ``log=True`` the natural
    logarithms of the norms are returned (never overflows); otherwise large
    norms come back as ``inf``. ``differenced=True`` measures the backward
    differences instead (the bv_p norm).
    """
    if not (1 < p < math.inf):
        raise ValueError(f"exponent must satisfy 1 < p < inf, got {p!r}")
    checkpoints = [int(n) for n in checkpoints]
    if not checkpoints or min(checkpoints) < 1:
        raise ValueError("checkpoints must be positive integers")
    mant, logs = recurrence_solution(op, lam, x1).scaled_terms(max(checkpoints))
    cum = np.logaddexp.accumulate(p * _log_abs_terms(mant, logs, differenced))
    out = [float(cum[n - 1] / p) for n in checkpoints]
    if log:
        return out
    with np.errstate(over="ignore"):
        return [float(np.exp(v)) for v in out]


@dataclass(frozen=True)
class DivergenceEvidence:
    lam: complex
    p: float
    growth_ratio: float
    oscillation_mass_ratio: float

    @property
    def grows(self) -> bool:
        return self.growth_ratio >= GROWTH_RATIO

    @property
    def oscillates(self) -> bool:
        return self.oscillation_mass_ratio >= OSCILLATION_MASS_RATIO

    @property
    def diverges(self) -> bool:
        return self.grows or self.oscillates


def divergence_evidence(op: TriBandParams, lam, p, *, differenced: bool = False) -> DivergenceEvidence:
    """Checkpoint ratios of the formal eigenvector's partial norms.

    Two documented ladders: growth, ``norm(10^4) / norm(10) >= 10^3``; and
    bounded oscillation, ``(norm(10^5) / norm(10^2))^p >= 100``, i.e. the
    p-th power mass grows in proportion to the number of terms.
    """
    ladder = sorted(set(GROWTH_CHECKPOINTS + OSCILLATION_CHECKPOINTS))
    logs = dict(zip(ladder, partial_lp_norms(op, lam, p, ladder, differenced=differenced, log=True)))
    g_lo, g_hi = GROWTH_CHECKPOINTS
    o_lo, o_hi = OSCILLATION_CHECKPOINTS
    with np.errstate(over="ignore"):
        growth = float(np.exp(logs[g_hi] - logs[g_lo]))
        mass = float(np.exp(p * (logs[o_hi] - logs[o_lo])))
    return DivergenceEvidence(complex(lam), float(p), growth, mass)


def no_eigenvalue_verdict(op: TriBandParams, lam, p, space: str = "lp", adjoint: bool = False) -> bool:
    """True when ``lam`` is shown not to be an eigenvalue (always, in practice).

    On bv_p the differenced sequence is tested. The adjoint acts on the dual
    space through the transposed matrix, which is U itself, so the same
    formal eigenvector is tested against the conjugate exponent
    ``q = p/(p-1)`` (l_q, and D_q which embeds in l_q).
    """
    if space not in ("lp", "bvp"):
        raise ValueError(f"unknown space {space!r}")
    if adjoint:
        return divergence_evidence(op, lam, p / (p - 1)).diverges
    return divergence_evidence(op, lam, p, differenced=(space == "bvp")).diverges


def _section_cosines(N: int) -> np.ndarray:
    """``2 cos(j pi/(N+1))``, ``j = N..1``, ascending.

    Written as ``2 sin((N + 1 - 2j) pi / (2(N + 1)))`` so the set is exactly
    symmetric about 0 and contains 0 exactly when ``N`` is odd.
    """
    m = N + 1 - 2 * np.arange(N, 0, -1)
    return 2 * np.sin(m * np.pi / (2 * (N + 1)))


def finite_section_eigenvalues(op: TriBandParams, N: int, method: str = "auto") -> np.ndarray:
    """Sorted eigenvalues of the order-``N`` section.

    ``method="closed_form"`` uses ``r + 2 s cos(j pi/(N+1))``;
    ``method="sturm"`` runs LAPACK's Sturm-sequence bisection (``stebz``) and
    needs real ``r, s``. ``"auto"`` picks Sturm for real parameters.
    """
    op.require_nondegenerate()
    if N < 1:
        raise ValueError("N must be positive")
    if method == "auto":
        method = "sturm" if op.is_real else "closed_form"
    if method == "closed_form":
        vals = op.r + op.s * _section_cosines(N)
    elif method == "sturm":
        if not op.is_real:
            raise ValueError("the Sturm path needs real r and s")
        vals = eigh_tridiagonal(np.full(N, op.r), np.full(N - 1, op.s),
                                eigvals_only=True, lapack_driver="stebz")
    else:
        raise ValueError(f"unknown method {method!r}")
    return np.sort(vals)


def hausdorff_to_segment(op: TriBandParams, points) -> float:
    """Hausdorff distance between a finite point set and the spectral segment.

    The larger of (a) the farthest point's distance to the segment and (b)
    the largest distance from a segment point to the set. (b) is computed
    from the projections onto the segment, which is exact for points on
    the segment and otherwise off by at most the value of (a).
    """
    op.require_nondegenerate()
    pts = np.atleast_1d(np.asarray(points, dtype=complex))
    if pts.size == 0:
        return math.inf
    off = max(distance_to_segment(op, z) for z in pts)
    t = np.sort(np.clip(((pts - op.r) / (2 * op.s)).real, -1.0, 1.0))
    gaps = np.diff(np.concatenate(([-1.0], t, [1.0])))
    cover = max(gaps[0], gaps[-1], gaps[1:-1].max(initial=0.0) / 2) * abs(2 * op.s)
    return float(max(off, cover))


@dataclass(frozen=True)
class PseudospectrumGrid:
    """``values[i, j] = 1 / sigma_min(U_N - lam I)`` at ``lam = re[j] + 1j*im[i]``."""

    re: np.ndarray
    im: np.ndarray
    values: np.ndarray

    def rows(self):
        """``(lambda_re, lambda_im, value)`` triples, row-major in ``im``."""
        for i, y in enumerate(self.im):
            for j, x in enumerate(self.re):
                yield float(x), float(y), float(self.values[i, j])


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("TRIBAND_THREADS", "1")))
    except ValueError:
        return 1


def pseudospectrum_grid(op: TriBandParams, region, resolution, N: int,
                        method: str = "normal", workers: int | None = None) -> PseudospectrumGrid:
    """Resolvent norm of the order-``N`` section on a rectangular grid.

    ``region = (re_min, re_max, im_min, im_max)``; ``resolution`` is one
    count for both axes or a pair ``(n_re, n_im)``. An empty rectangle or a
    zero count gives an empty grid. Exact eigenvalues map to ``inf``.

    Every section is ``r I + s T_N`` with ``T_N`` real symmetric, hence
    normal, so ``sigma_min`` equals the distance to the nearest section
    eigenvalue; ``method="normal"`` uses that. ``method="svd"`` computes
    singular values of the dense section directly, spread over
    ``workers`` threads (default ``$TRIBAND_THREADS`` or 1).
    """
    op.require_nondegenerate()
    re_min, re_max, im_min, im_max = map(float, region)
    n_re, n_im = (resolution, resolution) if np.isscalar(resolution) else resolution
    if n_re <= 0 or n_im <= 0 or re_min > re_max or im_min > im_max:
        return PseudospectrumGrid(np.empty(0), np.empty(0), np.empty((0, 0)))
    re = np.linspace(re_min, re_max, int(n_re))
    im = np.linspace(im_min, im_max, int(n_im))
    lam = re[None, :] + 1j * im[:, None]

    if method == "normal":
        t = _section_cosines(N)
        w = (lam - op.r) / op.s
        idx = np.clip(np.searchsorted(t, w.real), 1, N - 1) if N > 1 else np.zeros(w.shape, int)
        cand = [t[idx]] if N == 1 else [t[idx - 1], t[idx]]
        dist = np.min([np.abs(w - c) for c in cand], axis=0) * abs(op.s)
    elif method == "svd":
        base = truncation_matrix(op, N).toarray().astype(complex)
        eye = np.eye(N)

        def smallest(z):
            return svdvals(base - z * eye)[-1]

        with ThreadPoolExecutor(max_workers=workers or _threads()) as pool:
            dist = np.array(list(pool.map(smallest, lam.ravel()))).reshape(lam.shape)
    else:
        raise ValueError(f"unknown method {method!r}")
    with np.errstate(divide="ignore"):
        values = np.where(dist == 0, np.inf, 1.0 / dist)
    return PseudospectrumGrid(re, im, values)
