"""Sequence-space norms, operator-norm bounds and the bv_p difference calculus.

Conventions
-----------
In lp a finite array stands for the finitely supported sequence obtained by
padding with zeros. In bv_p a finite array stands for its *constant
continuation* ``(x_0, ..., x_{N-1}, x_{N-1}, ...)``; this is what makes the
truncated step sequences ``b^(k)`` unit vectors and keeps the difference
transform ``(x_k - x_{k-1})_{k<N}`` (with ``x_{-1} = 0``) a bijection onto
finite arrays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import TriBandParams, TruncationMatrix, apply, as_sequence
from .resolvent import apply_resolvent

__all__ = [
    "SpaceSpec",
    "NormReport",
    "EMPIRICAL_SAMPLE_VERSION",
    "lp_norm",
    "bvp_norm",
    "dq_norm",
    "delta_transform",
    "inverse_delta",
    "basis_bk",
    "matrix_norm_l1",
    "matrix_norm_linf",
    "empirical_samples",
    "operator_norm_bounds",
    "resolvent_bvp",
]


def _check_exponent(p):
    if not (1 < p < math.inf):
        raise ValueError(f"exponent must satisfy 1 < p < inf, got {p!r}")


@dataclass(frozen=True)
class SpaceSpec:
    """One of the spaces lp or bv_p with exponent ``1 < p < inf``."""

    kind: str
    p: float

    def __post_init__(self):
        if self.kind not in ("lp", "bvp"):
            raise ValueError(f"space kind must be 'lp' or 'bvp', got {self.kind!r}")
        _check_exponent(self.p)

    @classmethod
    def lp(cls, p):
        return cls("lp", float(p))

    @classmethod
    def bvp(cls, p):
        return cls("bvp", float(p))

    @property
    def q(self) -> float:
        """Conjugate exponent, ``1/p + 1/q = 1``."""
        return self.p / (self.p - 1)

    @property
    def label(self) -> str:
        return f"{'l' if self.kind == 'lp' else 'bv'}_{self.p:g}"

    def norm(self, x) -> float:
        return lp_norm(x, self.p) if self.kind == "lp" else bvp_norm(x, self.p)


def lp_norm(x, p) -> float:
    """``(sum |x_k|^p)^{1/p}``, rescaled by ``max |x_k|`` against overflow."""
    _check_exponent(p)
    mag = np.abs(as_sequence(x))
    if mag.size == 0:
        return 0.0
    top = mag.max()
    if top == 0:
        return 0.0
    return float(top * np.sum((mag / top) ** p) ** (1 / p))


def delta_transform(x) -> np.ndarray:
    """Backward differences ``x_k - x_{k-1}`` with ``x_{-1} = 0``."""
    x = as_sequence(x)
    return np.diff(x, prepend=np.zeros(1, dtype=x.dtype))


def inverse_delta(d) -> np.ndarray:
    """Running prefix sums; the inverse of :func:`delta_transform`."""
    return np.cumsum(as_sequence(d))


def bvp_norm(x, p) -> float:
    """lp norm of the backward differences of ``x``.

    The leading coordinate contributes ``|x_0|``; no drop back to zero is
    added after the last entry (constant continuation).
    """
    return lp_norm(delta_transform(x), p)


def dq_norm(a, q) -> float:
    """``(sum_k |sum_{j>=k} a_j|^q)^{1/q}`` for finitely supported ``a``."""
    a = as_sequence(a)
    suffix = np.cumsum(a[::-1])[::-1]
    return lp_norm(suffix, q)


def basis_bk(k: int, N: int) -> np.ndarray:
    """Step sequence ``b^(k)``: zero before index ``k``, one from ``k`` on."""
    if not 0 <= k < N:
        raise IndexError(f"need 0 <= k < N, got k={k}, N={N}")
    out = np.zeros(N, dtype=np.int64)
    out[k:] = 1
    return out


def _dense(M) -> np.ndarray:
    return M.toarray() if isinstance(M, TruncationMatrix) else np.asarray(M)


def matrix_norm_l1(M) -> float:
    """Largest absolute column sum."""
    return float(np.abs(_dense(M)).sum(axis=0).max())


def matrix_norm_linf(M) -> float:
    """Largest absolute row sum."""
    return float(np.abs(_dense(M)).sum(axis=1).max())


@dataclass(frozen=True)
class NormReport:
    """Bounds on ``||U||`` over one space. ``lower_bound`` is ``None`` when no
    lower bound is known (bv_p)."""

    lower_bound: float | None
    upper_bound: float
    empirical: float
    space: SpaceSpec


EMPIRICAL_SAMPLE_VERSION = 1
_WINDOW_LENGTH = 2000
_FREQUENCIES = 32
_RANDOM_COUNT = 100
_RANDOM_LENGTH = 64
_SEED = 20240611


@lru_cache(maxsize=1)
def empirical_samples() -> tuple[np.ndarray, ...]:
    """Fixed probe vectors for the empirical operator norm.

    Unit vectors ``e^(0..2)``, sine-windowed cosines of length 2000 at
    frequencies ``j pi / 31`` (``j = 0..31``), and 100 seeded Gaussian
    vectors of length 64.
    """
    samples = []
    for k in range(3):
        e = np.zeros(k + 1)
        e[k] = 1.0
        samples.append(e)
    idx = np.arange(_WINDOW_LENGTH)
    window = np.sin(np.pi * (idx + 1) / (_WINDOW_LENGTH + 1))
    for j in range(_FREQUENCIES):
        samples.append(window * np.cos(j * np.pi / (_FREQUENCIES - 1) * idx))
    rng = np.random.default_rng(_SEED)
    for _ in range(_RANDOM_COUNT):
        samples.append(rng.standard_normal(_RANDOM_LENGTH))
    return tuple(samples)


def conjugated_image(op: TriBandParams, v) -> np.ndarray:
    """``Delta U Delta^{-1} v`` for finitely supported differences ``v``.

    Differencing ``U x`` for ``x = Delta^{-1} v`` gives ``U v`` plus the
    boundary term ``s v_0 e_0``, because ``(U x)_0`` has no ``x_{-1}`` to
    cancel against.
    """
    out = apply(op, v)
    if len(v):
        out[0] += op.s * v[0]
    return out


def operator_norm_bounds(op: TriBandParams, space: SpaceSpec) -> NormReport:
    """Lower, upper and sampled values of ``||U||`` on ``space``.

    The upper bound is ``2|s| + |r|`` on both spaces. On lp the lower bound
    is ``||U e^(1)||_p = (|r|^p + 2|s|^p)^{1/p}``. On bv_p the ratio
    ``||U x||_bv / ||x||_bv`` is sampled in difference coordinates, where it
    becomes ``||Delta U Delta^{-1} v||_p / ||v||_p``.
    """
    p = space.p
    upper = 2 * abs(op.s) + abs(op.r)
    ratios = []
    for v in empirical_samples():
        image = apply(op, v) if space.kind == "lp" else conjugated_image(op, v)
        ratios.append(lp_norm(image, p) / lp_norm(v, p))
    lower = None
    if space.kind == "lp":
        lower = (abs(op.r) ** p + 2 * abs(op.s) ** p) ** (1 / p)
    return NormReport(lower, upper, max(ratios), space)


def resolvent_bvp(op: TriBandParams, lam, y, K: int, *, force: bool = False) -> np.ndarray:
    """``inverse_delta(apply_resolvent(delta_transform(y)))``, first ``K`` entries.

    This is the resolvent transported to bv_p through the isometry
    ``Delta: bv_p -> lp``, i.e. the inverse of ``Delta^{-1} (U - lam I) Delta``.
    That operator differs from ``U - lam I`` itself by the rank-one
    boundary term ``s b^(0) e_0^T``; both have the same spectrum.
    """
    d = delta_transform(y)
    return inverse_delta(apply_resolvent(op, lam, d, K, force=force))
