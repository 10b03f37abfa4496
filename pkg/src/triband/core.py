"""The symmetric tri-band operator U(s, r, s) and its elementary machinery.

The operator acts on one-sided sequences ``x = (x_0, x_1, ...)`` by

    (U x)_k = s x_{k-1} + r x_k + s x_{k+1},    x_{-1} = 0.

Finite sequences are plain 1-D numpy arrays, 0-based.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DegenerateOperatorError",
    "ResolventUndefinedError",
    "SingularTruncationError",
    "TriBandParams",
    "CharRoots",
    "TruncationMatrix",
    "make_operator",
    "as_sequence",
    "char_roots",
    "truncation_matrix",
    "apply",
]

DOUBLE_ROOT_TOL = 1e-12


class DegenerateOperatorError(ValueError):
    """Raised by spectral routines when the off-diagonal ``s`` is zero."""


class ResolventUndefinedError(ValueError):
    """Raised when the resolvent is requested at (or too near) the spectrum."""


class SingularTruncationError(np.linalg.LinAlgError):
    """A finite section ``U_N - lambda I`` is singular to working precision."""

    def __init__(self, message, rcond=0.0):
        super().__init__(message)
        self.rcond = rcond


def _scalar(value):
    """Return ``value`` as a float when it is real, else as a complex."""
    z = complex(value)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite scalar: {value!r}")
    return z.real if z.imag == 0 else z


@dataclass(frozen=True)
class TriBandParams:
    """Defining scalars of U(s, r, s): ``r`` on the diagonal, ``s`` beside it."""

    r: float | complex
    s: float | complex

    @property
    def degenerate(self) -> bool:
        return self.s == 0

    @property
    def is_real(self) -> bool:
        return isinstance(self.r, float) and isinstance(self.s, float)

    @property
    def dtype(self):
        return np.float64 if self.is_real else np.complex128

    def require_nondegenerate(self):
        if self.degenerate:
            raise DegenerateOperatorError(
                "s = 0: the operator is diagonal and its spectrum is the single "
                f"point {{{self.r}}}; spectral routines need s != 0")


def make_operator(r, s) -> TriBandParams:
    """Validate ``r`` and ``s`` and build the operator parameters.

    ``s = 0`` is accepted (check :attr:`TriBandParams.degenerate`) but every
    spectral routine rejects it.
    """
    return TriBandParams(_scalar(r), _scalar(s))


def as_sequence(x, dtype=None) -> np.ndarray:
    """Coerce ``x`` to a finite 1-D array."""
    arr = np.asarray(x, dtype=dtype)
    if arr.ndim != 1:
        raise ValueError(f"a sequence must be 1-D, got shape {arr.shape}")
    if arr.dtype.kind not in "biufc":
        raise TypeError(f"non-numeric sequence dtype {arr.dtype}")
    if arr.dtype.kind in "fc" and not np.all(np.isfinite(arr)):
        raise ValueError("sequence entries must be finite")
    return arr


@dataclass(frozen=True)
class CharRoots:
    """Roots of ``s x^2 + (r - lam) x + s`` ordered so ``|alpha1| <= |alpha2|``."""

    lam: complex
    ratio_q: complex
    alpha1: complex
    alpha2: complex
    is_double_root: bool

    @property
    def modulus(self) -> float:
        """``|alpha1|``; below one exactly on the resolvent set."""
        return abs(self.alpha1)


def char_roots(op: TriBandParams, lam) -> CharRoots:
    """Roots of the characteristic polynomial ``s x^2 + (r - lam) x + s``.

    The polynomial is normalised to ``x^2 + q x + 1`` with ``q = (r - lam)/s``.
    The larger root is taken from the quadratic formula with the
    discriminant's sign matched to ``-q`` (no cancellation), and the smaller
    one from the product relation ``alpha1 = 1/alpha2``.

    Examples
    --------
    >>> roots = char_roots(make_operator(0, 1), 3)
    >>> round(roots.alpha1.real, 7), round(roots.alpha2.real, 7)
    (0.381966, 2.618034)
    """
    op.require_nondegenerate()
    lam = complex(lam)
    q = (op.r - lam) / op.s
    if min(abs(q - 2), abs(q + 2)) <= DOUBLE_ROOT_TOL * max(1.0, abs(q)):
        root = complex(-1.0 if q.real > 0 else 1.0)
        return CharRoots(lam, complex(q), root, root, True)
    # (q - 2)(q + 2) is better conditioned than q*q - 4 near q = +-2
    disc = cmath.sqrt((q - 2) * (q + 2))
    if (q.conjugate() * disc).real < 0:
        disc = -disc
    alpha2 = (-q - disc) / 2
    alpha1 = 1 / alpha2
    if abs(alpha1) > abs(alpha2):
        alpha1, alpha2 = alpha2, alpha1
    return CharRoots(lam, complex(q), alpha1, alpha2, False)


@dataclass(frozen=True)
class TruncationMatrix:
    """The ``N x N`` leading section of ``U(s, r, s) - lam I``.

    Stored by its two constant bands; :meth:`toarray` and :meth:`banded`
    expand it on demand.
    """

    order: int
    diagonal: float | complex
    offdiagonal: float | complex

    @property
    def dtype(self):
        if isinstance(self.diagonal, complex) or isinstance(self.offdiagonal, complex):
            return np.complex128
        return np.float64

    def toarray(self) -> np.ndarray:
        n = self.order
        out = np.zeros((n, n), dtype=self.dtype)
        idx = np.arange(n)
        out[idx, idx] = self.diagonal
        out[idx[:-1], idx[1:]] = self.offdiagonal
        out[idx[1:], idx[:-1]] = self.offdiagonal
        return out

    def banded(self) -> np.ndarray:
        """``(3, N)`` upper/diag/lower storage as used by LAPACK ``gbsv``."""
        n = self.order
        ab = np.zeros((3, n), dtype=self.dtype)
        ab[0, 1:] = self.offdiagonal
        ab[1, :] = self.diagonal
        ab[2, :-1] = self.offdiagonal
        return ab

    def __matmul__(self, x):
        x = as_sequence(x)
        if len(x) != self.order:
            raise ValueError(f"vector length {len(x)} != order {self.order}")
        x = x.astype(np.result_type(x.dtype, self.dtype))
        y = self.diagonal * x
        y[:-1] += self.offdiagonal * x[1:]
        y[1:] += self.offdiagonal * x[:-1]
        return y


def truncation_matrix(op: TriBandParams, N: int, lam=0) -> TruncationMatrix:
    """Finite section of order ``N`` of ``U - lam I``."""
    if int(N) != N or N < 1:
        raise ValueError(f"order must be a positive integer, got {N!r}")
    return TruncationMatrix(int(N), _scalar(op.r - complex(lam)), op.s)


def apply(op: TriBandParams, x) -> np.ndarray:
    """Apply U(s, r, s) to a finitely supported sequence.

    The result has length ``len(x) + 1`` so the spill-over ``s x_{N-1}`` into
    coordinate ``N`` is kept; everything beyond is zero.
    """
    x = as_sequence(x)
    dtype = np.result_type(x.dtype, op.dtype, np.float64)
    padded = np.zeros(len(x) + 2, dtype=dtype)
    padded[: len(x)] = x
    y = op.r * padded[:-1]
    y[1:] += op.s * padded[:-2]
    y += op.s * padded[1:]
    return y
