"""Spectrum and fine-spectrum classification of U(s, r, s) on lp and bv_p.

The spectrum is the segment ``{r + 2 s t : -1 <= t <= 1}`` on every lp and
bv_p with ``1 < p < inf``; all of it is continuous spectrum. A point
``lam`` is in the resolvent set exactly when the characteristic roots split
as ``|alpha1| < 1 < |alpha2|``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import CharRoots, TriBandParams, char_roots
from .spaces import SpaceSpec

__all__ = [
    "DEFAULT_TOL",
    "Region",
    "SpectrumSegment",
    "SpectralClassification",
    "FineSpectrumReport",
    "spectrum_segment",
    "classify_lambda",
    "segment_membership",
    "distance_to_segment",
    "fine_spectrum_report",
]

DEFAULT_TOL = 1e-12


class Region(enum.Enum):
    RESOLVENT_SET = "ResolventSet"
    CONTINUOUS_SPECTRUM = "ContinuousSpectrum"


@dataclass(frozen=True)
class SpectrumSegment:
    """Segment ``r + 2 s cos(theta)``, ``theta`` in ``[0, 2 pi]``."""

    endpoint_low: complex
    endpoint_high: complex

    @property
    def midpoint(self):
        return (self.endpoint_low + self.endpoint_high) / 2

    @property
    def half_length(self):
        """The vector ``2 s``."""
        return (self.endpoint_high - self.endpoint_low) / 2

    def point(self, theta):
        return self.midpoint + self.half_length * np.cos(theta)

    def sample(self, count: int) -> np.ndarray:
        return self.point(np.linspace(0.0, np.pi, count))


def spectrum_segment(op: TriBandParams) -> SpectrumSegment:
    """Spectrum ``[r - 2s, r + 2s]`` of U(s, r, s)."""
    op.require_nondegenerate()
    return SpectrumSegment(op.r - 2 * op.s, op.r + 2 * op.s)


def distance_to_segment(op: TriBandParams, lam) -> float:
    """Euclidean distance from ``lam`` to the spectral segment."""
    op.require_nondegenerate()
    mu = (complex(lam) - op.r) / (2 * op.s)
    t = min(1.0, max(-1.0, mu.real))
    return abs(mu - t) * abs(2 * op.s)


@dataclass(frozen=True)
class SpectralClassification:
    region: Region
    roots: CharRoots
    root_gap: float
    distance: float

    @property
    def in_spectrum(self) -> bool:
        return self.region is Region.CONTINUOUS_SPECTRUM


def classify_lambda(op: TriBandParams, lam, tol: float = DEFAULT_TOL) -> SpectralClassification:
    """Resolvent set versus continuous spectrum, by the root dichotomy.

    ``alpha1 * alpha2 = 1`` forces ``|alpha1| <= 1``, so the point is in the
    resolvent set iff ``|alpha1| < 1 - tol`` and in the (continuous)
    spectrum otherwise. ``root_gap = 1 - |alpha1|`` and the Euclidean
    ``distance`` to the segment are returned for callers that want a
    stricter cut.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    roots = char_roots(op, lam)
    gap = 1.0 - roots.modulus
    region = Region.RESOLVENT_SET if gap > tol else Region.CONTINUOUS_SPECTRUM
    return SpectralClassification(region, roots, gap, distance_to_segment(op, lam))


def segment_membership(op: TriBandParams, lam, tol: float = DEFAULT_TOL) -> bool:
    """Geometric test: ``mu = (lam - r)/(2s)`` real and in ``[-1, 1]`` up to ``tol``."""
    op.require_nondegenerate()
    mu = (complex(lam) - op.r) / (2 * op.s)
    return abs(mu.imag) <= tol and abs(mu.real) <= 1 + tol


@dataclass(frozen=True)
class FineSpectrumReport:
    space: SpaceSpec
    spectrum: SpectrumSegment
    continuous: SpectrumSegment
    point: tuple = ()
    residual: tuple = ()
    adjoint_point: tuple = ()

    @property
    def resolvent_set(self) -> str:
        return "complement of the spectrum segment"


def fine_spectrum_report(op: TriBandParams, space: SpaceSpec) -> FineSpectrumReport:
    """Fine spectrum of U(s, r, s) on ``space``.

    Point, residual and adjoint point spectra are empty and the whole
    segment is continuous spectrum, for lp and bv_p alike.
    """
    if not isinstance(space, SpaceSpec):
        raise TypeError("space must be a SpaceSpec")
    if not (1 < space.p < math.inf):
        raise ValueError(f"exponent out of range: {space.p}")
    seg = spectrum_segment(op)
    return FineSpectrumReport(space=space, spectrum=seg, continuous=seg)
