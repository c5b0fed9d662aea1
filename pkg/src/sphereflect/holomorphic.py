"""Holomorphic completions of harmonic strip functions.

A harmonic function phi on the strip with trigonometric Cauchy data is the
real part of a function

    Phi(Z) = sum_k (c0_k + c1_k Z) e^{i w_k Z}  +  q Z^2,

with real frequencies w_k of either sign (w = 0 rows hold the affine part)
and a single optional Z^2 coefficient coming from drift data.  This family
is closed under d/dZ, under the boundary-field map Phi -> i*Phi - sigma*
Phi', and under the mode-by-mode solve of that field equation, which is why
it is the working representation for the whole reflection step.

The linear-in-Z slots exist for the resonant frequency w = sigma (where the
field map loses rank); everywhere else c1 = 0 in practice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .harmonic import DEPTH_GUARD, HarmonicStripFunction

__all__ = ["HolomorphicModel", "holomorphic_completion", "lambda_field"]

_FREQ_MERGE = 1e-12


@dataclass
class HolomorphicModel:
    """sum of (c0 + c1 Z) e^{i w Z} terms plus q Z^2, with a sampling period.

    `period` is the x-period of the source data; it fixes the sampling span
    for axis operations (Schwarz residuals, trace fits).  Individual term
    frequencies need not be commensurate with it: the homogeneous solution
    e^{i sigma Z} of the reflection ODE legitimately enters with any period,
    and carries ~zero amplitude whenever the data itself is periodic.
    """

    period: float
    terms: list = field(default_factory=list)   # rows [w, c0, c1]
    quad: complex = 0.0

    # -- construction -------------------------------------------------------

    def add_term(self, w: float, c0: complex = 0.0, c1: complex = 0.0):
        for row in self.terms:
            if abs(row[0] - w) <= _FREQ_MERGE * max(1.0, abs(w)):
                row[1] += c0
                row[2] += c1
                return
        self.terms.append([float(w), complex(c0), complex(c1)])
        self.terms.sort(key=lambda r: r[0])

    def coefficient(self, w: float):
        """(c0, c1) at frequency w (zeros if absent)."""
        for row in self.terms:
            if abs(row[0] - w) <= _FREQ_MERGE * max(1.0, abs(w)):
                return complex(row[1]), complex(row[2])
        return 0.0 + 0.0j, 0.0 + 0.0j

    def cleaned(self, tiny: float = 0.0) -> "HolomorphicModel":
        """Drop numerically empty rows (and optionally tiny ones)."""
        out = HolomorphicModel(self.period, quad=self.quad)
        for w, c0, c1 in self.terms:
            if abs(c0) > tiny or abs(c1) > tiny:
                out.terms.append([w, c0, c1])
        return out

    # -- evaluation ---------------------------------------------------------

    def _check_depth(self, Z):
        if not self.terms:
            return
        wmax = max(abs(r[0]) for r in self.terms)
        ymax = float(np.max(np.abs(np.imag(Z)))) if np.size(Z) else 0.0
        if wmax * ymax > DEPTH_GUARD:
            raise ValueError("model evaluated too deep: |w Im Z| = %.3g"
                             % (wmax * ymax))

    def value(self, Z):
        """Phi(Z) for complex Z (arrays ok)."""
        Z = np.asarray(Z, dtype=complex)
        self._check_depth(Z)
        out = np.zeros(Z.shape, dtype=complex)
        for w, c0, c1 in self.terms:
            out = out + (c0 + c1 * Z) * np.exp(1j * w * Z)
        if self.quad != 0.0:
            out = out + self.quad * Z * Z
        return out

    def real_part(self, X, Y):
        """Re Phi(X + iY) broadcast over real arrays."""
        X = np.asarray(X, dtype=float)
        Y = np.asarray(Y, dtype=float)
        return np.real(self.value(X + 1j * Y))

    def derivative(self) -> "HolomorphicModel":
        """d Phi / dZ, exactly, within the same family."""
        out = HolomorphicModel(self.period)
        for w, c0, c1 in self.terms:
            out.add_term(w, 1j * w * c0 + c1, 1j * w * c1)
        if self.quad != 0.0:
            out.add_term(0.0, 0.0, 2.0 * self.quad)
        return out

    def scaled(self, s: complex) -> "HolomorphicModel":
        out = HolomorphicModel(self.period, quad=self.quad * s)
        for w, c0, c1 in self.terms:
            out.terms.append([w, c0 * s, c1 * s])
        return out

    def __add__(self, other: "HolomorphicModel") -> "HolomorphicModel":
        if not math.isclose(self.period, other.period, rel_tol=1e-12):
            raise ValueError("period mismatch")
        out = HolomorphicModel(self.period, quad=self.quad + other.quad)
        for w, c0, c1 in self.terms + other.terms:
            out.add_term(w, c0, c1)
        return out

    # -- symmetry helpers ---------------------------------------------------

    def conjugate_defect(self) -> float:
        """Max coefficient distance from Schwarz symmetry
        Phi(conj Z) = conj Phi(Z), i.e. c_{-w} = conj(c_{+w}), real quad."""
        d = abs(np.imag(self.quad))
        seen = set()
        for w, c0, c1 in self.terms:
            if any(abs(w - s) <= _FREQ_MERGE for s in seen):
                continue
            seen.add(w)
            m0, m1 = self.coefficient(-w)
            d = max(d, abs(m0 - np.conj(c0)), abs(m1 - np.conj(c1)))
        return float(d)

    def symmetrized(self) -> "HolomorphicModel":
        """Project onto the Schwarz-symmetric subfamily."""
        out = HolomorphicModel(self.period, quad=complex(np.real(self.quad)))
        done = []
        for w, c0, c1 in self.terms:
            if any(abs(w - s) <= _FREQ_MERGE or abs(w + s) <= _FREQ_MERGE
                   for s in done):
                continue
            done.append(w)
            m0, m1 = self.coefficient(-w)
            if abs(w) <= _FREQ_MERGE:
                out.add_term(0.0, complex(np.real(c0)), complex(np.real(c1)))
                continue
            p0 = 0.5 * (c0 + np.conj(m0))
            p1 = 0.5 * (c1 + np.conj(m1))
            out.add_term(w, p0, p1)
            out.add_term(-w, np.conj(p0), np.conj(p1))
        return out


def holomorphic_completion(phi: HarmonicStripFunction,
                           y_mid: float = 0.0) -> HolomorphicModel:
    """Return Phi with Re Phi = phi on the strip, Im Phi(i*y_mid) = 0.

    The real part determines Phi up to an additive imaginary constant; the
    anchor at Z = i*y_mid fixes it.  Mode table (w = w_n > 0):

        a cosh cos -> (a/2) e^{iwZ} + (a/2) e^{-iwZ}
        b cosh sin -> (-ib/2) e^{iwZ} + (ib/2) e^{-iwZ}
        (c/w) sinh cos -> (-c/2w) e^{iwZ} + (c/2w) e^{-iwZ}
        (d/w) sinh sin -> (id/2w) e^{iwZ} + (id/2w) e^{-iwZ}
        const -> const;  e*y -> -ie Z;  e*x -> e Z
        b xy -> (-ib/2) Z^2;  q (x^2-y^2)/2 -> (q/2) Z^2
    """
    Phi = HolomorphicModel(phi.period)
    w = 2.0 * math.pi * np.arange(phi.ca.size) / phi.period
    for n in range(1, phi.ca.size):
        a, b = phi.ca[n], phi.cb[n]
        c, d = phi.sc[n], phi.sd[n]
        if a == b == c == d == 0.0:
            continue
        wn = w[n]
        plus = 0.5 * a - 0.5j * b - 0.5 * c / wn + 0.5j * d / wn
        minus = 0.5 * a + 0.5j * b + 0.5 * c / wn + 0.5j * d / wn
        if plus != 0.0:
            Phi.add_term(+wn, plus)
        if minus != 0.0:
            Phi.add_term(-wn, minus)
    aff0 = complex(phi.const)
    aff1 = complex(phi.xlin, -phi.ylin)
    if aff0 != 0.0 or aff1 != 0.0:
        Phi.add_term(0.0, aff0, aff1)
    Phi.quad = 0.5 * phi.x2y2 - 0.5j * phi.xy
    gauge = float(np.imag(Phi.value(1j * y_mid)))
    if gauge != 0.0:
        Phi.add_term(0.0, -1j * gauge, 0.0)
    return Phi


def lambda_field(Phi: HolomorphicModel, sigma: int = +1) -> HolomorphicModel:
    """The boundary field Lambda = i*Phi - sigma*Phi', term by term.

    For a surface in normalized boundary coordinates the free-boundary
    condition along the axis is exactly Im Lambda = 0 (sigma = +1 for a
    surface inside the sphere, -1 outside); Lambda is therefore the object
    whose Schwarz symmetry drives the reflection.
    """
    if sigma not in (+1, -1):
        raise ValueError("sigma must be +1 or -1")
    out = HolomorphicModel(Phi.period)
    for w, c0, c1 in Phi.terms:
        f = 1j * (1.0 - sigma * w)
        out.add_term(w, f * c0 - sigma * c1, f * c1)
    if Phi.quad != 0.0:
        out.quad = 1j * Phi.quad
        out.add_term(0.0, 0.0, -2.0 * sigma * Phi.quad)
    return out
