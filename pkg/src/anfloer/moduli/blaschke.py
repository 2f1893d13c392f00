"""Finite Blaschke products on the unit disc."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ValidationError


@dataclass(frozen=True)
class BlaschkeProduct:
    """h(w) = lam * prod (w - a) / (conj(a) w - 1)."""

    lam: complex
    alphas: tuple

    def __post_init__(self):
        if abs(abs(self.lam) - 1) > 1e-12:
            raise ValidationError("Blaschke constant must have unit modulus", stage="blaschke")
        if any(abs(a) >= 1 for a in self.alphas):
            raise ValidationError("Blaschke zeros must lie inside the unit disc", stage="blaschke")

    @property
    def degree(self) -> int:
        return len(self.alphas)

    def __call__(self, w):
        w = np.asarray(w, dtype=complex)
        out = np.full(w.shape, self.lam, dtype=complex)
        for a in self.alphas:
            out = out * (w - a) / (np.conj(a) * w - 1)
        return out

    def __mul__(self, other: "BlaschkeProduct") -> "BlaschkeProduct":
        lam = self.lam * other.lam
        return BlaschkeProduct(lam / abs(lam), tuple(self.alphas) + tuple(other.alphas))

    def preimages(self, value: complex) -> np.ndarray:
        """All w with h(w) = value, via the numerator polynomial."""
        num = np.poly1d([1.0 + 0j])
        den = np.poly1d([1.0 + 0j])
        for a in self.alphas:
            num = num * np.poly1d([1.0, -a])
            den = den * np.poly1d([np.conj(a), -1.0])
        return np.roots((self.lam * num - value * den).coeffs)


def blaschke_make(alphas, anchor: complex = 1.0) -> BlaschkeProduct:
    """Blaschke product with zeros ``alphas``, rotated so that h(anchor) = 1."""
    alphas = tuple(complex(a) for a in alphas)
    if any(abs(a) >= 1 for a in alphas):
        raise ValidationError("Blaschke zeros must satisfy |alpha| < 1", stage="blaschke")
    anchor = complex(anchor)
    if abs(abs(anchor) - 1) > 1e-12:
        raise ValidationError("anchor must lie on the unit circle", stage="blaschke")
    raw = complex(BlaschkeProduct(1.0, alphas)(anchor))
    lam = 1.0 / raw
    return BlaschkeProduct(lam / abs(lam), alphas)


def disc_automorphism(a: complex, phase: float = 0.0):
    """w -> e^{i phase} (w - a) / (1 - conj(a) w) for |a| < 1."""
    a = complex(a)
    if abs(a) >= 1:
        raise ValidationError("automorphism center must lie inside the disc", stage="blaschke")
    e = np.exp(1j * phase)

    def aut(w):
        w = np.asarray(w, dtype=complex)
        return e * (w - a) / (1 - np.conj(a) * w)

    return aut
