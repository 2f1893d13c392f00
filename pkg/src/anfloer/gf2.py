"""Graded cochain complexes over GF(2)."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import NumericalError


def gf2_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (np.asarray(a, dtype=np.int64) @ np.asarray(b, dtype=np.int64)) % 2


@dataclass
class GradedGF2Complex:
    """Generators by degree and differentials d_k: C^k -> C^{k+1}.

    ``differentials[k]`` has shape (len(C^{k+1}), len(C^k)); missing entries are zero.
    """

    generators: dict
    differentials: dict = field(default_factory=dict)

    def degrees(self) -> list[int]:
        return sorted(self.generators)

    def rank_at(self, k: int) -> int:
        return len(self.generators.get(k, []))

    def d(self, k: int) -> np.ndarray:
        rows, cols = self.rank_at(k + 1), self.rank_at(k)
        mat = self.differentials.get(k)
        if mat is None:
            return np.zeros((rows, cols), dtype=np.uint8)
        mat = np.asarray(mat, dtype=np.uint8) % 2
        if mat.shape != (rows, cols):
            raise ValueError(f"differential in degree {k} has shape {mat.shape}, expected {(rows, cols)}")
        return mat

    def square_is_zero(self) -> bool:
        for k in self.degrees():
            if self.rank_at(k + 1) and self.rank_at(k + 2) and self.rank_at(k):
                if np.any(gf2_matmul(self.d(k + 1), self.d(k))):
                    return False
        return True

    def euler_characteristic(self) -> int:
        return sum((-1) ** (k % 2) * self.rank_at(k) for k in self.degrees())


def cohomology(cx: GradedGF2Complex) -> dict[int, int]:
    """dim H^k = dim ker d_k - rank d_{k-1}, by GF(2) elimination."""
    if not cx.square_is_zero():
        raise NumericalError("differential does not square to zero", stage="cohomology")
    out = {}
    for k in cx.degrees():
        n = cx.rank_at(k)
        rank_out = kernels.gf2_rank(cx.d(k)) if cx.rank_at(k + 1) and n else 0
        rank_in = kernels.gf2_rank(cx.d(k - 1)) if cx.rank_at(k - 1) and n else 0
        out[k] = n - rank_out - rank_in
    return out
