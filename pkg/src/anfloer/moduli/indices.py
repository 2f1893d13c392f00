"""Maslov and Fredholm index bookkeeping for marked discs and strips."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ValidationError
from ..lagrangian import PQ, QP, BranchPair

STANDARD_INDICES = {PQ: -1, QP: 3}
DIM = 2


def _ind(pair: BranchPair | None, indices: dict) -> int:
    if pair is None:
        return 0
    return indices[pair]


@dataclass(frozen=True)
class DiscData:
    """Branch jumps of a disc with k + 1 boundary marked points."""

    incoming: tuple = ()
    outgoing: tuple = ()
    k: int = 0

    def __post_init__(self):
        if self.k + 1 < len(self.incoming) + len(self.outgoing):
            raise ValidationError("more branch jumps than marked points", stage="index")


@dataclass(frozen=True)
class BranchData:
    """Branch jumps of a strip: ends, boundary jumps as ('in' | 'out', pair), marked counts."""

    minus_end: BranchPair | None = None
    plus_end: BranchPair | None = None
    bottom: tuple = ()
    top: tuple = ()
    k0: int = 0
    k1: int = 0

    def __post_init__(self):
        if self.k0 < len(self.bottom) or self.k1 < len(self.top):
            raise ValidationError("more boundary jumps than marked points", stage="index")
        for sign, _ in tuple(self.bottom) + tuple(self.top):
            if sign not in ("in", "out"):
                raise ValidationError(f"boundary jump sign must be 'in' or 'out', got {sign!r}",
                                      stage="index")

    def boundary(self, sign: str) -> list:
        return [pair for s, pair in tuple(self.bottom) + tuple(self.top) if s == sign]


def maslov_combinatorial(data, indices: dict | None = None) -> int:
    indices = STANDARD_INDICES if indices is None else indices
    if isinstance(data, DiscData):
        return (sum(_ind(p, indices) for p in data.incoming)
                - sum(_ind(p, indices) for p in data.outgoing)
                + DIM * (1 - len(data.incoming)))
    delta = 1 if data.minus_end is not None else 0
    inc = data.boundary("in")
    out = data.boundary("out")
    return (_ind(data.minus_end, indices) - _ind(data.plus_end, indices)
            + sum(_ind(p, indices) for p in inc) - sum(_ind(p, indices) for p in out)
            + DIM * (1 - delta - len(inc)))


def maslov_from_closing_paths(data, indices: dict | None = None) -> int:
    """Maslov index of the bundle pair closed up by definite paths at each jump.

    Telescoping the grading along the boundary, an incoming jump of type x adds
    ind(x) - n and an outgoing one adds n - ind(x). This differs from
    ``maslov_combinatorial`` by n (#outgoing jumps - 1).
    """
    indices = STANDARD_INDICES if indices is None else indices
    if isinstance(data, DiscData):
        inc, out = list(data.incoming), list(data.outgoing)
    else:
        inc = data.boundary("in") + ([data.minus_end] if data.minus_end is not None else [])
        out = data.boundary("out") + ([data.plus_end] if data.plus_end is not None else [])
    return sum(_ind(p, indices) - DIM for p in inc) + sum(DIM - _ind(p, indices) for p in out)


def fredholm_index(data, indices: dict | None = None) -> int:
    """Index of the linearized operator with moving marked points.

    Discs: mu + k for k + 1 marked points; strips: mu + k0 + k1, with mu the
    combinatorial Maslov index.
    """
    mu = maslov_combinatorial(data, indices)
    if isinstance(data, DiscData):
        return mu + data.k
    return mu + data.k0 + data.k1


def glue(a: DiscData, b: DiscData, pair: BranchPair) -> DiscData:
    """Glue an outgoing jump of ``a`` to an incoming jump of ``b`` of the same type."""
    out_a = list(a.outgoing)
    in_b = list(b.incoming)
    if pair not in out_a or pair not in in_b:
        raise ValidationError("gluing needs matching outgoing and incoming jumps", stage="index")
    out_a.remove(pair)
    in_b.remove(pair)
    return DiscData(tuple(a.incoming) + tuple(in_b), tuple(out_a) + tuple(b.outgoing), a.k + b.k)
