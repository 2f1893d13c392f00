"""Maslov index of a strip from the winding of its boundary Lagrangian planes."""

from __future__ import annotations

import numpy as np

from ..errors import NumericalError
from ..lagrangian import Pole, kahler_angles
from ..variety import hamiltonian_vector_h1, volume_form
from .strips import StripMap

NON_INTEGRAL_LIMIT = 0.1


def _plane_phase(params, p, v1, v2) -> float:
    """arg of Det^2 for the plane spanned by v1, v2 at p."""
    w = volume_form(params, p, v1, v2)
    if abs(w) == 0:
        raise NumericalError("degenerate boundary plane", stage="maslov")
    return float(np.angle(w * w))


def _arc_turns(strip: StripMap, phi0: float, phi1: float, samples: int, gap: float,
               start_phase: float, end_phase: float) -> float:
    """Winding of Det^2 along the boundary arc (phi0, phi1), in turns.

    The arc is sampled densely toward both ends and pinned to the exact branch
    planes at the punctures.
    """
    params = strip.model.params
    u = np.linspace(0.0, 1.0, samples)
    # cluster points toward the punctures
    s = 0.5 - 0.5 * np.cos(np.pi * u)
    phis = phi0 + gap + (phi1 - phi0 - 2 * gap) * s
    dphi = 1e-7
    pts = strip.evaluate_disc(np.exp(1j * phis))
    fwd = strip.evaluate_disc(np.exp(1j * (phis + dphi)))
    bwd = strip.evaluate_disc(np.exp(1j * (phis - dphi)))
    tangents = (fwd - bwd) / (2 * dphi)
    phases = [start_phase]
    for p, v in zip(pts, tangents):
        phases.append(_plane_phase(params, p, v, hamiltonian_vector_h1(p)))
    phases.append(end_phase)
    unwrapped = np.unwrap(np.array(phases))
    steps = np.abs(np.diff(unwrapped))
    if steps.max() > np.pi / 2:
        raise NumericalError("boundary phase under-resolved", stage="maslov")
    return float(unwrapped[-1] - unwrapped[0]) / (2 * np.pi)


def maslov_winding(strip: StripMap, samples: int = 2000, gap: float = 1e-4, raw: bool = False):
    """Maslov index of the strip viewed as a disc with its branch jumps closed up.

    Along each boundary arc the grading advances with the winding of Det^2.
    At a jump the plane before the puncture (counterclockwise) is the P-branch
    plane and the one after is the Q-branch plane; an outgoing jump is closed by
    the positive definite path (+2(alpha + beta) turns) and an incoming one by the
    negative definite path (2(alpha + beta) - 2 turns).
    """
    loop = strip.component.loop
    sphere = loop.sphere
    params = loop.params
    crit = sphere.self_intersection().as_array()
    frame_p = sphere.pole_frame(Pole.P)
    frame_q = sphere.pole_frame(Pole.Q)
    phase_p = _plane_phase(params, crit, frame_p[:, 0], frame_p[:, 1])
    phase_q = _plane_phase(params, crit, frame_q[:, 0], frame_q[:, 1])
    angle_sum = float(kahler_angles(frame_p, frame_q).sum())

    marks = sorted(strip.punctures(), key=lambda m: np.mod(np.angle(m[0]), 2 * np.pi))
    positions = [float(np.mod(np.angle(m[0]), 2 * np.pi)) for m in marks]
    total = 0.0
    for i, (_, kind, _) in enumerate(marks):
        lo = positions[i]
        hi = positions[i + 1] if i + 1 < len(marks) else positions[0] + 2 * np.pi
        total += _arc_turns(strip, lo, hi, samples, gap, phase_q, phase_p)
        total += 2 * angle_sum if kind == "out" else 2 * angle_sum - 2
    rounded = int(round(total))
    if abs(total - rounded) > NON_INTEGRAL_LIMIT:
        raise NumericalError(f"non-integral Maslov winding {total:.4f}", stage="maslov")
    return (rounded, total) if raw else rounded
