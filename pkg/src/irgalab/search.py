"""Local search over a lattice of spectra under a fixed gauge, steered by
diagonal majorization.

Points are positive spectra with a fixed entry sum; a move transfers step
size delta from one coordinate to another (sum preserved exactly, so
majorization comparisons stay well posed and the trace of M is conserved).
A move is admissible when the induced diagonal RGA(P) * e' is strictly
majorization-comparable to the current diagonal in the configured
direction; among admissible moves the one with the greatest spectral
entropy improvement wins, with enumeration order breaking ties.  Requiring
a strict entropy gain guarantees termination on the finite lattice.

The move criterion needs only diagonal data (one matrix-vector product per
candidate); the spectral entropies are available because the simulation
constructs its own points.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .majorization import majorizes, shannon_entropy
from .spdd import Gauge

__all__ = [
    "SearchConfig",
    "SearchState",
    "SearchTrace",
    "neighbors",
    "step",
    "run",
]

_DIRECTIONS = ("max_entropy", "min_entropy")


@dataclass(frozen=True)
class SearchConfig:
    """Step size, objective direction, iteration budget, and tolerance."""

    delta: float
    direction: str = "max_entropy"
    max_iters: int = 1000
    tol: float = 1e-9

    def __post_init__(self):
        if self.delta <= 0:
            raise ValueError("step size must be positive")
        if self.direction not in _DIRECTIONS:
            raise ValueError(f"direction must be one of {_DIRECTIONS}")
        if self.max_iters < 0:
            raise ValueError("max_iters must be nonnegative")


@dataclass(frozen=True)
class SearchState:
    """One lattice point: spectrum, induced diagonal, and entropies.

    The diagonal entropy is present only when the diagonal is nonnegative
    (entropy is undefined otherwise); the spectrum is always positive so its
    entropy always exists.
    """

    spectrum: np.ndarray
    diagonal: np.ndarray
    spectral_entropy: float
    diagonal_entropy: Optional[float]

    def to_json_dict(self) -> dict:
        return {
            "spectrum": [float(v) for v in self.spectrum],
            "diagonal": [float(v) for v in self.diagonal],
            "spectral_entropy": self.spectral_entropy,
            "diagonal_entropy": self.diagonal_entropy,
        }


@dataclass(frozen=True)
class SearchTrace:
    """States visited, moves taken ((gain index, loss index) pairs), and
    why the run stopped ("local_optimum" or "iter_budget")."""

    states: tuple
    moves: tuple
    termination: str

    def to_json_dict(self) -> dict:
        return {
            "states": [s.to_json_dict() for s in self.states],
            "moves": [{"to": int(i), "from": int(j)} for i, j in self.moves],
            "termination": self.termination,
        }


def _make_state(gauge: Gauge, spectrum: np.ndarray) -> SearchState:
    rga_p = gauge.rga_matrix()
    if hasattr(rga_p, "to_float_array"):
        rga_p = rga_p.to_float_array()
    diagonal = np.asarray(rga_p, dtype=float) @ spectrum
    diag_entropy = shannon_entropy(diagonal) if diagonal.min() >= 0 else None
    return SearchState(
        spectrum=spectrum,
        diagonal=diagonal,
        spectral_entropy=shannon_entropy(spectrum),
        diagonal_entropy=diag_entropy,
    )


def neighbors(spectrum, delta: float) -> list:
    """All sum-preserving single transfers e + delta*(unit_i - unit_j).

    Ordered pairs are enumerated i ascending then j ascending; results with
    a nonpositive entry are dropped (the lattice lives in the open positive
    orthant).
    """
    spectrum = np.asarray(spectrum, dtype=float)
    if spectrum.min() <= 0:
        raise ValueError("spectrum entries must be positive")
    out = []
    n = len(spectrum)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            candidate = spectrum.copy()
            candidate[i] += delta
            candidate[j] -= delta
            if candidate[j] > 0:
                out.append((i, j, candidate))
    return out


def _admissible(current_diag, candidate_diag, direction: str, tol: float) -> bool:
    # Permutation-equal diagonals are excluded: no strict progress.
    if np.allclose(
        np.sort(current_diag), np.sort(candidate_diag), rtol=0.0, atol=max(tol, 1e-12)
    ):
        return False
    if direction == "max_entropy":
        return bool(majorizes(current_diag, candidate_diag, tol=tol))
    return bool(majorizes(candidate_diag, current_diag, tol=tol))


def step(gauge: Gauge, spectrum, config: SearchConfig) -> Optional[np.ndarray]:
    """One move: the admissible neighbor with the best entropy improvement.

    Returns None at a local optimum (no admissible neighbor improves the
    spectral entropy strictly).
    """
    gauge.require_valid()
    spectrum = np.asarray(spectrum, dtype=float)
    current = _make_state(gauge, spectrum)
    sign = 1.0 if config.direction == "max_entropy" else -1.0
    best = None
    best_gain = 0.0
    for _, _, candidate in neighbors(spectrum, config.delta):
        candidate_state = _make_state(gauge, candidate)
        if not _admissible(
            current.diagonal, candidate_state.diagonal, config.direction, config.tol
        ):
            continue
        gain = sign * (candidate_state.spectral_entropy - current.spectral_entropy)
        if gain > best_gain + 1e-15:
            best = candidate
            best_gain = gain
    return best


def run(gauge: Gauge, start_spectrum, config: SearchConfig) -> SearchTrace:
    """Iterate ``step`` until a local optimum or the iteration budget."""
    gauge.require_valid()
    spectrum = np.asarray(start_spectrum, dtype=float)
    if spectrum.min() <= 0:
        raise ValueError("start spectrum must be positive")
    states = [_make_state(gauge, spectrum)]
    moves = []
    termination = "iter_budget"
    for _ in range(config.max_iters):
        next_spectrum = step(gauge, spectrum, config)
        if next_spectrum is None:
            termination = "local_optimum"
            break
        difference = next_spectrum - spectrum
        gain_index = int(np.argmax(difference))
        loss_index = int(np.argmin(difference))
        moves.append((gain_index, loss_index))
        spectrum = next_spectrum
        states.append(_make_state(gauge, spectrum))
    return SearchTrace(states=tuple(states), moves=tuple(moves), termination=termination)
