"""Path-basis density operators for the two objects.

Basis order is fixed as (LL, LR, RL, RR) with object A as the slow index,
i.e. ``index = 2 * a + b`` with ``L = 0`` and ``R = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .errors import CoherenceOutOfRange, DimensionMismatch, InvalidState
from .linalg import as_matrix, eigvalsh_desc, hermiticity_error, kron

STATE_ATOL = 1e-12
PSD_ATOL = 1e-10

Basis = Literal["in", "out"]


@dataclass(frozen=True)
class CoherencePair:
    """Real interference parameters of the two single-object states."""

    c1: float
    c2: float

    def __post_init__(self):
        for name in ("c1", "c2"):
            value = getattr(self, name)
            if isinstance(value, complex) or not isinstance(value, (int, float, np.floating, np.integer)):
                raise CoherenceOutOfRange(f"{name} must be a real number, got {value!r}")
            if not (math.isfinite(value) and abs(value) <= 1.0):
                raise CoherenceOutOfRange(f"{name} must lie in [-1, 1], got {value!r}")

    @classmethod
    def symmetric(cls, c: float) -> "CoherencePair":
        return cls(c, c)


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """A 4x4 density matrix tagged with the basis it is written in.

    Construction checks Hermiticity and unit trace to 1e-12 and positivity
    to -1e-10; pass ``check=False`` only for matrices already known valid.
    """

    matrix: np.ndarray
    basis: Basis = "in"
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        m = as_matrix(self.matrix)
        if m.shape != (4, 4):
            raise DimensionMismatch(f"density operator must be 4x4, got {m.shape}")
        object.__setattr__(self, "matrix", m)
        if self.check:
            problems = density_problems(m)
            if problems:
                raise InvalidState("; ".join(problems))

    @property
    def min_eigenvalue(self) -> float:
        return float(eigvalsh_desc(self.matrix)[-1])


def density_problems(m, atol: float = STATE_ATOL, psd_atol: float = PSD_ATOL) -> list[str]:
    """Human-readable list of violated density-operator invariants (empty if valid)."""
    m = as_matrix(m)
    herm = hermiticity_error(m)
    if herm > atol:
        return [f"not Hermitian (deviation {herm:.3e})"]
    problems = []
    tr = complex(np.trace(m))
    if abs(tr - 1) > atol:
        problems.append(f"trace {tr:.15g} != 1")
    lam_min = float(eigvalsh_desc(m)[-1])
    if lam_min < -psd_atol:
        problems.append(f"not positive semidefinite (min eigenvalue {lam_min:.3e})")
    return problems


def single_object_state(c: float) -> np.ndarray:
    return 0.5 * np.array([[1.0, c], [c, 1.0]], dtype=complex)


def initial_state(c: CoherencePair) -> DensityOperator:
    """Product state ``rho_A (x) rho_B`` with ``rho_X = [[1, c], [c, 1]] / 2``."""
    return DensityOperator(kron(single_object_state(c.c1), single_object_state(c.c2)), "in")


def l1_coherence(rho) -> float:
    """Sum of moduli of all off-diagonal entries in the path basis."""
    m = as_matrix(rho.matrix if isinstance(rho, DensityOperator) else rho)
    off = np.abs(m)
    return float(off.sum() - np.trace(off))


def reduced_state(rho, subsystem: Literal["A", "B"]) -> np.ndarray:
    """Partial trace of a 2x2 bipartite operator, keeping ``subsystem``."""
    m = as_matrix(rho.matrix if isinstance(rho, DensityOperator) else rho)
    if m.shape != (4, 4):
        raise DimensionMismatch(f"expected 4x4 operator, got {m.shape}")
    t = m.reshape(2, 2, 2, 2)
    if subsystem == "A":
        return np.einsum("ibjb->ij", t)
    if subsystem == "B":
        return np.einsum("aiaj->ij", t)
    raise ValueError(f"subsystem must be 'A' or 'B', got {subsystem!r}")


def pure_state(amplitudes) -> np.ndarray:
    psi = np.asarray(amplitudes, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def bell_state() -> DensityOperator:
    """``|Phi+> = (|LL> + |RR>)/sqrt(2)``."""
    return DensityOperator(pure_state([1, 0, 0, 1]), "in")
