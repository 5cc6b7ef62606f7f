"""Population-preserving channels on the two-object path space.

Every population-preserving CPTP map on the 2x2 path space is fixed by a
4x4 positive semidefinite coefficient matrix ``E`` with unit diagonal.
The transfer operators ``|a; out><a; in|`` only relabel basis vectors, so
applying the channel is a Hadamard (entrywise) product:

    rho_out[(ab), (a'b')] = E[(ab), (a'b')] * rho_in[(ab), (a'b')]
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from .errors import DimensionMismatch, InvalidChannel, InvalidState
from .linalg import as_matrix, eigvalsh_desc, hermiticity_error, hermitian_eigen, partial_transpose_A
from .phases import PhaseSet
from .states import DensityOperator

CHANNEL_ATOL = 1e-12
CHANNEL_PSD_ATOL = 1e-10
ENTANGLING_THRESHOLD = -1e-10

Kind = Literal["gravity", "damped_gravity", "separable_sample", "custom"]


@dataclass(frozen=True)
class ChannelReport:
    hermiticity_error: float
    min_eigenvalue: float
    max_diagonal_error: float

    @property
    def valid(self) -> bool:
        return (
            self.hermiticity_error <= CHANNEL_ATOL
            and self.min_eigenvalue >= -CHANNEL_PSD_ATOL
            and self.max_diagonal_error <= CHANNEL_ATOL
        )

    def __bool__(self) -> bool:
        return self.valid


def validate_channel(e) -> ChannelReport:
    """Check the coefficient-matrix conditions: Hermitian, PSD, unit diagonal.

    Never raises on bad content; a non-Hermitian input reports ``-inf`` as
    its minimum eigenvalue since the spectrum is not real.
    """
    m = as_matrix(e)
    if m.shape != (4, 4):
        raise DimensionMismatch(f"coefficient matrix must be 4x4, got {m.shape}")
    herm = hermiticity_error(m)
    lam_min = float(eigvalsh_desc(m)[-1]) if herm <= CHANNEL_PSD_ATOL else -math.inf
    diag = float(np.max(np.abs(np.diag(m) - 1.0)))
    return ChannelReport(herm, lam_min, diag)


@dataclass(frozen=True, eq=False)
class CoefficientMatrix:
    matrix: np.ndarray
    kind: Kind = "custom"
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        m = as_matrix(self.matrix)
        object.__setattr__(self, "matrix", m)
        if self.check:
            report = validate_channel(m)
            if not report.valid:
                raise InvalidChannel(f"invalid coefficient matrix: {report}")


@dataclass(frozen=True)
class DampingRates:
    """Dephasing rates for the two objects, acting during the hold time ``T``.

    Only the products ``gamma * T`` enter; any consistent unit system works.
    """

    gamma_A: float
    gamma_B: float
    T: float

    def __post_init__(self):
        for name in ("gamma_A", "gamma_B", "T"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise ValueError(f"{name} must be finite and >= 0, got {value!r}")

    @property
    def factor_A(self) -> float:
        return math.exp(-self.gamma_A * self.T)

    @property
    def factor_B(self) -> float:
        return math.exp(-self.gamma_B * self.T)

    @classmethod
    def from_exponents(cls, gamma_A_T: float, gamma_B_T: float) -> "DampingRates":
        return cls(gamma_A_T, gamma_B_T, 1.0)


def gravity_channel(p: PhaseSet) -> CoefficientMatrix:
    """``E_G = v v^dagger`` with ``v_ab = exp(i phi_ab)``."""
    v = np.exp(1j * p.as_array())
    m = np.outer(v, v.conj())
    np.fill_diagonal(m, 1.0)
    return CoefficientMatrix(m, "gravity", check=False)


def damping_mask(d: DampingRates) -> np.ndarray:
    """``Gamma = [[1, f_A], [f_A, 1]] (x) [[1, f_B], [f_B, 1]]`` with ``f_X = exp(-gamma_X T)``."""
    fa, fb = d.factor_A, d.factor_B
    return np.kron(np.array([[1.0, fa], [fa, 1.0]]), np.array([[1.0, fb], [fb, 1.0]]))


def damped_gravity_channel(p: PhaseSet, d: DampingRates) -> CoefficientMatrix:
    return CoefficientMatrix(gravity_channel(p).matrix * damping_mask(d), "damped_gravity", check=False)


def apply_channel(e: CoefficientMatrix, rho_in: DensityOperator, check: bool = True) -> DensityOperator:
    """Evolve an ``in``-basis state; the result is tagged ``out``.

    With ``check=True`` the output state's invariants are asserted, and the
    coefficient matrix is validated unless that already happened when it
    was constructed.
    """
    if rho_in.basis != "in":
        raise InvalidState("channel input must be tagged with the 'in' basis")
    if check and not e.check:
        report = validate_channel(e.matrix)
        if not report.valid:
            raise InvalidChannel(f"invalid coefficient matrix: {report}")
    return DensityOperator(e.matrix * rho_in.matrix, "out", check=check)


@dataclass(frozen=True, eq=False)
class SeparabilityReport:
    separable: bool
    min_eigenvalue: float
    eigenvector: np.ndarray

    @property
    def entangling(self) -> bool:
        return not self.separable


def is_separable_channel(e: CoefficientMatrix) -> SeparabilityReport:
    """PPT test on the coefficient matrix; decisive for the 2x2 path space."""
    m = e.matrix if isinstance(e, CoefficientMatrix) else as_matrix(e)
    values, vectors = hermitian_eigen(partial_transpose_A(m))
    lam = float(values[-1])
    return SeparabilityReport(lam >= ENTANGLING_THRESHOLD, lam, vectors[:, -1].copy())


def sample_separable_channel(
    seed: int | Sequence[int], mixtures: int = 3, check: bool = True
) -> CoefficientMatrix:
    """Random convex mixture of local-phase product channels.

    Term ``k`` is ``(u_k u_k^dagger) (x) (v_k v_k^dagger)`` with
    ``u_k = (e^{i phi_L}, e^{i phi_R})`` and ``v_k`` likewise, phases uniform
    on ``[0, 2 pi)`` and weights uniform then normalized. Uses numpy's
    PCG64 generator, so output is a pure function of ``(seed, mixtures)``.
    ``seed`` may also be a sequence of ints, e.g. ``(base_seed, index)``.
    """
    if mixtures < 1:
        raise ValueError(f"mixtures must be >= 1, got {mixtures}")
    rng = np.random.Generator(np.random.PCG64(seed))
    angles = rng.uniform(0.0, 2 * math.pi, size=(mixtures, 4))
    weights = rng.uniform(0.0, 1.0, size=mixtures)
    weights = weights / weights.sum()
    m = np.zeros((4, 4), dtype=complex)
    for w, (pl, pr, ql, qr) in zip(weights, angles):
        u = np.exp(1j * np.array([pl, pr]))
        v = np.exp(1j * np.array([ql, qr]))
        m += w * np.kron(np.outer(u, u.conj()), np.outer(v, v.conj()))
    np.fill_diagonal(m, 1.0)
    return CoefficientMatrix(m, "separable_sample", check=check)
