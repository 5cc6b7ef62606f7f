"""Entangling-map witness synthesis and evaluation.

For an inseparable coefficient matrix ``E`` let ``w`` be the eigenvector of
the most negative eigenvalue ``nu`` of ``E^{T_A}``. The matrix
``Wm = (w w^dagger)^{T_A}`` satisfies ``tr[E Wm] = nu < 0`` while
``tr[F Wm] = w^dagger F^{T_A} w >= 0`` for every separable ``F``. The
observable is recovered entrywise from the initial state:

    <a'b'; out| W |ab; out> = Wm[(a'b'), (ab)] / <ab; in| rho_in |a'b'; in>

so that ``Tr[W Phi(rho_in)] = tr[E Wm]`` for any population-preserving
channel ``Phi``.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .channels import CoefficientMatrix, DampingRates, gravity_channel, is_separable_channel
from .errors import NotEntangling, ZeroCoherence
from .linalg import as_matrix, partial_transpose_A
from .phases import PhaseSet
from .states import CoherencePair, DensityOperator, initial_state

Mode = Literal["trace", "literal"]

# phases (LL, LR, RL, RR) = (0, pi/2, pi/2, 0): entangling phase pi, and the
# negative eigenvector coincides with the zero-phase vector (-1, i, -i, 1)/2
REFERENCE_PHASES = PhaseSet(0.0, math.pi / 2, math.pi / 2, 0.0, "dimensionless")

ZERO_ATOL = 1e-15


@dataclass(frozen=True, eq=False)
class WitnessEigenData:
    nu: float
    w: np.ndarray

    def __post_init__(self):
        w = np.array(self.w, dtype=complex).reshape(4)
        w.flags.writeable = False
        object.__setattr__(self, "w", w)
        if not self.nu < 0:
            raise NotEntangling(f"witness eigenvalue must be negative, got {self.nu!r}")
        if abs(np.linalg.norm(w) - 1) > 1e-12:
            raise ValueError(f"eigenvector must be unit norm, got {np.linalg.norm(w)!r}")


@dataclass(frozen=True, eq=False)
class WitnessOperator:
    matrix: np.ndarray
    source: WitnessEigenData
    coherence: CoherencePair | None = None


def _fix_phase(w: np.ndarray) -> np.ndarray:
    """Rotate the global phase so ``w_RR`` (or the largest entry if it vanishes) is real positive."""
    k = 3 if abs(w[3]) > 1e-8 else int(np.argmax(np.abs(w)))
    return w * (abs(w[k]) / w[k])


def witness_eigendata(e: CoefficientMatrix) -> WitnessEigenData:
    report = is_separable_channel(e)
    if report.separable:
        raise NotEntangling(
            f"partial transpose is PSD to tolerance (min eigenvalue {report.min_eigenvalue:.3e})"
        )
    w = report.eigenvector / np.linalg.norm(report.eigenvector)
    return WitnessEigenData(report.min_eigenvalue, _fix_phase(w))


def gravity_nu(p: PhaseSet) -> float:
    """Negative eigenvalue of ``E_G^{T_A}`` for entangling phase in ``[0, 2 pi]``."""
    return -2.0 * math.sin(p.entangling_phase / 2)


def gravity_eigenvector(p: PhaseSet) -> np.ndarray:
    """Closed-form eigenvector of ``E_G^{T_A}`` for the negative eigenvalue (unit norm)."""
    ll, lr, rl, rr = p.as_array()
    return 0.5 * np.array(
        [
            -np.exp(-0.5j * (lr - rl)),
            1j * np.exp(-0.5j * (ll - rr)),
            -1j * np.exp(0.5j * (ll - rr)),
            np.exp(0.5j * (lr - rl)),
        ]
    )


@functools.lru_cache(maxsize=1)
def reference_eigendata() -> WitnessEigenData:
    """Eigen-data whose eigenvector is the zero-phase form ``(-1, i, -i, 1)/2``."""
    return witness_eigendata(gravity_channel(REFERENCE_PHASES))


def witness_matrix_w(ed: WitnessEigenData | np.ndarray) -> np.ndarray:
    """``(w w^dagger)^{T_A}``."""
    w = ed.w if isinstance(ed, WitnessEigenData) else np.asarray(ed, dtype=complex)
    return partial_transpose_A(np.outer(w, w.conj()))


def witness_operator(
    ed: WitnessEigenData,
    rho_in: DensityOperator,
    coherence: CoherencePair | None = None,
) -> WitnessOperator:
    """Divide the witness matrix entrywise by the transposed initial state.

    Positions where both numerator and denominator vanish are set to zero.
    A vanishing denominator under a nonzero numerator raises
    :class:`ZeroCoherence`: the initial state lacks the coherence the
    witness needs to see.
    """
    wm = witness_matrix_w(ed)
    denom = as_matrix(rho_in.matrix).T
    zero = np.abs(denom) <= ZERO_ATOL
    if np.any(zero & (np.abs(wm) > ZERO_ATOL)):
        raise ZeroCoherence("initial state has a vanishing coherence where the witness is nonzero")
    out = np.zeros((4, 4), dtype=complex)
    np.divide(wm, denom, out=out, where=~zero)
    out = 0.5 * (out + out.conj().T)
    return WitnessOperator(out, ed, coherence)


def canonical_witness(c: CoherencePair) -> WitnessOperator:
    """Zero-phase witness ``1 - Y(x)Z / c1 - Z(x)Y / c2 - X(x)X / (c1 c2)``."""
    if c.c1 == 0 or c.c2 == 0:
        raise ZeroCoherence(f"witness undefined for zero coherence, got {c}")
    return witness_operator(reference_eigendata(), initial_state(c), c)


def witness_expectation_trace(w: WitnessOperator | np.ndarray, rho_out: DensityOperator) -> float:
    """``Re Tr[W rho_out]``. Both operators are Hermitian, so the imaginary part is noise."""
    m = w.matrix if isinstance(w, WitnessOperator) else as_matrix(w)
    value = complex(np.sum(m * rho_out.matrix.T))
    scale = max(1.0, float(np.max(np.abs(m))))
    if abs(value.imag) > 1e-10 * scale:
        raise ValueError(f"witness expectation has imaginary part {value.imag:.3e}")
    return value.real


def witness_expectation_closed_form(
    c: CoherencePair,
    p: PhaseSet,
    d: DampingRates | None = None,
    mode: Mode = "trace",
) -> float:
    """Expectation of the canonical witness on the (damped) gravity output.

    ``mode="trace"`` is the expansion of ``tr[E Wm]`` for the zero-phase
    witness matrix; it agrees with :func:`witness_expectation_trace` and
    does not depend on ``c``. ``mode="literal"`` is a variant whose first
    two sine terms carry the opposite sign. That cancels the linear small-T
    term, so it is kept for comparison only.
    """
    if c.c1 == 0 or c.c2 == 0:
        raise ZeroCoherence(f"witness undefined for zero coherence, got {c}")
    ll, lr, rl, rr = p.as_array()
    fa, fb = (1.0, 1.0) if d is None else (d.factor_A, d.factor_B)
    sin, cos = math.sin, math.cos
    cosines = cos(ll - rr) + cos(lr - rl)
    if mode == "trace":
        return (
            1.0
            + 0.5 * (fb * sin(ll - lr) + fa * sin(ll - rl) + fa * sin(rr - lr) + fb * sin(rr - rl))
            - 0.5 * fa * fb * cosines
        )
    if mode == "literal":
        if d is None:
            return 1.0 - 0.5 * (sin(ll - lr) + sin(ll - rl) - sin(rr - rl) - sin(rr - lr)) - 0.5 * cosines
        return (
            1.0
            - 0.5 * (fb * sin(ll - lr) + fa * sin(ll - rl) - fb * sin(rr - rl))
            - 0.5 * fa * sin(rr - lr)
            - 0.5 * fa * fb * cosines
        )
    raise ValueError(f"unknown mode {mode!r}")


def small_time_expectation(theta: float, r: float) -> float:
    """Leading-order expectation ``-2 r^2 / (1 - r^2) * theta`` as ``theta -> 0``."""
    return -2 * r * r / (1 - r * r) * theta
