"""Negativity of two-path states, numerically and in closed form."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from .channels import DampingRates
from .linalg import eigvalsh_desc, partial_transpose_A
from .phases import PhaseSet
from .states import CoherencePair, DensityOperator

NOISE_FLOOR = 1e-12


@dataclass(frozen=True)
class NegativityResult:
    negativity: float
    min_eigenvalue: float
    method: Literal["numeric", "closed_form"]

    def __float__(self) -> float:
        return self.negativity


def negativity_numeric(rho: DensityOperator) -> NegativityResult:
    """Sum of |negative eigenvalues| of ``rho^{T_A}``, ignoring those above -1e-12."""
    values = eigvalsh_desc(partial_transpose_A(rho.matrix))
    neg = float(-sum(v for v in values if v < -NOISE_FLOOR))
    return NegativityResult(neg, float(values[-1]), "numeric")


def _lowest_pt_eigenvalue(a: float, b: float, delta_phi: float) -> float:
    # a, b are the surviving single-object coherences |c1| f_A and |c2| f_B
    s = math.sin(delta_phi / 2)
    return 0.25 * (1 - a * b - math.sqrt((a - b) ** 2 + 4 * a * b * s * s))


def negativity_closed_form(c: CoherencePair, p: PhaseSet) -> NegativityResult:
    lam = _lowest_pt_eigenvalue(abs(c.c1), abs(c.c2), p.entangling_phase)
    return NegativityResult(max(0.0, -lam), lam, "closed_form")


def negativity_damped_closed_form(c: CoherencePair, p: PhaseSet, d: DampingRates) -> NegativityResult:
    """Closed form with each coherence suppressed by ``exp(-gamma T)``.

    ``|c1||c2| e^{-(gA+gB)T}`` factorizes as ``(|c1| e^{-gA T})(|c2| e^{-gB T})``,
    so this is the undamped expression evaluated at damped coherences.
    """
    lam = _lowest_pt_eigenvalue(abs(c.c1) * d.factor_A, abs(c.c2) * d.factor_B, p.entangling_phase)
    return NegativityResult(max(0.0, -lam), lam, "closed_form")


def entanglement_threshold_symmetric() -> float:
    """Smallest ``c1 = c2 = c`` that can ever produce negativity: root of ``1 - c^2 = 2c``."""
    return math.sqrt(2) - 1
