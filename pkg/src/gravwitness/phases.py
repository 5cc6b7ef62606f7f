"""Gravitational phase shifts for the two-interferometer configuration.

Objects A and B are split along x, held apart for a time ``T`` and
recombined; each split and refocus takes ``tau``. Path ``a`` of A and path
``b`` of B are separated along x by ``D + (eps_b - eps_a) * x(t)`` where
``x(t)`` ramps from 0 to ``L/2`` and back and ``eps_L = -1``, ``eps_R = +1``.

Three routes to the phases ``phi_ab`` are offered:

* :func:`phases_exact` -- closed form including the split/refocus ramps,
* :func:`phases_large_T` -- hold-segment contribution only (``T >> tau``),
* :func:`phases_quadrature` -- composite Simpson integration of the
  Newtonian potential along the trajectories; an independent oracle.

Most of the package works in the dimensionless variables
``theta = G m_A m_B T / (hbar D)`` and ``r = L / D``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import DegenerateGeometry, InvalidGeometry, RatioOutOfRange

G_NEWTON = 6.67430e-11
HBAR = 1.054571817e-34

EPSILON = {"L": -1, "R": +1}
PATH_LABELS = ("LL", "LR", "RL", "RR")

Method = Literal["closed_form_exact", "large_T", "quadrature", "dimensionless"]


@dataclass(frozen=True)
class Geometry:
    """Trajectory geometry. SI units unless you pass a consistent unit system.

    ``T`` and ``tau`` may be zero (limits are well defined); every other
    length and mass must be strictly positive. When both ``v_x`` and ``tau``
    are given, ``L = 2 v_x tau`` is enforced.
    """

    D: float
    L: float
    T: float
    tau: float
    m_A: float
    m_B: float
    G: float = G_NEWTON
    hbar: float = HBAR
    v_x: float | None = None
    v_y: float = 0.0

    def __post_init__(self):
        for name in ("D", "L", "m_A", "m_B", "G", "hbar"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise InvalidGeometry(f"{name} must be finite and > 0, got {value!r}")
        for name in ("T", "tau"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise InvalidGeometry(f"{name} must be finite and >= 0, got {value!r}")
        if self.D <= self.L:
            raise DegenerateGeometry(f"need D > L, got D={self.D!r}, L={self.L!r}")
        if self.v_x is not None:
            if self.v_x <= 0:
                raise InvalidGeometry(f"v_x must be > 0, got {self.v_x!r}")
            if self.tau > 0 and not math.isclose(self.L, 2 * self.v_x * self.tau, rel_tol=1e-9):
                raise InvalidGeometry(
                    f"L={self.L!r} inconsistent with 2*v_x*tau={2 * self.v_x * self.tau!r}"
                )

    @property
    def coupling(self) -> float:
        """``G m_A m_B / hbar`` (units of length / time)."""
        return self.G * self.m_A * self.m_B / self.hbar

    @property
    def ramp_speed(self) -> float:
        return self.v_x if self.v_x is not None else self.L / (2 * self.tau)


@dataclass(frozen=True)
class PhaseSet:
    phi_LL: float
    phi_LR: float
    phi_RL: float
    phi_RR: float
    method: Method = "large_T"

    def as_array(self) -> np.ndarray:
        """Phases ordered (LL, LR, RL, RR), matching the path basis."""
        return np.array([self.phi_LL, self.phi_LR, self.phi_RL, self.phi_RR], dtype=float)

    def __getitem__(self, label: str) -> float:
        return getattr(self, f"phi_{label}")

    @property
    def entangling_phase(self) -> float:
        """``phi_RL + phi_LR - phi_LL - phi_RR``; the only combination that entangles."""
        return self.phi_RL + self.phi_LR - self.phi_LL - self.phi_RR

    @classmethod
    def from_sequence(cls, values, method: Method = "large_T") -> "PhaseSet":
        ll, lr, rl, rr = (float(x) for x in values)
        return cls(ll, lr, rl, rr, method)


@dataclass(frozen=True)
class DimensionlessPoint:
    theta: float
    r: float

    def __post_init__(self):
        if not (math.isfinite(self.theta) and self.theta >= 0):
            raise InvalidGeometry(f"theta must be finite and >= 0, got {self.theta!r}")
        if not (0 < self.r < 1):
            raise RatioOutOfRange(f"r = L/D must lie in (0, 1), got {self.r!r}")


def _label_offset(label: str) -> int:
    """``eps_b - eps_a`` for the path label ``ab``; one of -2, 0, 2."""
    return EPSILON[label[1]] - EPSILON[label[0]]


def phases_exact(g: Geometry) -> PhaseSet:
    values = []
    for label in PATH_LABELS:
        k = _label_offset(label)
        if k == 0:
            ramp = 2 * g.tau / g.D
        else:
            ramp = 4 * g.tau / (k * g.L) * math.log1p(k * g.L / (2 * g.D))
        hold = g.T / (g.D + k * g.L / 2)
        values.append(g.coupling * (ramp + hold))
    return PhaseSet.from_sequence(values, "closed_form_exact")


def phases_large_T(g: Geometry) -> PhaseSet:
    values = [g.coupling * g.T / (g.D + _label_offset(lab) * g.L / 2) for lab in PATH_LABELS]
    return PhaseSet.from_sequence(values, "large_T")


def trajectory_x(g: Geometry, eps: int, t):
    """x-coordinate of the ramped path with sign ``eps`` at times ``t``."""
    t = np.asarray(t, dtype=float)
    if g.tau == 0:
        return np.full_like(t, eps * g.L / 2)
    v = g.ramp_speed
    out = np.where(
        t <= g.tau,
        v * t,
        np.where(t <= g.T + g.tau, v * g.tau, v * (g.T + g.tau - t) + v * g.tau),
    )
    return eps * out


def _simpson(f, a: float, b: float, steps: int) -> float:
    if b <= a:
        return 0.0
    t = np.linspace(a, b, steps + 1)
    y = f(t)
    h = (b - a) / steps
    return float(h / 3 * (y[0] + y[-1] + 4 * y[1:-1:2].sum() + 2 * y[2:-1:2].sum()))


def phases_quadrature(g: Geometry, steps: int = 10_000) -> PhaseSet:
    """Integrate ``G m_A m_B / (hbar |x_A(t) - x_B(t)|)`` over the three segments.

    Positions are the full 3-vectors ``(x^a(t), v_y t, 0)`` for A and
    ``(x^b(t) + D, v_y t, 0)`` for B. ``steps`` Simpson intervals are used
    per segment (rounded up to even).
    """
    if steps < 100:
        raise ValueError(f"steps must be >= 100, got {steps}")
    steps += steps % 2
    segments = [(0.0, g.tau), (g.tau, g.tau + g.T), (g.tau + g.T, g.T + 2 * g.tau)]
    values = []
    for label in PATH_LABELS:
        ea, eb = EPSILON[label[0]], EPSILON[label[1]]

        def integrand(t, ea=ea, eb=eb):
            xa = np.stack([trajectory_x(g, ea, t), g.v_y * t, np.zeros_like(t)])
            xb = np.stack([trajectory_x(g, eb, t) + g.D, g.v_y * t, np.zeros_like(t)])
            return g.coupling / np.linalg.norm(xa - xb, axis=0)

        values.append(sum(_simpson(integrand, a, b, steps) for a, b in segments))
    return PhaseSet.from_sequence(values, "quadrature")


def to_dimensionless(g: Geometry) -> DimensionlessPoint:
    return DimensionlessPoint(theta=g.coupling * g.T / g.D, r=g.L / g.D)


def from_dimensionless(p: DimensionlessPoint) -> PhaseSet:
    """Large-T phases ``(theta, theta/(1+r), theta/(1-r), theta)``."""
    th, r = p.theta, p.r
    return PhaseSet(th, th / (1 + r), th / (1 - r), th, "dimensionless")


def dimensionless_phases(theta: float, r: float = 0.5) -> PhaseSet:
    return from_dimensionless(DimensionlessPoint(theta, r))


def unit_geometry(theta: float, r: float, tau_over_T: float = 0.0) -> Geometry:
    """Geometry in units with ``G = m = hbar = D = 1`` so that ``T = theta``."""
    return Geometry(D=1.0, L=r, T=theta, tau=tau_over_T * theta, m_A=1.0, m_B=1.0, G=1.0, hbar=1.0)


def entangling_phase_large_T(theta: float, r: float) -> float:
    """``theta * 2 r^2 / (1 - r^2)``; equals ``2 theta / 3`` at ``r = 1/2``."""
    if not (0 < r < 1):
        raise RatioOutOfRange(f"r must lie in (0, 1), got {r!r}")
    return theta * 2 * r * r / (1 - r * r)


def theta_from_panel_time(t: float) -> float:
    """Figure time axes are in units of ``pi hbar D / (G m^2)``, i.e. ``theta = pi t``."""
    return math.pi * t
