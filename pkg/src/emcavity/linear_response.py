"""Frequency-domain observables of a single cavity + mechanical mode:
bare reflection, OMIT reflection, susceptibilities, optomechanical damping.

All formulas are complex throughout; magnitude/phase belong to the
presentation layer.  Frequencies are angular (rad/s).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .params import CavityParams, MechParams


@dataclass(frozen=True)
class Susceptibility:
    """Lorentzian susceptibility 1/(-i(w - center) + halfwidth).

    kind is one of 'cavity', 'cavity_conjugate', 'mechanical',
    'mechanical_conjugate'; conjugate kinds carry a negated center so that
    chi_conj(w) == conj(chi(-w)).
    """

    kind: str
    center: float
    halfwidth: float

    _KINDS = ("cavity", "cavity_conjugate", "mechanical", "mechanical_conjugate")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown susceptibility kind: {self.kind!r}")
        if self.halfwidth < 0:
            raise DomainError("halfwidth must be non-negative")

    def __call__(self, omega):
        return 1.0 / (-1j * (np.asarray(omega) - self.center) + self.halfwidth)

    def conjugate_pair(self) -> "Susceptibility":
        base = self.kind.removesuffix("_conjugate")
        kind = base if self.kind.endswith("_conjugate") else base + "_conjugate"
        return Susceptibility(kind=kind, center=-self.center, halfwidth=self.halfwidth)


def bare_reflection(omega, cavity: CavityParams):
    """Reflection of a one-sided cavity.

    R = -(-i(w - w_c) + (k_in - k_ex)/2) / (-i(w - w_c) + (k_in + k_ex)/2)
    """
    if cavity.kappa == 0:
        raise DomainError("kappa_in + kappa_ex must be positive (pole)")
    d = -1j * (np.asarray(omega) - cavity.omega_c)
    num = d + (cavity.kappa_in - cavity.kappa_ex) / 2.0
    den = d + cavity.kappa / 2.0
    return -num / den


def omit_reflection(omega, cavity: CavityParams, mech: MechParams, g: float, detuning: float):
    """Reflection with a mechanical oscillator coupled at enhanced rate g.

    Written in the frame rotating at the pump: the cavity response is
    centered at the detuning Delta.  Valid physics assumes a red-detuned
    pump in the resolved sideband; the formula itself is evaluated as given
    (see sideband_resolution for a diagnostic).
    """
    w = np.asarray(omega)
    self_energy = g * g / (-1j * (w - mech.omega_m) + mech.gamma / 2.0)
    d = -1j * (w - detuning)
    num = d + (cavity.kappa_in - cavity.kappa_ex) / 2.0 + self_energy
    den = d + cavity.kappa / 2.0 + self_energy
    return -num / den


def sideband_resolution(omega_m: float, kappa: float) -> float:
    """Diagnostic ratio 4*Omega/kappa; >> 1 means resolved sideband."""
    return 4.0 * omega_m / kappa


def optomechanical_damping(detuning, g: float, kappa: float, omega_m: float):
    """Interaction-induced mechanical damping at mechanical resonance.

    gamma_opt(D) = (g^2 k / 2) * (1/((O - D)^2 + k^2/4) - 1/((O + D)^2 + k^2/4))

    Positive at D = +Omega (cooling), negative at D = -Omega (gain), odd in D.
    """
    if kappa <= 0:
        raise DomainError("kappa must be positive")
    d = np.asarray(detuning)
    k24 = kappa * kappa / 4.0
    return (g * g * kappa / 2.0) * (
        1.0 / ((omega_m - d) ** 2 + k24) - 1.0 / ((omega_m + d) ** 2 + k24)
    )


@dataclass(frozen=True)
class SpectrumRequest:
    """A frequency grid plus the system it probes."""

    omega_grid: np.ndarray
    cavity: CavityParams
    mech: MechParams | None = None
    g: float = 0.0
    detuning: float = 0.0

    def __post_init__(self):
        grid = np.asarray(self.omega_grid, dtype=float)
        if grid.ndim != 1 or grid.size < 2:
            raise DomainError("omega_grid must be 1-D with at least 2 points")
        if not np.all(np.diff(grid) > 0):
            raise DomainError("omega_grid must be strictly increasing")
        object.__setattr__(self, "omega_grid", grid)


@dataclass(frozen=True)
class ComplexSpectrum:
    omega_grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if len(self.omega_grid) != len(self.values):
            raise DomainError("grid and values must have equal length")
        if not np.all(np.isfinite(self.values)):
            raise DomainError("spectrum values must be finite")


def spectrum(request: SpectrumRequest, model: str = "bare") -> ComplexSpectrum:
    """Vectorized reflection over the request grid; model 'bare' or 'omit'."""
    if model == "bare":
        values = bare_reflection(request.omega_grid, request.cavity)
    elif model == "omit":
        if request.mech is None:
            raise DomainError("omit model needs mechanical parameters")
        values = omit_reflection(
            request.omega_grid, request.cavity, request.mech, request.g, request.detuning
        )
    else:
        raise ValueError(f"unknown spectrum model: {model!r}")
    return ComplexSpectrum(omega_grid=request.omega_grid, values=np.asarray(values))
