"""Design integrals over discretized field samples.

Sample sets carry explicit quadrature weights; no mesh topology or FEM is
involved.  Conductors are represented as eps_rel = 1e12 dielectrics so the
permittivity-difference terms of the moving-boundary integral stay finite.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np

from .constants import EPSILON_0
from .errors import DataError, DomainError


@dataclass(frozen=True)
class VolumeSampleSet:
    """Quadrature-weighted volume samples of permittivity, field, density
    and mechanical displacement."""

    position: np.ndarray  # (n, 3) m
    weight: np.ndarray  # (n,) m^3
    eps_rel: np.ndarray  # (n,)
    e_field: np.ndarray  # (n, 3) V/m
    rho: np.ndarray  # (n,) kg/m^3
    q: np.ndarray  # (n, 3) m

    def __post_init__(self):
        n = len(self.weight)
        if n == 0:
            raise DomainError("sample set must be non-empty")
        for name in ("position", "weight", "eps_rel", "e_field", "rho", "q"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if len(arr) != n or not np.all(np.isfinite(arr)):
                raise DomainError(f"bad {name} array in volume sample set")
            object.__setattr__(self, name, arr)
        if np.any(self.weight <= 0):
            raise DomainError("quadrature weights must be positive")


@dataclass(frozen=True)
class SurfaceSampleSet:
    """Interface samples; material 1 sits on the +normal side."""

    position: np.ndarray  # (n, 3)
    area: np.ndarray  # (n,) m^2
    normal: np.ndarray  # (n, 3) unit
    q: np.ndarray  # (n, 3) m
    e_field: np.ndarray  # (n, 3) V/m, evaluated per the interface convention
    d_field: np.ndarray  # (n, 3) C/m^2
    eps1_rel: np.ndarray  # (n,)
    eps2_rel: np.ndarray  # (n,)

    def __post_init__(self):
        n = len(self.area)
        if n == 0:
            raise DomainError("sample set must be non-empty")
        for name in ("position", "area", "normal", "q", "e_field", "d_field", "eps1_rel", "eps2_rel"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if len(arr) != n or not np.all(np.isfinite(arr)):
                raise DomainError(f"bad {name} array in surface sample set")
            object.__setattr__(self, name, arr)
        if np.any(self.area <= 0):
            raise DomainError("areas must be positive")
        norms = np.linalg.norm(self.normal, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-9):
            raise DomainError("normals must be unit vectors")


def max_displacement(v: VolumeSampleSet) -> float:
    """Mode normalization alpha: the largest |Q| over the samples."""
    alpha = float(np.max(np.linalg.norm(v.q, axis=1)))
    if alpha == 0:
        raise DomainError("degenerate mode: displacement field is zero everywhere")
    return alpha


def effective_mass(v: VolumeSampleSet) -> float:
    """m_eff = integral rho |Q/alpha|^2 dV on the sample quadrature."""
    alpha = max_displacement(v)
    q2 = np.sum(v.q * v.q, axis=1)
    return float(np.sum(v.weight * v.rho * q2) / alpha**2)


def capacitance_from_energy(v: VolumeSampleSet, applied_voltage: float = 1.0) -> float:
    """C_m = (integral eps |E|^2 dV) / V^2 (twice the stored energy over V^2)."""
    if applied_voltage <= 0:
        raise DomainError("applied voltage must be positive")
    e2 = np.sum(v.e_field * v.e_field, axis=1)
    energy2 = float(np.sum(v.weight * EPSILON_0 * v.eps_rel * e2))
    return energy2 / applied_voltage**2


def participation_ratio(c_m: float, c_s: float) -> float:
    """eta = C_m / (C_s + C_m)."""
    if c_m <= 0:
        raise DomainError("C_m must be positive")
    if c_s < 0:
        raise DomainError("C_s must be non-negative")
    return c_m / (c_s + c_m)


@dataclass(frozen=True)
class ResonatorLumped:
    inductance: float  # H
    stray_capacitance: float  # F

    def __post_init__(self):
        if self.inductance <= 0:
            raise DomainError("inductance must be positive")
        if self.stray_capacitance < 0:
            raise DomainError("stray capacitance must be non-negative")


def lc_frequency(r: ResonatorLumped, c_m: float) -> float:
    """omega_c = 1/sqrt(L (C_s + C_m)), the dimensionally consistent form."""
    total_c = r.stray_capacitance + c_m
    if total_c <= 0:
        raise DomainError("total capacitance must be positive")
    return 1.0 / np.sqrt(r.inductance * total_c)


def _surface_sum(s: SurfaceSampleSet, alpha: float) -> float:
    """Contribution of one interface to the moving-boundary numerator."""
    qn = np.sum(s.q * s.normal, axis=1) / alpha
    e_perp = np.sum(s.e_field * s.normal, axis=1)
    e_par2 = np.sum(s.e_field * s.e_field, axis=1) - e_perp**2
    d_perp2 = np.sum(s.d_field * s.normal, axis=1) ** 2
    eps1 = EPSILON_0 * s.eps1_rel
    eps2 = EPSILON_0 * s.eps2_rel
    d_eps = eps1 - eps2
    d_eps_inv = 1.0 / eps1 - 1.0 / eps2
    return float(np.sum(s.area * qn * (d_eps * e_par2 - d_eps_inv * d_perp2)))


def fractional_capacitance_derivative(
    surfaces: list[SurfaceSampleSet], volume: VolumeSampleSet
) -> float:
    """(1/C_m) dC_m/dalpha from the moving-boundary surface integrals."""
    alpha = max_displacement(volume)
    e2 = np.sum(volume.e_field * volume.e_field, axis=1)
    denom = float(np.sum(volume.weight * EPSILON_0 * volume.eps_rel * e2))
    if denom == 0:
        raise DomainError("degenerate field: zero stored energy")
    return sum(_surface_sum(s, alpha) for s in surfaces) / denom


def coupling_rate_moving_boundary(
    surfaces: list[SurfaceSampleSet],
    volume: VolumeSampleSet,
    eta: float,
    omega_c: float,
    x_zpf: float,
) -> float:
    """Single-photon coupling g0 = -x_zpf * eta * (omega_c/2) * (1/C) dC/dalpha."""
    return -x_zpf * eta * (omega_c / 2.0) * fractional_capacitance_derivative(surfaces, volume)


def dwda_lumped(eta: float, omega_c: float, c_m: float, dc_da: float) -> float:
    """Lumped-circuit route: d omega_c / d alpha = -(omega_c/2) eta (1/C_m) dC_m/dalpha."""
    if c_m <= 0:
        raise DomainError("C_m must be positive")
    return -(omega_c / 2.0) * eta * dc_da / c_m


_VOLUME_COLS = [
    "x_m", "y_m", "z_m", "w_m3", "eps_rel",
    "ex_vpm", "ey_vpm", "ez_vpm", "rho_kgpm3", "qx_m", "qy_m", "qz_m",
]
_SURFACE_COLS = [
    "x_m", "y_m", "z_m", "a_m2", "nx", "ny", "nz",
    "qx_m", "qy_m", "qz_m", "ex_vpm", "ey_vpm", "ez_vpm",
    "dx_cpm2", "dy_cpm2", "dz_cpm2", "eps1_rel", "eps2_rel",
]


def _read_csv(path, columns):
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or [c.strip() for c in header] != columns:
                raise DataError(f"{path}: expected header {','.join(columns)}")
            rows = []
            for lineno, row in enumerate(reader, start=2):
                if not row or all(not c.strip() for c in row):
                    continue
                if len(row) != len(columns):
                    raise DataError(f"{path}:{lineno}: expected {len(columns)} columns")
                try:
                    rows.append([float(c) for c in row])
                except ValueError as exc:
                    raise DataError(f"{path}:{lineno}: {exc}") from exc
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise DataError(f"{path}: no data rows")
    return np.asarray(rows)


def load_volume_csv(path) -> VolumeSampleSet:
    arr = _read_csv(path, _VOLUME_COLS)
    return VolumeSampleSet(
        position=arr[:, 0:3],
        weight=arr[:, 3],
        eps_rel=arr[:, 4],
        e_field=arr[:, 5:8],
        rho=arr[:, 8],
        q=arr[:, 9:12],
    )


def load_surface_csv(path) -> SurfaceSampleSet:
    arr = _read_csv(path, _SURFACE_COLS)
    return SurfaceSampleSet(
        position=arr[:, 0:3],
        area=arr[:, 3],
        normal=arr[:, 4:7],
        q=arr[:, 7:10],
        e_field=arr[:, 10:13],
        d_field=arr[:, 13:16],
        eps1_rel=arr[:, 16],
        eps2_rel=arr[:, 17],
    )


def load_lumped_json(path) -> ResonatorLumped:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    try:
        return ResonatorLumped(
            inductance=float(data["inductance_h"]),
            stray_capacitance=float(data["stray_capacitance_f"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"{path}: expected keys inductance_h, stray_capacitance_f") from exc
