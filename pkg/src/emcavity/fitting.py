"""Nonlinear least-squares fitting of complex reflection traces.

The extended one-sided-cavity model

    R(w) = A exp(-i(w tau + phi)) *
           ( -(-i(w - w_c) + (k_in - k_ex)/2 + i delta)
             / (-i(w - w_c) + (k_in + k_ex)/2) )

is fitted to the real and imaginary parts of the data jointly, by damped
Gauss-Newton with Levenberg-style damping.  Damping rates are optimized in
log space to keep them positive.  The OMIT model reuses the same prefactor
and tilt around the mechanical self-energy term.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DataError, DomainError, GuessError
from .params import CavityParams, MechParams


@dataclass(frozen=True)
class ComplexTrace:
    """Frequency grid (Hz) with complex reflection samples."""

    f_hz: np.ndarray
    re: np.ndarray
    im: np.ndarray
    meta: str = ""

    def __post_init__(self):
        f = np.asarray(self.f_hz, dtype=float)
        re = np.asarray(self.re, dtype=float)
        im = np.asarray(self.im, dtype=float)
        if not (len(f) == len(re) == len(im)):
            raise DataError("trace arrays must have equal length")
        if len(f) < 7:
            raise DataError("trace needs at least 7 samples (7-parameter model)")
        if not np.all(np.diff(f) > 0):
            raise DataError("trace frequency must be strictly increasing")
        if not (np.all(np.isfinite(f)) and np.all(np.isfinite(re)) and np.all(np.isfinite(im))):
            raise DataError("trace contains non-finite samples")
        object.__setattr__(self, "f_hz", f)
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    @property
    def omega(self) -> np.ndarray:
        return 2.0 * np.pi * self.f_hz

    @property
    def values(self) -> np.ndarray:
        return self.re + 1j * self.im


@dataclass(frozen=True)
class ReflectionModelParams:
    """Parameters of the extended reflection model."""

    amplitude: float  # A, dimensionless
    tau: float  # s, cable delay
    phi: float  # rad, constant phase
    omega_c: float  # rad/s
    kappa_in: float  # rad/s
    kappa_ex: float  # rad/s
    delta: float  # rad/s, baseline tilt

    def __post_init__(self):
        if self.amplitude <= 0:
            raise DomainError("amplitude must be positive")
        if self.kappa_in < 0 or self.kappa_ex < 0:
            raise DomainError("damping rates must be non-negative")


@dataclass(frozen=True)
class FitResult:
    params: object
    residual_norm: float
    iterations: int
    converged: bool
    param_uncertainties: dict = field(default_factory=dict)
    rank_deficient: bool = False
    message: str = ""


def reflection_model(omega, p: ReflectionModelParams):
    """Evaluate the extended reflection model at angular frequency omega."""
    w = np.asarray(omega)
    num = -1j * (w - p.omega_c) + (p.kappa_in - p.kappa_ex) / 2.0 + 1j * p.delta
    den = -1j * (w - p.omega_c) + (p.kappa_in + p.kappa_ex) / 2.0
    return p.amplitude * np.exp(-1j * (w * p.tau + p.phi)) * (-num / den)


def _reflection_jacobian(omega, p: ReflectionModelParams):
    """Analytic complex derivatives of the model w.r.t.
    (A, tau, phi, omega_c, log kappa_in, log kappa_ex, delta)."""
    w = np.asarray(omega)
    num = -1j * (w - p.omega_c) + (p.kappa_in - p.kappa_ex) / 2.0 + 1j * p.delta
    den = -1j * (w - p.omega_c) + (p.kappa_in + p.kappa_ex) / 2.0
    pre = p.amplitude * np.exp(-1j * (w * p.tau + p.phi))
    r = pre * (-num / den)
    d_a = r  # log-space: d/d(log A) = R
    d_tau = -1j * w * r
    d_phi = -1j * r
    d_wc = pre * (-1j) * (den - num) / den**2
    d_kin = pre * (-(den - num)) / (2.0 * den**2) * p.kappa_in  # log-space
    d_kex = pre * (den + num) / (2.0 * den**2) * p.kappa_ex  # log-space
    d_delta = pre * (-1j) / den
    return np.stack([d_a, d_tau, d_phi, d_wc, d_kin, d_kex, d_delta], axis=-1)


def _pack(p: ReflectionModelParams) -> np.ndarray:
    return np.array(
        [
            np.log(p.amplitude),
            p.tau,
            p.phi,
            p.omega_c,
            np.log(p.kappa_in),
            np.log(p.kappa_ex),
            p.delta,
        ]
    )


def _unpack(theta: np.ndarray) -> ReflectionModelParams:
    return ReflectionModelParams(
        amplitude=float(np.exp(theta[0])),
        tau=float(theta[1]),
        phi=float(theta[2]),
        omega_c=float(theta[3]),
        kappa_in=float(np.exp(theta[4])),
        kappa_ex=float(np.exp(theta[5])),
        delta=float(theta[6]),
    )


def _levenberg_marquardt(
    residual_fn,
    jacobian_fn,
    theta0: np.ndarray,
    max_iter: int = 500,
    xtol: float = 1e-10,
    lam0: float = 1e-3,
):
    """Damped Gauss-Newton on real residuals.

    Damping lambda scales diag(J^T J); x10 on rejected steps, /10 on
    accepted ones.  Convergence when the scaled relative step drops below
    xtol or the gradient norm below 1e-12 * residual norm.
    """
    theta = np.asarray(theta0, dtype=float).copy()
    r = residual_fn(theta)
    cost = float(r @ r)
    lam = lam0
    rank_deficient = False
    converged = False
    message = "max iterations reached"
    it = 0
    for it in range(1, max_iter + 1):
        J = jacobian_fn(theta)
        g = J.T @ r
        if np.linalg.norm(g) <= 1e-12 * max(np.sqrt(cost), 1e-300):
            converged, message = True, "gradient below tolerance"
            break
        JtJ = J.T @ J
        diag = np.diag(JtJ).copy()
        if np.any(diag <= 0):
            rank_deficient = True
            diag[diag <= 0] = max(diag.max(), 1.0) * 1e-14
        accepted = False
        for _ in range(60):
            try:
                step = np.linalg.solve(JtJ + lam * np.diag(diag), -g)
            except np.linalg.LinAlgError:
                rank_deficient = True
                step = np.linalg.lstsq(JtJ + lam * np.diag(diag), -g, rcond=None)[0]
            r_new = residual_fn(theta + step)
            cost_new = float(r_new @ r_new)
            if np.isfinite(cost_new) and cost_new <= cost:
                accepted = True
                break
            lam *= 10.0
        if not accepted:
            message = "no acceptable step found"
            break
        scale = np.sqrt(diag)
        rel_step = np.linalg.norm(scale * step) / max(np.linalg.norm(scale * theta), 1e-300)
        theta = theta + step
        r, cost = r_new, cost_new
        lam = max(lam / 10.0, 1e-15)
        if rel_step < xtol:
            converged, message = True, "relative step below tolerance"
            break
    return theta, np.sqrt(cost), it, converged, rank_deficient, message


def _uncertainties(J: np.ndarray, r: np.ndarray, names) -> dict:
    """1-sigma estimates from the local quadratic model.

    Columns are rescaled to unit norm before the SVD so that wildly
    different parameter magnitudes (rad/s vs dimensionless) do not poison
    the pseudo-inverse.
    """
    m, n = J.shape
    dof = max(m - n, 1)
    s2 = float(r @ r) / dof
    scale = np.linalg.norm(J, axis=0)
    scale[scale == 0] = 1.0
    u, sv, vt = np.linalg.svd(J / scale, full_matrices=False)
    inv2 = np.where(sv > 1e-12 * sv[0], 1.0 / np.maximum(sv, 1e-300) ** 2, 0.0)
    cov = (vt.T * inv2) @ vt * s2
    return {
        name: float(np.sqrt(max(cov[i, i], 0.0)) / scale[i]) for i, name in enumerate(names)
    }


def initial_guess(trace: ComplexTrace) -> ReflectionModelParams:
    """Heuristic starting point for fit_reflection.

    Resonance from the |R| minimum, linewidth from the width at the
    geometric mean of dip and baseline magnitude, delay and phase from the
    off-resonant phase ramp, and the coupling branch from the sign of the
    detrended on-resonance response.
    """
    w = trace.omega
    vals = trace.values
    mag = np.abs(vals)
    i_min = int(np.argmin(mag))
    n = len(w)
    if i_min == 0 or i_min == n - 1:
        raise GuessError("resonance dip at grid edge; resonance must be inside the span")
    edge = max(n // 10, 2)
    off = np.concatenate([np.arange(edge), np.arange(n - edge, n)])
    baseline = float(np.median(mag[off]))
    if baseline <= 0 or mag[i_min] > 0.95 * baseline:
        raise GuessError("no resonance dip found in trace")
    amplitude = baseline
    # phase ramp from off-resonant samples: angle ~ pi - phi - w tau.
    # Fit the slope per edge segment; unwrapping across the resonance gap
    # is unreliable.
    left, right = np.arange(edge), np.arange(n - edge, n)
    slopes = []
    for seg in (left, right):
        ph = np.unwrap(np.angle(vals[seg]))
        slopes.append(np.polyfit(w[seg], ph, 1)[0])
    tau = -float(np.mean(slopes))
    # phase intercept: average of (angle + w tau) over both edges, wrapped
    resid = np.angle(vals[off] * np.exp(1j * w[off] * tau))
    mean_angle = float(np.angle(np.mean(np.exp(1j * resid))))
    phi = float(np.angle(np.exp(1j * (np.pi - mean_angle))))
    omega_c = float(w[i_min])
    # full width at the geometric mean magnitude level; for a Lorentzian
    # reflection dip of depth d that width equals kappa*sqrt(d)
    level = np.sqrt(mag[i_min] * baseline)
    below = mag < level
    lo = i_min
    while lo > 0 and below[lo - 1]:
        lo -= 1
    hi = i_min
    while hi < n - 1 and below[hi + 1]:
        hi += 1
    width = float(w[hi] - w[lo])
    if width <= 0:
        width = float(w[min(i_min + 1, n - 1)] - w[max(i_min - 1, 0)])
    depth0 = max(float(mag[i_min] / baseline), 1e-3)
    kappa = width / np.sqrt(depth0)
    # dip depth fixes |k_in - k_ex|; the branch comes from phase information
    depth = float(mag[i_min] / baseline)
    detrended = vals[i_min] * np.exp(1j * (w[i_min] * tau + phi)) / amplitude
    overcoupled = detrended.real > 0
    split = depth * kappa
    if overcoupled:
        kappa_ex = (kappa + split) / 2.0
        kappa_in = (kappa - split) / 2.0
    else:
        kappa_in = (kappa + split) / 2.0
        kappa_ex = (kappa - split) / 2.0
    kappa_in = max(kappa_in, 1e-6 * kappa)
    kappa_ex = max(kappa_ex, 1e-6 * kappa)
    return ReflectionModelParams(
        amplitude=amplitude,
        tau=tau,
        phi=phi,
        omega_c=omega_c,
        kappa_in=kappa_in,
        kappa_ex=kappa_ex,
        delta=0.0,
    )


_REFLECTION_NAMES = ("amplitude", "tau", "phi", "omega_c", "kappa_in", "kappa_ex", "delta")


def fit_reflection(trace: ComplexTrace, guess: ReflectionModelParams | None = None) -> FitResult:
    """Fit the extended reflection model to the real and imaginary parts."""
    if guess is None:
        guess = initial_guess(trace)
    w = trace.omega
    data = np.concatenate([trace.re, trace.im])

    def residual(theta):
        model = reflection_model(w, _unpack(theta))
        return np.concatenate([model.real, model.imag]) - data

    def jacobian(theta):
        Jc = _reflection_jacobian(w, _unpack(theta))
        return np.concatenate([Jc.real, Jc.imag], axis=0)

    theta, rnorm, iters, converged, rankdef, message = _levenberg_marquardt(
        residual, jacobian, _pack(guess)
    )
    # phi is only defined modulo 2 pi; report the principal value
    theta[2] = float(np.angle(np.exp(1j * theta[2])))
    p = _unpack(theta)
    J = jacobian(theta)
    sig = _uncertainties(J, residual(theta), _REFLECTION_NAMES)
    # undo the log-parameterization for the reported sigmas
    sig["amplitude"] *= p.amplitude
    sig["kappa_in"] *= p.kappa_in
    sig["kappa_ex"] *= p.kappa_ex
    return FitResult(
        params=p,
        residual_norm=rnorm,
        iterations=iters,
        converged=converged,
        param_uncertainties=sig,
        rank_deficient=rankdef,
        message=message,
    )


@dataclass(frozen=True)
class OmitModelParams:
    """Mechanical parameters fitted on top of fixed cavity background."""

    g: float  # rad/s
    gamma: float  # rad/s
    omega_m: float  # rad/s
    detuning: float  # rad/s


def omit_model(omega, cavity: ReflectionModelParams, p: OmitModelParams):
    """OMIT reflection wrapped in the fitted cavity background.

    Frequencies are in the frame rotating at the pump: the cavity Lorentzian
    sits at the detuning, the mechanical feature at Omega.
    """
    w = np.asarray(omega)
    self_energy = p.g * p.g / (-1j * (w - p.omega_m) + p.gamma / 2.0)
    d = -1j * (w - p.detuning)
    num = d + (cavity.kappa_in - cavity.kappa_ex) / 2.0 + 1j * cavity.delta + self_energy
    den = d + (cavity.kappa_in + cavity.kappa_ex) / 2.0 + self_energy
    pre = cavity.amplitude * np.exp(-1j * (w * cavity.tau + cavity.phi))
    return pre * (-num / den)


_OMIT_NAMES = ("g", "gamma", "omega_m")


def fit_omit(
    trace: ComplexTrace,
    cavity: ReflectionModelParams,
    guess: OmitModelParams,
    fit_detuning: bool = False,
) -> FitResult:
    """Fit {g, gamma, Omega} (optionally Delta) with cavity parameters fixed.

    Follows the two-stage workflow: the cavity background is established by
    fit_reflection first and held fixed here.  The Jacobian is central
    finite differences.
    """
    w = trace.omega
    data = np.concatenate([trace.re, trace.im])
    names = _OMIT_NAMES + (("detuning",) if fit_detuning else ())

    def unpack(theta):
        kw = dict(zip(names, (float(t) for t in theta)))
        if not fit_detuning:
            kw["detuning"] = guess.detuning
        return OmitModelParams(**kw)

    def residual(theta):
        model = omit_model(w, cavity, unpack(theta))
        return np.concatenate([model.real, model.imag]) - data

    theta0 = np.array([getattr(guess, n) for n in names], dtype=float)
    scales = np.maximum(np.abs(theta0), [max(abs(guess.g), guess.gamma, 1.0)] * len(names))

    def jacobian(theta):
        cols = []
        for i in range(len(theta)):
            h = 1e-7 * scales[i]
            tp, tm = theta.copy(), theta.copy()
            tp[i] += h
            tm[i] -= h
            cols.append((residual(tp) - residual(tm)) / (2.0 * h))
        return np.stack(cols, axis=-1)

    theta, rnorm, iters, converged, rankdef, message = _levenberg_marquardt(
        residual, jacobian, theta0
    )
    p = unpack(theta)
    sig = _uncertainties(jacobian(theta), residual(theta), names)
    # the model depends on g only through g^2, so near g = 0 the
    # identifiable quantity is g^2; report its uncertainty too
    sig["g_squared"] = 2.0 * abs(p.g) * sig["g"]
    return FitResult(
        params=p,
        residual_norm=rnorm,
        iterations=iters,
        converged=converged,
        param_uncertainties=sig,
        rank_deficient=rankdef,
        message=message,
    )


def load_trace(path, fmt: str = "re_im") -> ComplexTrace:
    """Load a trace CSV; fmt 're_im' (f_hz, re, im) or 'db_phase'
    (f_hz, mag_db, phase_rad)."""
    if fmt not in ("re_im", "db_phase"):
        raise ValueError(f"unknown trace format: {fmt!r}")
    rows = []
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None:
                raise DataError(f"{path}: empty file")
            for lineno, row in enumerate(reader, start=2):
                if not row or all(not c.strip() for c in row):
                    continue
                if len(row) < 3:
                    raise DataError(f"{path}:{lineno}: expected 3 columns, got {len(row)}")
                try:
                    f, a, b = float(row[0]), float(row[1]), float(row[2])
                except ValueError as exc:
                    raise DataError(f"{path}:{lineno}: {exc}") from exc
                if not (np.isfinite(f) and np.isfinite(a) and np.isfinite(b)):
                    raise DataError(f"{path}:{lineno}: non-finite sample")
                rows.append((f, a, b))
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise DataError(f"{path}: no data rows")
    arr = np.asarray(rows)
    f = arr[:, 0]
    if not np.all(np.diff(f) > 0):
        bad = int(np.argmax(np.diff(f) <= 0)) + 2
        raise DataError(f"{path}: frequency not strictly increasing near line {bad + 1}")
    if fmt == "re_im":
        re, im = arr[:, 1], arr[:, 2]
    else:
        c = 10.0 ** (arr[:, 1] / 20.0) * np.exp(1j * arr[:, 2])
        re, im = c.real, c.imag
    return ComplexTrace(f_hz=f, re=re, im=im, meta=f"{path} ({fmt})")


def save_trace(trace: ComplexTrace, path) -> None:
    """Write a trace as re_im CSV with full-precision columns."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["f_hz", "re", "im"])
        for f, a, b in zip(trace.f_hz, trace.re, trace.im):
            writer.writerow([repr(float(f)), repr(float(a)), repr(float(b))])


def synthesize_trace(
    model_fn,
    f_hz: np.ndarray,
    snr_db: float | None = None,
    seed: int | None = None,
    meta: str = "synthetic",
) -> ComplexTrace:
    """Evaluate model_fn(omega) on the grid and add complex Gaussian noise.

    Per-sample noise std is |R|_rms * 10^(-snr_db/20), split evenly between
    quadratures.  snr_db=None yields a noiseless trace; otherwise a seed is
    required for determinism.
    """
    f_hz = np.asarray(f_hz, dtype=float)
    clean = np.asarray(model_fn(2.0 * np.pi * f_hz), dtype=complex)
    if snr_db is None:
        noisy = clean
    else:
        if seed is None:
            raise DataError("seed is required when synthesizing noisy traces")
        rng = np.random.default_rng(seed)
        sigma = float(np.sqrt(np.mean(np.abs(clean) ** 2))) * 10.0 ** (-snr_db / 20.0)
        noise = (rng.standard_normal(len(f_hz)) + 1j * rng.standard_normal(len(f_hz))) * (
            sigma / np.sqrt(2.0)
        )
        noisy = clean + noise
    return ComplexTrace(f_hz=f_hz, re=noisy.real, im=noisy.imag, meta=meta)


def cavity_params_from_fit(p: ReflectionModelParams) -> CavityParams:
    """Extract the bare cavity parameters from a reflection fit."""
    return CavityParams(omega_c=p.omega_c, kappa_in=p.kappa_in, kappa_ex=p.kappa_ex)
