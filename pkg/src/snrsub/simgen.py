"""Synthetic designs: a sinusoid plus AR(1) or 1/f**beta noise at exact SNR.

All generators are pure functions of their parameters and a seed; replica
streams are derived from a master seed by a counter-based key so they are
independent and insensitive to evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

from .core import TimeSeries

__all__ = [
    "SignalSpec",
    "NoiseSpec",
    "derive_seed",
    "derive_rng",
    "calibrate_amplitude",
    "gen_sine",
    "gen_ar1",
    "gen_powerlaw",
    "gen_design",
]

AR1_BURN_IN = 1000
DESIGN_NOISE = {"ar": ("ar1", -0.7), "p1": ("powerlaw", 0.2), "p2": ("powerlaw", 0.6)}
SIGNAL_FREQ_HZ = 50.0


def derive_seed(master: int, *key: int) -> int:
    """64-bit stream seed derived from a master seed and an integer key path."""
    ss = np.random.SeedSequence(master, spawn_key=tuple(int(k) for k in key))
    return int(ss.generate_state(1, np.uint64)[0])


def derive_rng(master: int, *key: int) -> np.random.Generator:
    """Generator for the stream identified by (master, *key)."""
    return np.random.default_rng(np.random.SeedSequence(master, spawn_key=tuple(int(k) for k in key)))


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return derive_rng(int(seed))


@dataclass(frozen=True)
class SignalSpec:
    """Deterministic sinusoid: amplitude, frequency, rate, and duration."""

    amplitude: float
    frequency_hz: float
    sample_rate_hz: float
    duration_s: float

    def __post_init__(self):
        if not (0 < self.frequency_hz < self.sample_rate_hz / 2):
            raise ValueError(
                f"frequency {self.frequency_hz} Hz violates Nyquist at rate {self.sample_rate_hz} Hz"
            )
        nf = self.duration_s * self.sample_rate_hz
        if not (nf >= 1 and abs(nf - round(nf)) < 1e-6):
            raise ValueError(f"duration*rate must be a positive integer, got {nf}")

    @property
    def n(self) -> int:
        return int(round(self.duration_s * self.sample_rate_hz))


@dataclass(frozen=True)
class NoiseSpec:
    """Noise process with a target stationary variance.

    ``kind`` is one of 'white', 'ar1' (coefficient ``phi``) or 'powerlaw'
    (spectral exponent ``beta``).  White and AR(1) accept variance 0 as the
    noiseless degenerate case; the power-law synthesis rescales to an exact
    sample variance, so it needs a positive target.
    """

    kind: str
    variance: float = 1.0
    phi: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        if self.kind not in ("white", "ar1", "powerlaw"):
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if self.variance < 0 or (self.kind == "powerlaw" and self.variance == 0):
            raise ValueError(f"invalid variance {self.variance} for {self.kind} noise")
        if self.kind == "ar1" and not abs(self.phi) < 1:
            raise ValueError(f"ar1 coefficient must satisfy |phi| < 1, got {self.phi}")
        if self.kind == "powerlaw" and not (0.0 <= self.beta <= 1.0):
            raise ValueError(f"spectral exponent must lie in [0, 1], got {self.beta}")

    @classmethod
    def white(cls, variance: float) -> "NoiseSpec":
        return cls("white", variance)

    @classmethod
    def ar1(cls, phi: float, variance: float) -> "NoiseSpec":
        return cls("ar1", variance, phi=phi)

    @classmethod
    def powerlaw(cls, beta: float, variance: float) -> "NoiseSpec":
        return cls("powerlaw", variance, beta=beta)

    @property
    def ar1_innovation_sd(self) -> float:
        if self.kind != "ar1":
            raise ValueError("innovation sd only defined for ar1 noise")
        return math.sqrt(self.variance * (1.0 - self.phi * self.phi))

    def sample(self, n: int, seed) -> np.ndarray:
        rng = _as_rng(seed)
        if self.kind == "white":
            return rng.normal(0.0, math.sqrt(self.variance), size=n)
        if self.kind == "ar1":
            return gen_ar1(self.phi, self.variance, n, rng)
        return gen_powerlaw(self.beta, self.variance, n, rng)


def calibrate_amplitude(target_snr_db: float, noise_variance: float) -> float:
    """Sine amplitude whose power A**2/2 hits the target SNR over the noise."""
    if not noise_variance > 0:
        raise ValueError(f"noise variance must be positive, got {noise_variance}")
    return math.sqrt(2.0 * noise_variance * 10.0 ** (target_snr_db / 10.0))


def gen_sine(spec: SignalSpec) -> TimeSeries:
    """Sampled sinusoid A*sin(2*pi*f*t) at t = (i-1)/rate, i = 1..n."""
    t = np.arange(spec.n) / spec.sample_rate_hz
    return TimeSeries(spec.amplitude * np.sin(2.0 * np.pi * spec.frequency_hz * t),
                      spec.sample_rate_hz)


def gen_ar1(phi: float, target_variance: float, n: int, seed) -> np.ndarray:
    """Gaussian AR(1) with stationary variance ``target_variance``.

    The innovation sd is sqrt(target_variance * (1 - phi**2)); a 1000-sample
    burn-in is generated and discarded to wash out the zero initial state.
    """
    if not abs(phi) < 1:
        raise ValueError(f"|phi| must be < 1, got {phi}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = _as_rng(seed)
    sd = math.sqrt(target_variance * (1.0 - phi * phi))
    u = rng.normal(0.0, sd, size=n + AR1_BURN_IN)
    x = lfilter([1.0], [1.0, -phi], u)
    return x[AR1_BURN_IN:]


def gen_powerlaw(beta: float, target_variance: float, n: int, seed) -> np.ndarray:
    """Colored noise whose expected periodogram follows f**(-beta).

    Spectral synthesis: for each positive frequency bin draw real and
    imaginary parts as Normal(0, P(f_k)/2) with P proportional to k**(-beta),
    force the Nyquist bin real, zero the DC bin, and invert.  The result is
    recentered and rescaled so the sample variance equals the target exactly,
    making the realized noise power a constant of the design.
    """
    if n < 16:
        raise ValueError(f"n must be >= 16, got {n}")
    if not (0.0 <= beta <= 1.0):
        raise ValueError(f"beta must lie in [0, 1], got {beta}")
    rng = _as_rng(seed)
    nf = n // 2 + 1
    k = np.arange(1, nf, dtype=np.float64)
    p = k ** (-beta)
    g = rng.normal(size=(2, nf - 1))
    coef = np.zeros(nf, dtype=np.complex128)
    coef[1:] = np.sqrt(0.5 * p) * (g[0] + 1j * g[1])
    if n % 2 == 0:
        coef[-1] = np.sqrt(p[-1]) * g[0, -1]
    x = np.fft.irfft(coef, n)
    x -= x.mean()
    x *= math.sqrt(target_variance * n / float(x @ x))
    return x


def gen_design(design: str, target_snr_db: float, fs_hz: float, duration_s: float,
               seed, noise_variance: float = 1.0) -> TimeSeries:
    """Sine at 50 Hz plus design noise, calibrated to the exact target SNR.

    Designs: 'ar' is AR(1) with phi = -0.7 (short-range dependence); 'p1' and
    'p2' are 1/f**beta noise with beta = 0.2 and 0.6 (moderate and strong
    long-range dependence).  The sine amplitude is tuned against the noise
    target variance, so the true SNR is a constant of the construction.
    """
    if design not in DESIGN_NOISE:
        raise ValueError(f"unknown design {design!r}; expected one of {sorted(DESIGN_NOISE)}")
    amp = calibrate_amplitude(target_snr_db, noise_variance)
    spec = SignalSpec(amp, SIGNAL_FREQ_HZ, fs_hz, duration_s)
    rng = _as_rng(seed)
    kind, param = DESIGN_NOISE[design]
    if kind == "ar1":
        noise = gen_ar1(param, noise_variance, spec.n, rng)
    else:
        noise = gen_powerlaw(param, noise_variance, spec.n, rng)
    return TimeSeries(gen_sine(spec).samples + noise, fs_hz)
