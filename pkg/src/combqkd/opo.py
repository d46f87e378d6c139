"""Below-threshold type-II OPO source model.

Models the nondegenerate parametric cavity that emits the entangled
frequency comb: steady-state mean fields, the resonant output covariance
(V0, C0), the technical-noise spectra injected by the seed laser and by
cavity-length jitter, and the two cavity-geometry design rules.

Rates are carried dimensionlessly where possible: V0 and C0 depend only
on the per-round-trip ratios (k*tau, gamma*tau, chi/k); absolute rates
enter only through the jitter coupling k^2 tau^4 and the spectra.
Analysis frequency omega is angular (rad/s); the free spectral range is
an ordinary frequency in Hz, converted at exactly one boundary via
omega = 2 pi n fsr.
"""
import math
from dataclasses import dataclass

from ._kernels import backend as _k
from .errors import AboveThreshold, DomainError, NonPhysical
from .gaussian import TwoModeCovariance, check_physicality

# vacuum light speed used by the design rules, m/s
LIGHT_SPEED_M_S = 2.998e8

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class OpoParams:
    """Cavity rates in per-round-trip form.

    k_tau: output-coupler transmission loss per round trip.
    gamma_tau: extra intracavity loss per round trip.
    chi_over_k: single-pass parametric amplitude gain over k; the cavity
        is below threshold while chi < k + gamma, i.e. chi_over_k <
        1 + gamma_tau/k_tau.  Threshold is checked by the operations,
        not at construction, so sweeps may probe the boundary.
    fsr_hz: free spectral range (comb-tooth spacing) in Hz.
    """
    k_tau: float
    gamma_tau: float = 0.0
    chi_over_k: float = 0.0
    fsr_hz: float = 15e9

    def __post_init__(self):
        if not 0.0 < self.k_tau < 1.0:
            raise DomainError(f"k_tau must be in (0, 1), got {self.k_tau}")
        if self.gamma_tau < 0.0:
            raise DomainError(f"gamma_tau must be >= 0, got {self.gamma_tau}")
        if self.chi_over_k < 0.0:
            raise DomainError(f"chi_over_k must be >= 0, got {self.chi_over_k}")
        if self.fsr_hz <= 0.0:
            raise DomainError(f"fsr_hz must be > 0, got {self.fsr_hz}")

    @property
    def tau_s(self):
        """Cavity round-trip time in seconds."""
        return 1.0 / self.fsr_hz

    @property
    def k(self):
        """Output-coupler loss rate, 1/s."""
        return self.k_tau * self.fsr_hz

    @property
    def gamma(self):
        """Extra intracavity loss rate, 1/s."""
        return self.gamma_tau * self.fsr_hz

    @property
    def k1(self):
        """Total loss rate k + gamma, 1/s."""
        return self.k + self.gamma

    @property
    def k1_tau(self):
        return self.k_tau + self.gamma_tau

    @property
    def chi(self):
        """Parametric amplitude gain, 1/s."""
        return self.chi_over_k * self.k

    @property
    def below_threshold(self):
        return self.chi < self.k1


@dataclass(frozen=True)
class SeedNoiseModel:
    """Gaussian-envelope model of the two technical noise sources.

    n_b: peak seed excess noise above shot noise (SNU).
    n_a: peak squared seed mean-field amplitude <X>^2 = <P>^2 (SNU).
    jitter_peak_rad_s: peak detuning std caused by cavity-length jitter.
    envelope_scale: denominator of the spectral envelope exponent
        exp(-omega^2/envelope_scale), rad^2/s^2.  All four spectral
        shapes share this envelope.
    """
    n_b: float = 1.0
    n_a: float = 1.0
    jitter_peak_rad_s: float = TWO_PI * 1e7
    envelope_scale: float = 4.0 * math.pi * 1e7

    def __post_init__(self):
        for name in ("n_b", "n_a", "jitter_peak_rad_s"):
            if getattr(self, name) < 0.0:
                raise DomainError(f"{name} must be >= 0, got {getattr(self, name)}")
        if self.envelope_scale <= 0.0:
            raise DomainError(
                f"envelope_scale must be > 0, got {self.envelope_scale}")

    @property
    def silent(self):
        """True when there is no technical noise at any frequency."""
        return self.n_b == 0.0 and self.n_a == 0.0 and self.jitter_peak_rad_s == 0.0


@dataclass(frozen=True)
class NoiseBreakdown:
    """Per-frequency technical-noise contributions in SNU.

    seed_noise and the two jitter terms add to the quadrature variances;
    the cov_* terms add to the cross covariances (cov_seed_* to the
    X-X/P-P blocks, cov_xp/cov_px to the X-P blocks).
    """
    seed_noise: float
    jitter_noise_x: float
    jitter_noise_p: float
    cov_seed_x: float
    cov_seed_p: float
    cov_xp: float
    cov_px: float

    def as_tuple(self):
        return (self.seed_noise, self.jitter_noise_x, self.jitter_noise_p,
                self.cov_seed_x, self.cov_seed_p, self.cov_xp, self.cov_px)

    @property
    def total_magnitude(self):
        """Sum of absolute values; the planner's cleanliness measure."""
        return sum(abs(v) for v in self.as_tuple())


def _require_below_threshold(params):
    if not params.below_threshold:
        raise AboveThreshold(
            f"chi/k = {params.chi_over_k} >= k1/k = "
            f"{1.0 + params.gamma_tau / params.k_tau}; no below-threshold "
            "steady state")


def steady_state_mean(params, seed_mean_s, seed_mean_i):
    """Intracavity steady-state mean fields of the signal and idler.

    seed means are the input-field amplitudes at the seed carrier (the
    cavity is on resonance, zero mean detuning).  The parametric
    interaction couples each mean to the conjugate of the other.
    """
    _require_below_threshold(params)
    k = params.k
    k1 = params.k1
    chi = params.chi
    den = k1 * k1 - chi * chi
    root = math.sqrt(2.0 * k)
    ms = complex(seed_mean_s)
    mi = complex(seed_mean_i)
    mean_s = (-root * chi * mi.conjugate() + root * k1 * ms) / den
    mean_i = (-root * chi * ms.conjugate() + root * k1 * mi) / den
    return mean_s, mean_i


def noise_breakdown(params, seed, omega):
    """Evaluate the seven technical-noise terms at analysis frequency omega.

    omega is angular (rad/s); any real value is accepted.  All terms die
    off with the shared Gaussian envelope, so MHz-scale noise never
    reaches GHz-scale comb teeth.
    """
    _require_below_threshold(params)
    terms = _k.seed_noise_terms(
        params.k_tau, params.gamma_tau, params.chi_over_k, params.fsr_hz,
        seed.n_b, seed.n_a, seed.jitter_peak_rad_s, seed.envelope_scale,
        omega)
    return NoiseBreakdown(*terms)


def source_covariance(params, seed, comb_index):
    """Output covariance of the comb-tooth pair at magnitude comb_index.

    Evaluated on resonance at omega = 2 pi n fsr: the quadrature
    variances are V0 plus the seed/jitter terms, the cross covariances
    are +/-C0 plus the seed covariance terms.  comb_index = 0 is allowed
    for diagnostics only (it is the seed carrier, never a network tooth).
    Returns the covariance together with the noise breakdown used.
    """
    if not isinstance(comb_index, int) or comb_index < 0:
        raise DomainError(f"comb_index must be an integer >= 0, got {comb_index!r}")
    _require_below_threshold(params)
    v0, c0 = _k.source_v0_c0(params.k_tau, params.gamma_tau, params.chi_over_k)
    omega = TWO_PI * comb_index * params.fsr_hz
    noise = noise_breakdown(params, seed, omega)
    a = v0 + noise.seed_noise + noise.jitter_noise_x
    cm = TwoModeCovariance(a=a, b=a,
                           c_x=c0 + noise.cov_seed_x,
                           c_p=-c0 + noise.cov_seed_p)
    report = check_physicality(cm)
    if not report.passed:
        raise NonPhysical(
            f"source covariance at tooth {comb_index} failed physicality "
            f"(min nu = {report.min_nu})")
    return cm, noise


def sideband_cleanliness(params, seed, comb_index):
    """Ratio of total technical noise at tooth n to its zero-frequency value.

    Used by the planner to certify that a tooth behaves like the
    noise-free resonant covariance.  By definition 1.0 at n = 0; exactly
    0.0 when the seed model carries no noise at all.
    """
    if not isinstance(comb_index, int) or comb_index < 0:
        raise DomainError(f"comb_index must be an integer >= 0, got {comb_index!r}")
    if comb_index == 0:
        return 1.0
    base = noise_breakdown(params, seed, 0.0).total_magnitude
    if base == 0.0:
        return 0.0
    at_tooth = noise_breakdown(
        params, seed, TWO_PI * comb_index * params.fsr_hz).total_magnitude
    return at_tooth / base


def fsr_from_cavity(length_cavity_m):
    """Free spectral range in Hz of a cavity of the given length."""
    if length_cavity_m <= 0.0:
        raise DomainError(f"cavity length must be > 0, got {length_cavity_m}")
    return LIGHT_SPEED_M_S / (2.0 * length_cavity_m)


def cavity_length_for_fsr(fsr_hz):
    """Inverse design rule: cavity length in m for a target FSR."""
    if fsr_hz <= 0.0:
        raise DomainError(f"target FSR must be > 0, got {fsr_hz}")
    return LIGHT_SPEED_M_S / (2.0 * fsr_hz)


def bandwidth_from_crystal(length_crystal_m):
    """Estimated down-conversion bandwidth in Hz for a crystal length."""
    if length_crystal_m <= 0.0:
        raise DomainError(f"crystal length must be > 0, got {length_crystal_m}")
    return 10.0 * LIGHT_SPEED_M_S / length_crystal_m


def crystal_length_for_bandwidth(bandwidth_hz):
    """Inverse design rule: crystal length in m for a target bandwidth."""
    if bandwidth_hz <= 0.0:
        raise DomainError(f"target bandwidth must be > 0, got {bandwidth_hz}")
    return 10.0 * LIGHT_SPEED_M_S / bandwidth_hz
