"""Pure-Python scalar kernels.

These are the hot inner-loop formulas shared by every sweep point: the
below-threshold source covariance, the loss/channel maps, symplectic
eigenvalues, the bosonic entropy function and the key-rate chain.

combqkd._kernels._fast is a compiled twin of this module.  Keep the two
in lockstep: same operation order, same clamping rules, so that results
agree to a few ulp.  Invalid inputs yield NaN here; callers translate
NaN into typed exceptions.
"""
import math

# radicands in [-RADICAND_TOL, 0) are rounding debris (a = b makes the
# discriminant exactly zero in exact arithmetic); anything more negative
# is a genuinely complex spectrum
RADICAND_TOL = 1e-9

COMPILED = False


def entropy_g(x):
    """Bosonic thermal entropy (x+1)log2(x+1) - x log2 x in bits; 0 for x <= 0."""
    if x <= 0.0:
        return 0.0
    return (x + 1.0) * math.log2(x + 1.0) - x * math.log2(x)


def _clamped_sqrt(value):
    if value < 0.0:
        if value < -RADICAND_TOL:
            return math.nan
        value = 0.0
    return math.sqrt(value)


def nu_pair(a, b, c2, delta_coeff):
    """Symplectic eigenvalues (nu1 >= nu2) of [[a,c],[c,b]]-block states.

    delta_coeff selects the invariant: 2.0 for a^2 + b^2 - 2c^2, 1.0 for
    the a^2 + b^2 - c^2 variant.  Returns (nan, nan) when the spectrum is
    complex beyond tolerance.
    """
    delta = a * a + b * b - delta_coeff * c2
    d = a * b - c2
    root = _clamped_sqrt(delta * delta - 4.0 * d * d)
    nu1 = _clamped_sqrt(0.5 * (delta + root))
    nu2 = _clamped_sqrt(0.5 * (delta - root))
    return nu1, nu2


def het_pair(a, b, c2, delta_coeff):
    """Symplectic eigenvalues of mode B's state conditioned on heterodyning mode A."""
    delta = a * a + b * b - delta_coeff * c2
    d = a * b - c2
    big_a = (a + b * d + delta) / (a + 1.0)
    big_b = d * (b + d) / (a + 1.0)
    root = _clamped_sqrt(big_a * big_a - 4.0 * big_b)
    nu3 = _clamped_sqrt(0.5 * (big_a + root))
    nu4 = _clamped_sqrt(0.5 * (big_a - root))
    return nu3, nu4


def mutual_info(a, b, c2):
    """Heterodyne(A)-homodyne(B) mutual information in bits; NaN if degenerate."""
    den = a + 1.0 - c2 / b
    if den <= 0.0:
        return math.nan
    return 0.5 * math.log2((a + 1.0) / den)


def holevo(a, b, c2, delta_coeff):
    """Eavesdropper information bound in bits, plus all four eigenvalues.

    Entropy arguments below zero contribute 0 (covers both rounding
    clamps and sub-unity eigenvalues under the non-default invariant).
    """
    nu1, nu2 = nu_pair(a, b, c2, delta_coeff)
    nu3, nu4 = het_pair(a, b, c2, delta_coeff)
    if nu1 != nu1 or nu3 != nu3:
        return math.nan, nu1, nu2, nu3, nu4
    chi = (entropy_g(0.5 * (nu1 - 1.0)) + entropy_g(0.5 * (nu2 - 1.0))
           - entropy_g(0.5 * (nu3 - 1.0)) - entropy_g(0.5 * (nu4 - 1.0)))
    return chi, nu1, nu2, nu3, nu4


def keyrate_terms(a, b, c2, beta, delta_coeff):
    """Full per-point chain: (I_AB, chi_AE, K, nu1, nu2, nu3, nu4)."""
    iab = mutual_info(a, b, c2)
    chi, nu1, nu2, nu3, nu4 = holevo(a, b, c2, delta_coeff)
    key = beta * iab - chi
    return iab, chi, key, nu1, nu2, nu3, nu4


def source_v0_c0(k_tau, gamma_tau, chi_over_k):
    """Resonant output variance V0 and X-X covariance C0 of the source.

    Both are ratios of homogeneous polynomials in the loss/gain rates, so
    only the ratios gamma/k and chi/k enter; rates are normalized to k = 1.
    """
    g = gamma_tau / k_tau
    x = chi_over_k
    k1 = 1.0 + g
    den = k1 * k1 - x * x
    den2 = den * den
    x2 = x * x
    poly = 1.0 + x2 - g * g
    v0 = (4.0 * k1 * x2 + poly * poly + 4.0 * g * k1 * k1) / den2
    c0 = (-4.0 * x * poly - 8.0 * k1 * g * x) / den2
    return v0, c0


def pure_loss(a, b, cx, cp, eta1, eta2):
    """Beam-splitter loss eta1/eta2 on modes A/B mixing in vacuum."""
    f = math.sqrt(eta1 * eta2)
    return (eta1 * a + 1.0 - eta1,
            eta2 * b + 1.0 - eta2,
            f * cx,
            f * cp)


def channel(a, b, cx, cp, t1, t2, eps1, eps2, eta_det, v_el, eta_ws):
    """Fiber arms with excess noise, then waveshaper loss and detectors.

    Uses the regularized form t*eps + (1 - t) for the thermal-channel
    added noise, which stays finite at t = 1.
    """
    th = eta_ws * eta_det
    ares = th * (t1 * a + t1 * eps1 + 1.0 - t1) + 1.0 - th + v_el
    bres = th * (t2 * b + t2 * eps2 + 1.0 - t2) + 1.0 - th + v_el
    f = th * math.sqrt(t1 * t2)
    return ares, bres, f * cx, f * cp


def seed_noise_terms(k_tau, gamma_tau, chi_over_k, fsr_hz,
                     n_b, n_a, jitter_peak, envelope_scale, omega):
    """Technical-noise terms at analysis frequency omega (rad/s).

    Returns (seed_noise, jitter_x, jitter_p, cov_seed_x, cov_seed_p,
    cov_xp, cov_px) in shot-noise units.  The seed excess noise, the
    detuning-jitter std and the squared seed mean fields all carry the
    same Gaussian envelope exp(-omega^2/envelope_scale).
    """
    tau = 1.0 / fsr_hz
    k = k_tau * fsr_hz
    g = gamma_tau * fsr_hz
    chi = chi_over_k * k
    k1 = k + g
    den = k1 * k1 - chi * chi
    den2 = den * den
    env = math.exp(-(omega * omega) / envelope_scale)
    seed_in = n_b * env
    k2 = k * k
    chi2 = chi * chi
    poly = k2 + chi2 - g * g
    seed = (4.0 * k2 * chi2 + poly * poly) * seed_in / den2
    sig = jitter_peak * env
    tau2 = tau * tau
    jit = 4.0 * k2 * (tau2 * tau2) * (n_a * env) * (sig * sig)
    cov_seed = -4.0 * k * chi * poly * seed_in / den2 - jit
    cov_jit = -jit
    return seed, jit, jit, cov_seed, cov_seed, cov_jit, cov_jit
