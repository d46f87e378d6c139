# cython: language_level=3, boundscheck=False, cdivision=True
"""Compiled twin of combqkd._kernels.pure.

Same formulas, same operation order, same clamping rules; see the pure
module for documentation.  Keep the two in lockstep.
"""
from libc.math cimport exp, log2, sqrt, NAN

RADICAND_TOL = 1e-9
cdef double _RAD_TOL = 1e-9

COMPILED = True


cdef inline double _entropy_g(double x) nogil:
    if x <= 0.0:
        return 0.0
    return (x + 1.0) * log2(x + 1.0) - x * log2(x)


cdef inline double _clamped_sqrt(double value) nogil:
    if value < 0.0:
        if value < -_RAD_TOL:
            return NAN
        value = 0.0
    return sqrt(value)


def entropy_g(double x):
    return _entropy_g(x)


def nu_pair(double a, double b, double c2, double delta_coeff):
    cdef double delta = a * a + b * b - delta_coeff * c2
    cdef double d = a * b - c2
    cdef double root = _clamped_sqrt(delta * delta - 4.0 * d * d)
    return _clamped_sqrt(0.5 * (delta + root)), _clamped_sqrt(0.5 * (delta - root))


def het_pair(double a, double b, double c2, double delta_coeff):
    cdef double delta = a * a + b * b - delta_coeff * c2
    cdef double d = a * b - c2
    cdef double big_a = (a + b * d + delta) / (a + 1.0)
    cdef double big_b = d * (b + d) / (a + 1.0)
    cdef double root = _clamped_sqrt(big_a * big_a - 4.0 * big_b)
    return _clamped_sqrt(0.5 * (big_a + root)), _clamped_sqrt(0.5 * (big_a - root))


cdef inline double _mutual_info(double a, double b, double c2) nogil:
    cdef double den = a + 1.0 - c2 / b
    if den <= 0.0:
        return NAN
    return 0.5 * log2((a + 1.0) / den)


def mutual_info(double a, double b, double c2):
    return _mutual_info(a, b, c2)


def holevo(double a, double b, double c2, double delta_coeff):
    cdef double delta = a * a + b * b - delta_coeff * c2
    cdef double d = a * b - c2
    cdef double root = _clamped_sqrt(delta * delta - 4.0 * d * d)
    cdef double nu1 = _clamped_sqrt(0.5 * (delta + root))
    cdef double nu2 = _clamped_sqrt(0.5 * (delta - root))
    cdef double big_a = (a + b * d + delta) / (a + 1.0)
    cdef double big_b = d * (b + d) / (a + 1.0)
    cdef double root2 = _clamped_sqrt(big_a * big_a - 4.0 * big_b)
    cdef double nu3 = _clamped_sqrt(0.5 * (big_a + root2))
    cdef double nu4 = _clamped_sqrt(0.5 * (big_a - root2))
    cdef double chi
    if nu1 != nu1 or nu3 != nu3:
        return NAN, nu1, nu2, nu3, nu4
    chi = (_entropy_g(0.5 * (nu1 - 1.0)) + _entropy_g(0.5 * (nu2 - 1.0))
           - _entropy_g(0.5 * (nu3 - 1.0)) - _entropy_g(0.5 * (nu4 - 1.0)))
    return chi, nu1, nu2, nu3, nu4


def keyrate_terms(double a, double b, double c2, double beta, double delta_coeff):
    cdef double iab = _mutual_info(a, b, c2)
    chi, nu1, nu2, nu3, nu4 = holevo(a, b, c2, delta_coeff)
    return iab, chi, beta * iab - chi, nu1, nu2, nu3, nu4


def source_v0_c0(double k_tau, double gamma_tau, double chi_over_k):
    cdef double g = gamma_tau / k_tau
    cdef double x = chi_over_k
    cdef double k1 = 1.0 + g
    cdef double den = k1 * k1 - x * x
    cdef double den2 = den * den
    cdef double x2 = x * x
    cdef double poly = 1.0 + x2 - g * g
    cdef double v0 = (4.0 * k1 * x2 + poly * poly + 4.0 * g * k1 * k1) / den2
    cdef double c0 = (-4.0 * x * poly - 8.0 * k1 * g * x) / den2
    return v0, c0


def pure_loss(double a, double b, double cx, double cp, double eta1, double eta2):
    cdef double f = sqrt(eta1 * eta2)
    return eta1 * a + 1.0 - eta1, eta2 * b + 1.0 - eta2, f * cx, f * cp


def channel(double a, double b, double cx, double cp, double t1, double t2,
            double eps1, double eps2, double eta_det, double v_el, double eta_ws):
    cdef double th = eta_ws * eta_det
    cdef double ares = th * (t1 * a + t1 * eps1 + 1.0 - t1) + 1.0 - th + v_el
    cdef double bres = th * (t2 * b + t2 * eps2 + 1.0 - t2) + 1.0 - th + v_el
    cdef double f = th * sqrt(t1 * t2)
    return ares, bres, f * cx, f * cp


def seed_noise_terms(double k_tau, double gamma_tau, double chi_over_k, double fsr_hz,
                     double n_b, double n_a, double jitter_peak, double envelope_scale,
                     double omega):
    cdef double tau = 1.0 / fsr_hz
    cdef double k = k_tau * fsr_hz
    cdef double g = gamma_tau * fsr_hz
    cdef double chi = chi_over_k * k
    cdef double k1 = k + g
    cdef double den = k1 * k1 - chi * chi
    cdef double den2 = den * den
    cdef double env = exp(-(omega * omega) / envelope_scale)
    cdef double seed_in = n_b * env
    cdef double k2 = k * k
    cdef double chi2 = chi * chi
    cdef double poly = k2 + chi2 - g * g
    cdef double seed = (4.0 * k2 * chi2 + poly * poly) * seed_in / den2
    cdef double sig = jitter_peak * env
    cdef double tau2 = tau * tau
    cdef double jit = 4.0 * k2 * (tau2 * tau2) * (n_a * env) * (sig * sig)
    cdef double cov_seed = -4.0 * k * chi * poly * seed_in / den2 - jit
    return seed, jit, jit, cov_seed, cov_seed, -jit, -jit
