"""Propagation of the source state to the two users' detectors.

Covers the central-node insertion losses, the fiber arms (loss plus
excess noise referred to the channel input), the receiver waveshaper
insertion loss and the detectors (efficiency eta, electronic noise
v_el).  Both users share the same detector model; the two arms may
differ in length, transmittance and excess noise.

dB inputs use the power convention T = 10^(dB/10); attenuation is stored
as a positive magnitude in dB/km.
"""
from dataclasses import dataclass

from ._kernels import backend as _k
from .errors import DomainError, NonPhysical
from .gaussian import TwoModeCovariance, check_physicality


def db_to_linear(db):
    """Convert a dB figure (loss as negative dB) to linear transmittance."""
    return 10.0 ** (db / 10.0)


def fiber_transmittance(length_km, alpha_db_per_km=0.2):
    """Linear transmittance of a fiber span; alpha is a positive magnitude."""
    if length_km < 0.0:
        raise DomainError(f"fiber length must be >= 0, got {length_km}")
    if alpha_db_per_km <= 0.0:
        raise DomainError(
            f"attenuation magnitude must be > 0, got {alpha_db_per_km}")
    return 10.0 ** (-alpha_db_per_km * length_km / 10.0)


@dataclass(frozen=True)
class LinkParams:
    """Everything between the source output and the two measurement records.

    eta1/eta2 are the central-node insertion transmittances of the two
    modes, L1_km/L2_km the fiber arm lengths, eps1/eps2 the channel
    excess noises (SNU, referred to the channel input), eta_det/v_el the
    shared detector efficiency and electronic noise, eta_ws the receiver
    waveshaper transmittance and beta the reconciliation efficiency.
    """
    eta1: float = 1.0
    eta2: float = 1.0
    L1_km: float = 0.0
    L2_km: float = 0.0
    alpha_db_per_km: float = 0.2
    eps1: float = 0.01
    eps2: float = 0.01
    eta_det: float = 1.0
    v_el: float = 0.0
    eta_ws: float = db_to_linear(-0.2)
    beta: float = 0.98

    def __post_init__(self):
        for name in ("eta1", "eta2", "eta_det", "eta_ws"):
            value = getattr(self, name)
            if not 0.0 < value <= 1.0:
                raise DomainError(f"{name} must be in (0, 1], got {value}")
        for name in ("L1_km", "L2_km", "eps1", "eps2", "v_el"):
            value = getattr(self, name)
            if value < 0.0:
                raise DomainError(f"{name} must be >= 0, got {value}")
        if self.alpha_db_per_km <= 0.0:
            raise DomainError(
                f"alpha_db_per_km must be > 0, got {self.alpha_db_per_km}")
        if not 0.0 < self.beta <= 1.0:
            raise DomainError(f"beta must be in (0, 1], got {self.beta}")

    @property
    def t1(self):
        return fiber_transmittance(self.L1_km, self.alpha_db_per_km)

    @property
    def t2(self):
        return fiber_transmittance(self.L2_km, self.alpha_db_per_km)


def apply_source_loss(cm, eta1, eta2):
    """Mix each mode with vacuum on a beam splitter of transmittance eta."""
    for name, value in (("eta1", eta1), ("eta2", eta2)):
        if not 0.0 < value <= 1.0:
            raise DomainError(f"{name} must be in (0, 1], got {value}")
    a, b, cx, cp = _k.pure_loss(cm.a, cm.b, cm.c_x, cm.c_p, eta1, eta2)
    return TwoModeCovariance(a=a, b=b, c_x=cx, c_p=cp)


def received_covariance(cm_out, link):
    """Covariance at the two detectors given the central-node output state.

    The thermal-channel added noise is evaluated as t*eps + (1 - t),
    which equals (1 - t)*W for t < 1 and stays finite at t = 1, so
    zero-length arms are valid sweep points.
    """
    a, b, cx, cp = _k.channel(
        cm_out.a, cm_out.b, cm_out.c_x, cm_out.c_p,
        link.t1, link.t2, link.eps1, link.eps2,
        link.eta_det, link.v_el, link.eta_ws)
    result = TwoModeCovariance(a=a, b=b, c_x=cx, c_p=cp)
    report = check_physicality(result)
    if not report.passed:
        raise NonPhysical(
            f"received covariance failed physicality (min nu = {report.min_nu})")
    return result
