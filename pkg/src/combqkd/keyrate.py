"""Asymptotic secret key rate for one user pair.

Direct reconciliation with the reference user (mode A) heterodyning and
the other user (mode B) homodyning, secure against collective Gaussian
attacks: K = beta * I_AB - chi_AE.  Asymptotic regime only; no
finite-size or composable corrections.
"""
from dataclasses import dataclass

from ._kernels import backend as _k
from .errors import DomainError, NonPhysical
from .gaussian import delta_coefficient

REGIME = "asymptotic"


@dataclass(frozen=True)
class KeyRateReport:
    """Flat, serialization-ready result of one key-rate evaluation."""
    i_ab_bits: float
    chi_ae_bits: float
    key_rate_bits: float
    nu1: float
    nu2: float
    nu3: float
    nu4: float
    convention: str
    secure: bool
    a_snu: float
    b_snu: float
    c_snu: float
    beta: float
    # set when the non-default convention produced sub-unity eigenvalues,
    # whose entropy terms are clamped to zero
    subunity_nu: bool = False
    regime: str = REGIME

    def to_record(self):
        """Stable flat mapping used for CSV rows and JSON objects."""
        return {
            "i_ab_bits": self.i_ab_bits,
            "chi_ae_bits": self.chi_ae_bits,
            "key_rate_bits": self.key_rate_bits,
            "nu1": self.nu1,
            "nu2": self.nu2,
            "nu3": self.nu3,
            "nu4": self.nu4,
            "convention": self.convention,
            "secure": self.secure,
            "a_snu": self.a_snu,
            "b_snu": self.b_snu,
            "c_snu": self.c_snu,
            "beta": self.beta,
            "subunity_nu": self.subunity_nu,
            "regime": self.regime,
        }


def mutual_information(cm):
    """Shannon information between A's heterodyne and B's homodyne data, bits."""
    iab = _k.mutual_info(cm.a, cm.b, cm.c_squared)
    if iab != iab:
        raise NonPhysical(
            f"conditional variance a + 1 - c^2/b <= 0 for a={cm.a}, "
            f"b={cm.b}, c^2={cm.c_squared}")
    return iab


def holevo_bound(cm, convention="standard"):
    """Eavesdropper information bound in bits, plus all four eigenvalues.

    Under the non-default convention sub-unity eigenvalues are reported
    raw and their entropy terms clamp to zero (the flag on the report
    records this); under ``standard`` they raise NonPhysical.
    """
    coeff = delta_coefficient(convention)
    chi, nu1, nu2, nu3, nu4 = _k.holevo(cm.a, cm.b, cm.c_squared, coeff)
    if chi != chi:
        raise NonPhysical(
            f"complex symplectic spectrum for a={cm.a}, b={cm.b}, "
            f"c^2={cm.c_squared}")
    if convention == "standard" and nu2 < 1.0 - 1e-6:
        raise NonPhysical(
            f"symplectic eigenvalue {nu2} below 1 for a={cm.a}, b={cm.b}, "
            f"c^2={cm.c_squared}")
    return chi, (nu1, nu2, nu3, nu4)


def key_rate(cm, beta, convention="standard"):
    """Assemble the full report; K may be negative (secure = False)."""
    if not 0.0 <= beta <= 1.0:
        raise DomainError(f"beta must be in [0, 1], got {beta}")
    iab = mutual_information(cm)
    chi, nus = holevo_bound(cm, convention)
    key = beta * iab - chi
    subunity = min(nus) < 1.0 - 1e-6
    return KeyRateReport(
        i_ab_bits=iab, chi_ae_bits=chi, key_rate_bits=key,
        nu1=nus[0], nu2=nus[1], nu3=nus[2], nu4=nus[3],
        convention=convention, secure=key > 0.0,
        a_snu=cm.a, b_snu=cm.b, c_snu=cm.c, beta=beta,
        subunity_nu=subunity)
