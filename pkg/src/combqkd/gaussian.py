"""Two-mode Gaussian state primitives.

States are described in shot-noise units (vacuum quadrature variance 1)
by the block covariance matrix

    [[a*I, diag(c_x, c_p)],
     [diag(c_x, c_p), b*I]]

The sources in this package always produce c_p = -c_x (X quadratures
anticorrelated, P correlated, or vice versa), so the correlation enters
every formula through c^2 = |c_x * c_p|.

Two conventions for the symplectic invariant Delta are supported:

* ``standard``: Delta = a^2 + b^2 - 2 c^2.  Under it a pure two-mode
  squeezed vacuum has both eigenvalues exactly 1.  Default.
* ``paper``: Delta = a^2 + b^2 - c^2, a published variant kept only for
  reproducing results that used it; it yields sub-unity eigenvalues on
  pure states, which are reported rather than raised.
"""
import math
from dataclasses import dataclass

from ._kernels import backend as _k
from .errors import DomainError, NonPhysical

CONVENTIONS = ("standard", "paper")

# eigenvalues may dip this far below 1 before a state counts as unphysical
NU_TOL = 1e-6
# structural tolerance for c_p = -c_x
SIGMA_Z_TOL = 1e-9


def delta_coefficient(convention):
    """Map a convention name to the coefficient of c^2 in Delta."""
    if convention == "standard":
        return 2.0
    if convention == "paper":
        return 1.0
    raise DomainError(
        f"unknown convention {convention!r}; expected one of {CONVENTIONS}")


def _require_finite(name, value):
    try:
        ok = math.isfinite(value)
    except TypeError:
        ok = False
    if not ok:
        raise DomainError(f"{name} must be a finite number, got {value!r}")


@dataclass(frozen=True)
class TwoModeCovariance:
    """Sigma_z-structured two-mode covariance matrix in shot-noise units.

    a, b are the (X = P) quadrature variances of modes A and B; c_x and
    c_p are the X-X and P-P cross covariances.  Variances below shot
    noise are rejected at construction; correlation physicality is the
    job of check_physicality / the eigenvalue operations.
    """
    a: float
    b: float
    c_x: float
    c_p: float

    def __post_init__(self):
        for name in ("a", "b", "c_x", "c_p"):
            _require_finite(name, getattr(self, name))
        if self.a < 1.0 - 1e-9 or self.b < 1.0 - 1e-9:
            raise DomainError(
                f"mode variances must be >= 1 SNU, got a={self.a}, b={self.b}")

    @classmethod
    def symmetric(cls, a, b, c):
        """Build the c_p = -c_x state from a single signed correlation c."""
        return cls(a=a, b=b, c_x=c, c_p=-c)

    @property
    def c(self):
        """Signed correlation representative (the X-X block)."""
        return self.c_x

    @property
    def c_squared(self):
        """|c_x * c_p|, the only way correlations enter the spectra here."""
        return abs(self.c_x * self.c_p)

    @property
    def sigma_z_deviation(self):
        """How far the state is from the exact c_p = -c_x structure."""
        return abs(self.c_x + self.c_p)

    def with_modes_swapped(self):
        """Relabel modes A and B (used to put the heterodyne user first)."""
        return TwoModeCovariance(a=self.b, b=self.a, c_x=self.c_x, c_p=self.c_p)


@dataclass(frozen=True)
class SymplecticPair:
    """An ordered pair of symplectic eigenvalues (nu1 >= nu2)."""
    nu1: float
    nu2: float

    def __iter__(self):
        return iter((self.nu1, self.nu2))


@dataclass(frozen=True)
class PhysicalityReport:
    """Diagnostic record for a covariance matrix; never raises."""
    min_nu: float
    purity_deviation: float  # |ab - c^2 - 1|
    sigma_z_deviation: float
    sigma_z_ok: bool
    passed: bool
    tolerance: float = NU_TOL


def symplectic_eigenvalues(cm, convention="standard"):
    """Symplectic spectrum of the joint state.

    Under ``standard`` an eigenvalue below 1 - NU_TOL raises NonPhysical;
    under ``paper`` sub-unity values are returned as-is.  A complex
    spectrum raises NonPhysical under either convention.
    """
    coeff = delta_coefficient(convention)
    nu1, nu2 = _k.nu_pair(cm.a, cm.b, cm.c_squared, coeff)
    if nu1 != nu1:
        raise NonPhysical(
            f"complex symplectic spectrum for a={cm.a}, b={cm.b}, c^2={cm.c_squared}")
    if convention == "standard" and nu2 < 1.0 - NU_TOL:
        raise NonPhysical(
            f"symplectic eigenvalue {nu2} below 1 for a={cm.a}, b={cm.b}, "
            f"c^2={cm.c_squared}")
    return SymplecticPair(nu1=nu1, nu2=nu2)


def heterodyne_conditioned_eigenvalues(cm, convention="standard"):
    """Spectrum of the state conditioned on heterodyne detection of mode A.

    Uses the same Delta convention as symplectic_eigenvalues.
    """
    coeff = delta_coefficient(convention)
    nu3, nu4 = _k.het_pair(cm.a, cm.b, cm.c_squared, coeff)
    if nu3 != nu3:
        raise NonPhysical(
            f"complex conditional spectrum for a={cm.a}, b={cm.b}, "
            f"c^2={cm.c_squared}")
    return SymplecticPair(nu1=nu3, nu2=nu4)


def bosonic_entropy(x):
    """Thermal-state von Neumann entropy G(x) in bits, G(0) = 0.

    x is the mean occupation (nu - 1)/2 of a thermal mode.
    """
    _require_finite("x", x)
    if x < 0.0:
        raise DomainError(f"entropy argument must be >= 0, got {x}")
    return _k.entropy_g(x)


def check_physicality(cm):
    """Diagnose a covariance matrix without raising.

    Reports the minimum symplectic eigenvalue under the standard
    convention, the purity deviation |ab - c^2 - 1| and whether the
    c_p = -c_x structure holds.  ``passed`` requires min_nu >= 1 - NU_TOL.
    """
    c2 = cm.c_squared
    nu1, nu2 = _k.nu_pair(cm.a, cm.b, c2, 2.0)
    min_nu = nu2 if nu2 == nu2 else float("nan")
    purity_dev = abs(cm.a * cm.b - c2 - 1.0)
    szd = cm.sigma_z_deviation
    scale = max(abs(cm.c_x), abs(cm.c_p), 1.0)
    sigma_z_ok = szd <= SIGMA_Z_TOL * scale
    passed = min_nu == min_nu and min_nu >= 1.0 - NU_TOL
    return PhysicalityReport(min_nu=min_nu, purity_deviation=purity_dev,
                             sigma_z_deviation=szd, sigma_z_ok=sigma_z_ok,
                             passed=passed)
