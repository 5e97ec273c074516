"""Complex Gamma function and the universal coefficients attached to a saddle.

Everything phase-sensitive is assembled as a complex logarithm and
exponentiated once.  The logarithms are continuous in the real parameter
``eps`` (they come from the principal branch of ln Gamma, whose imaginary
part is continuous on the right half-plane), which is what the secular
phase functions downstream rely on.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "Epsilon2Series",
    "TransferMatrix",
    "cal_e",
    "divalent_constant",
    "divalent_constant_cosine_form",
    "log_cal_e",
    "log_divalent_constant",
    "log_gamma",
    "log_one_plus_i_exp",
    "log_zeta",
    "parse_sign",
    "stirling_phase",
    "transfer_matrix",
    "transfer_matrix_gamma_form",
    "transfer_swap_identity_check",
    "zeta",
]

LANCZOS_G = 7.0
LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _scalar_or_array(x: np.ndarray):
    return complex(x) if x.ndim == 0 else x


def parse_sign(sign) -> int:
    """Map ``'+'``/``'-'`` (or ``+1``/``-1``) to an integer sign."""
    if sign in ("+", 1, +1.0):
        return 1
    if sign in ("-", "−", -1, -1.0):
        return -1
    raise ValueError(f"sign must be '+' or '-', got {sign!r}")


def log_gamma(z):
    """Principal branch of ln Gamma(z) for Re z > 0.

    Lanczos approximation (g = 7, nine coefficients) evaluated in log
    space.  For Re z < 1/2 the recurrence ln Gamma(z) = ln Gamma(z+1) - ln z
    is applied first; both terms are continuous on the right half-plane so
    the imaginary part stays continuous (no 2*pi jumps).

    Accepts a scalar or an array; returns the same shape.
    """
    z = np.asarray(z, dtype=complex)
    if np.any(~np.isfinite(z)):
        raise DomainError("log_gamma: non-finite argument")
    if np.any(z.real <= 0.0):
        raise DomainError("log_gamma: requires Re z > 0")
    small = z.real < 0.5
    w = np.where(small, z + 1.0, z)
    x = w - 1.0
    series = np.full_like(x, LANCZOS_COEF[0])
    for k, c in enumerate(LANCZOS_COEF[1:], start=1):
        series = series + c / (x + k)
    t = x + LANCZOS_G + 0.5
    out = _HALF_LOG_2PI + (x + 0.5) * np.log(t) - t + np.log(series)
    out = np.where(small, out - np.log(z), out)
    return _scalar_or_array(out)


def log_one_plus_i_exp(sign, t):
    """ln(1 + i*sign*e^t) for real t, without overflow for large t.

    Since the real part of 1 + i*x is 1 the principal logarithm is
    continuous in t.
    """
    s = parse_sign(sign)
    t = np.asarray(t, dtype=float)
    u = np.exp(-np.abs(t))
    re = np.maximum(t, 0.0) + 0.5 * np.log1p(u * u)
    im = np.where(t <= 0.0, np.arctan(u), 0.5 * math.pi - np.arctan(u))
    return _scalar_or_array(re + 1j * s * im)


def log_cal_e(eps, h: float):
    """ln of the saddle coefficient (2 pi)^(-1/2) Gamma(1/2 + i eps) e^{eps(pi/2 + i ln h)}."""
    if h <= 0:
        raise DomainError("h must be positive")
    eps = np.asarray(eps, dtype=float)
    lg = np.asarray(log_gamma(0.5 + 1j * eps))
    out = lg - _HALF_LOG_2PI + eps * (0.5 * math.pi + 1j * math.log(h))
    return _scalar_or_array(out)


def cal_e(eps, h: float):
    """Saddle coefficient; modulus squared equals 1/(1 + e^{-2 pi eps})."""
    return _scalar_or_array(np.exp(np.asarray(log_cal_e(eps, h))))


@dataclass(frozen=True)
class TransferMatrix:
    """Row-major 2x2 complex matrix [[a, b], [c, d]]."""

    a: complex
    b: complex
    c: complex
    d: complex

    def array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    def cross_ratio(self) -> complex:
        return (self.a * self.d) / (self.b * self.c)

    def conj_transpose(self) -> "TransferMatrix":
        return TransferMatrix(
            self.a.conjugate(), self.c.conjugate(), self.b.conjugate(), self.d.conjugate()
        )


def transfer_matrix(eps: float, h: float) -> TransferMatrix:
    """Standard-basis transfer matrix at a saddle.

    T = e^{-i pi/4} E [[1, w], [w, 1]] with w = i e^{-eps pi}.  Moduli
    and phases are assembled separately so that a huge e^{-eps pi} never
    multiplies a tiny E.
    """
    eps = float(eps)
    # modulus from |E|^2 = 1/(1 + e^{-2 pi eps}) keeps T unitary to rounding
    t = -2.0 * math.pi * abs(eps)
    small = math.exp(0.5 * t)
    norm = 1.0 / math.sqrt(1.0 + math.exp(t))
    mod_diag, mod_off = (norm, small * norm) if eps >= 0 else (small * norm, norm)
    theta = complex(log_cal_e(eps, h)).imag
    diag = mod_diag * cmath.exp(1j * (theta - 0.25 * math.pi))
    off = mod_off * cmath.exp(1j * (theta + 0.25 * math.pi))
    return TransferMatrix(diag, off, off, diag)


def transfer_matrix_gamma_form(eps: float, h: float) -> TransferMatrix:
    """Same matrix written with beta = 1/2 + i eps:
    (2 pi h)^(-1/2) Gamma(beta) h^beta [[e^{-i beta pi/2}, e^{i beta pi/2}], [.., ..]].
    """
    beta = 0.5 + 1j * float(eps)
    base = complex(log_gamma(beta)) + beta * math.log(h) - 0.5 * math.log(2.0 * math.pi * h)
    diag = cmath.exp(base - 0.5j * math.pi * beta)
    off = cmath.exp(base + 0.5j * math.pi * beta)
    return TransferMatrix(diag, off, off, diag)


def transfer_swap_identity_check(eps: float, h: float) -> float:
    """Max entrywise deviation of T(eps) T(-eps) from the swap matrix."""
    prod = transfer_matrix(eps, h).array() @ transfer_matrix(-eps, h).array()
    swap = np.array([[0, 1], [1, 0]], dtype=complex)
    return float(np.max(np.abs(prod - swap)))


def log_divalent_constant(n: int, eps, h: float):
    """ln of the divalent constant e^{-i pi/4} e^{-i n pi/2} E (1 + i (-1)^n e^{-eps pi}).

    Only n mod 4 enters; reducing first keeps the phase independent of the
    size of n.
    """
    n4 = int(n) % 4
    eps = np.asarray(eps, dtype=float)
    sign = 1 if n4 % 2 == 0 else -1
    out = (
        np.asarray(log_cal_e(eps, h))
        - 0.25j * math.pi
        - 0.5j * math.pi * n4
        + np.asarray(log_one_plus_i_exp(sign, -math.pi * eps))
    )
    return _scalar_or_array(out)


def divalent_constant(n: int, eps, h: float):
    """Unimodular constant attached to a divalent vertex."""
    return _scalar_or_array(np.exp(np.asarray(log_divalent_constant(n, eps, h))))


def divalent_constant_cosine_form(n: int, eps: float, h: float) -> complex:
    """sqrt(2/(pi h)) Gamma(beta) h^beta cos(pi (beta + n)/2), beta = 1/2 + i eps."""
    beta = 0.5 + 1j * float(eps)
    pre = cmath.exp(complex(log_gamma(beta)) + beta * math.log(h))
    return math.sqrt(2.0 / (math.pi * h)) * pre * cmath.cos(0.5 * math.pi * (beta + n))


@dataclass(frozen=True)
class Epsilon2Series:
    """Two-term expansion e2_0 + h e2_1 of the singular invariant times h."""

    e2_0: float
    e2_1: float = 0.0

    def value(self, h: float) -> float:
        return self.e2_0 + h * self.e2_1


def log_zeta(sign, e2: Epsilon2Series, h: float) -> complex:
    """ln zeta^{+/-}; the imaginary part is continuous in e2."""
    s = parse_sign(sign)
    eps = e2.value(h) / h
    le = complex(log_cal_e(eps, h))
    if s > 0:
        return le - 0.25j * math.pi
    return le + 0.25j * math.pi - math.pi * eps


def zeta(sign, e2: Epsilon2Series, h: float) -> complex:
    """zeta^{+/-} = (2 pi h)^(-1/2) Gamma(beta) h^beta e^{-/+ i beta pi/2}, beta = 1/2 + i e2/h."""
    return cmath.exp(log_zeta(sign, e2, h))


def stirling_phase(sign, e2: Epsilon2Series, h: float) -> float:
    """Leading Stirling truncation of (1/i) ln zeta^{+/-}.

    (1/h)(e0 ln|e0| - e0) + e1 ln|e0| -/+ pi/4; singular on the critical
    curve e0 = 0, where the exact zeta must be used instead.
    """
    s = parse_sign(sign)
    e0, e1 = e2.e2_0, e2.e2_1
    if e0 == 0.0:
        raise DomainError("stirling_phase: e2_0 = 0 is the logarithmic singularity")
    lg = math.log(abs(e0))
    return (e0 * lg - e0) / h + e1 * lg - s * 0.25 * math.pi
