"""The 1:2 resonance: H1 the harmonic oscillator, H2 the cubic resonant term.

On the energy level E1 = 1 the first quantization condition fixes
h = 1/(n + 3/2).  The singular fibre reduces to a single divalent vertex
carrying one loop, so the spectrum is governed by one scalar phase.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.integrate import quad

from . import specfun
from .comparison import ComparisonTable, pair_spectra
from .errors import ModelError, QuadratureError
from .graphbs import Edge, GlobalQuantum, PhaseSeries, ReducedGraph, Vertex
from .linalg import SymTridiag, eig_sym_tridiag, find_phase_roots

__all__ = [
    "CLASSICAL_BOUND",
    "Reso12Model",
    "compare",
    "graph",
    "holonomy",
    "model",
    "quantum_matrix",
    "quantum_spectrum_scaled",
    "regularized_kappa_check",
    "secular_phase",
    "semiclassical_spectrum",
    "spacing_law_check",
]

# |E2| <= 4/(3 sqrt 3) on E1 = 1 (image of the momentum map: 16 X^3 >= 27 Y^2)
CLASSICAL_BOUND = 4.0 / (3.0 * math.sqrt(3.0))


@dataclass(frozen=True)
class Reso12Model:
    n: int

    @property
    def h(self) -> float:
        return 1.0 / (self.n + 1.5)

    action_q = 0.5 * math.pi
    subprincipal_coeff = 1.5 * math.log(2.0)
    eps2_coeff = 0.5

    @property
    def maslov_reg(self) -> float:
        return -2.0 + (0.5 + self.n)


def model(n: int) -> Reso12Model:
    if int(n) != n or n < 0:
        raise ModelError(f"n must be a non-negative integer, got {n!r}")
    return Reso12Model(int(n))


def _require_matrix_n(n: int) -> None:
    if int(n) != n or n < 2:
        raise ModelError(f"the quantum matrix needs an integer n >= 2, got {n!r}")


def quantum_matrix(n: int) -> SymTridiag:
    """Matrix of H2 on the n-th eigenspace of H1 (zero diagonal)."""
    _require_matrix_n(n)
    h = model(n).h
    pre = math.sqrt(2.0) * h**1.5
    off = [
        pre * math.sqrt(ell * (n - 2 * ell + 1) * (n - 2 * ell + 2))
        for ell in range(1, n // 2 + 1)
    ]
    return SymTridiag((0.0,) * (n // 2 + 1), tuple(off))


def quantum_spectrum_scaled(n: int) -> list[float]:
    """Eigenvalues of the quantum matrix in the scaled variable e = E2 / h."""
    h = model(n).h
    return [x / h for x in eig_sym_tridiag(quantum_matrix(n))]


def secular_phase(e, n: int):
    """Continuous phase whose crossings of 2 pi Z are the semiclassical e.

    arg of (1 + i(-1)^n e^{-e pi/2}) Gamma(1/2 + ie/2) e^{(e/2)(pi/2 - i ln(n+3/2))}
    minus the phase (3/2) e ln 2 - pi n/2 + pi/4; n enters the constant
    only through n mod 4.
    """
    m = model(n)
    e = np.asarray(e, dtype=float)
    sign = 1 if m.n % 2 == 0 else -1
    lhs = (
        np.imag(specfun.log_one_plus_i_exp(sign, -0.5 * math.pi * e))
        + np.imag(specfun.log_gamma(0.5 + 0.5j * e))
        - 0.5 * e * math.log(m.n + 1.5)
    )
    rhs = m.subprincipal_coeff * e - 0.5 * math.pi * (m.n % 4) + 0.25 * math.pi
    out = lhs - rhs
    return float(out) if out.ndim == 0 else out


def holonomy(e: float, n: int) -> PhaseSeries:
    """Holonomy of the loop through the divalent vertex, as g_m1/h + g_0."""
    m = model(n)
    eps = m.eps2_coeff * e
    return PhaseSeries(m.action_q, 2.0 * m.subprincipal_coeff * eps + 0.5 * math.pi * m.maslov_reg)


def graph(n: int) -> tuple[ReducedGraph, GlobalQuantum]:
    """One divalent vertex with one loop; the loop is the only cycle."""
    m = model(n)
    vertex = Vertex(0, 2, lambda e: m.eps2_coeff * e, (0, 0))
    g = ReducedGraph([vertex], [Edge(0, 0)], {0: lambda e: holonomy(e, m.n)})
    quantum = GlobalQuantum(m.n, m.h, 1.0, -1.5)
    return g, quantum


def _warn_window(n: int, window: tuple[float, float]) -> None:
    h = model(n).h
    if max(abs(window[0]), abs(window[1])) * h > CLASSICAL_BOUND:
        warnings.warn(
            f"window {window} exceeds the classical range |h e| <= {CLASSICAL_BOUND:.4f} at n={n}",
            RuntimeWarning,
            stacklevel=3,
        )


def semiclassical_spectrum(
    n: int,
    window: tuple[float, float] = (-5.0, 5.0),
    step: float = 0.01,
    tol: float = 1e-10,
) -> list[float]:
    _warn_window(n, window)
    return find_phase_roots(lambda e: secular_phase(e, n), window, step, tol)


def compare(
    n: int,
    window: tuple[float, float] = (-5.0, 5.0),
    step: float = 0.01,
    tol: float = 1e-10,
) -> ComparisonTable:
    if not window[0] < window[1]:
        return ComparisonTable()
    return pair_spectra(quantum_spectrum_scaled(n), semiclassical_spectrum(n, window, step, tol), window)


def spacing_law_check(
    ns: Iterable[int], window: tuple[float, float] = (-5.0, 5.0)
) -> list[tuple[int, float]]:
    """Unscaled gap between the two roots nearest e = 0, times n ln n."""
    out = []
    for n in ns:
        if n < 10:
            raise ModelError("spacing law needs n >= 10")
        roots = semiclassical_spectrum(n, window)
        if len(roots) < 2:
            raise ModelError(f"fewer than two roots in {window} at n={n}")
        two = sorted(sorted(roots, key=abs)[:2])
        gap = (two[1] - two[0]) * model(n).h
        out.append((int(n), gap * n * math.log(n)))
    return out


def _klein(theta: float, phi: float) -> np.ndarray:
    """Point of the singular fibre in C^2, z_j = x_j + i xi_j."""
    return np.array(
        [
            math.sqrt(2.0) * complex(math.cos(theta), math.sin(theta)) * math.sin(phi),
            -1j * complex(math.cos(2 * theta), math.sin(2 * theta)) * math.cos(phi),
        ]
    )


def _omega(u: np.ndarray, v: np.ndarray) -> float:
    """Canonical symplectic form sum_j (xi_j dx_j) on chords given in C^2."""
    return float(np.sum(u.real * v.imag - u.imag * v.real))


def richardson_limit(cutoffs: Sequence[float], values: Sequence[float], tol: float = 1e-3) -> float:
    """Polynomial extrapolation to cutoff 0 (Neville); checks the last two diagonals."""
    a = list(cutoffs)
    if len(a) < 2 or any(x <= y for x, y in zip(a, a[1:])) or a[-1] <= 0:
        raise ValueError("cutoffs must be positive and strictly decreasing (at least two)")
    p = list(values)
    diag = [p[0]]
    for k in range(1, len(a)):
        for j in range(len(a) - 1, k - 1, -1):
            p[j] = (a[j - k] * p[j] - a[j] * p[j - 1]) / (a[j - k] - a[j])
        diag.append(p[k])
    if abs(diag[-1] - diag[-2]) > tol:
        raise QuadratureError(
            f"extrapolation not converged: last two estimates {diag[-2]:.6g}, {diag[-1]:.6g}"
        )
    return diag[-1]


DEFAULT_CUTOFFS = (0.1, 0.05, 0.025, 0.0125, 0.00625)


def regularized_kappa_check(e: float, cutoff_sequence: Sequence[float] = DEFAULT_CUTOFFS) -> float:
    """Regularized integral of the sub-principal form along the loop.

    The loop is t -> Phi(t - pi/2, 2t - pi), t in [0, pi/2], both ends at
    the crossing point m = Phi(0, 0).  On it the form is -e/(2 sin phi) dphi.
    Truncating at distance a from both ends and adding (e/2) ln|omega(v_a, v_b)|
    for the chords from m removes the log divergence.
    """
    if any(not 0 < a < 0.25 * math.pi for a in cutoff_sequence):
        raise ValueError("cutoffs must lie in (0, pi/4)")
    if e == 0:
        return 0.0
    eps = 0.5 * e
    m = _klein(0.0, 0.0)
    vals = []
    for a in cutoff_sequence:
        integral, _ = quad(
            lambda t: -e / (2.0 * math.sin(2.0 * t - math.pi)) * 2.0,
            a,
            0.5 * math.pi - a,
            epsabs=1e-13,
            epsrel=1e-13,
            limit=200,
        )
        v_in = _klein(-a, -2.0 * a) - m
        v_out = _klein(a - 0.5 * math.pi, 2.0 * a - math.pi) - m
        vals.append(integral + eps * math.log(abs(_omega(v_in, v_out))))
    return richardson_limit(cutoff_sequence, vals)
