"""Identity checks on the special functions, run by ``singbs selftest``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import specfun


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    bound: float

    @property
    def passed(self) -> bool:
        return math.isfinite(self.value) and self.value <= self.bound


def _gamma_modulus() -> float:
    worst = 0.0
    for x in (0.0, 0.5, 1.0, 3.0, 10.0):
        lg = complex(specfun.log_gamma(0.5 + 1j * x))
        # compare logarithms: |Gamma|^2 underflows nowhere on this grid but
        # the ratio form is the relative error directly
        ratio = math.exp(2 * lg.real - math.log(math.pi) + math.log(math.cosh(math.pi * x)))
        worst = max(worst, abs(ratio - 1.0))
    return worst


_EPS_GRID = (0.0, 0.5, -0.5, 3.0, -3.0)
_H_GRID = (1.0, 0.1, 0.001)


def _unitarity() -> float:
    worst = 0.0
    for eps in _EPS_GRID:
        for h in _H_GRID:
            t = specfun.transfer_matrix(eps, h).array()
            worst = max(worst, float(np.max(np.abs(t @ t.conj().T - np.eye(2)))))
    return worst


def _swap() -> float:
    return max(specfun.transfer_swap_identity_check(eps, h) for eps in _EPS_GRID for h in _H_GRID)


def _cross_ratio() -> float:
    worst = 0.0
    for eps in (0.25, -0.25, 1.0, -1.0):
        target = -math.exp(2 * math.pi * eps)
        cr = specfun.transfer_matrix(eps, 0.1).cross_ratio()
        worst = max(worst, abs(cr - target) / abs(target))
    return worst


def _divalent_modulus() -> float:
    worst = 0.0
    for n in range(8):
        for eps in _EPS_GRID:
            for h in _H_GRID:
                worst = max(worst, abs(abs(specfun.divalent_constant(n, eps, h)) - 1.0))
    return worst


def _divalent_period() -> float:
    worst = 0.0
    for n in range(-4, 8):
        for eps in _EPS_GRID:
            c0 = specfun.divalent_constant(n, eps, 0.1)
            c4 = specfun.divalent_constant(n + 4, eps, 0.1)
            worst = max(worst, abs(c4 - c0))
    return worst


CHECKS: tuple[tuple[str, Callable[[], float], float], ...] = (
    ("gamma modulus |G(1/2+ix)|^2 = pi/cosh(pi x)", _gamma_modulus, 1e-11),
    ("transfer matrix unitary", _unitarity, 1e-12),
    ("T(eps) T(-eps) = swap", _swap, 1e-12),
    ("cross-ratio ad/bc = -exp(2 pi eps)", _cross_ratio, 1e-10),
    ("divalent constant unimodular", _divalent_modulus, 1e-12),
    ("divalent constant depends on n mod 4", _divalent_period, 1e-12),
)


def identity_suite() -> list[CheckResult]:
    return [CheckResult(name, fn(), bound) for name, fn, bound in CHECKS]
