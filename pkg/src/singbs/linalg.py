"""Small numerical kernels: tridiagonal eigenvalues, symmetrization,
complex determinants and a phase-crossing root finder."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import StepTooCoarseError, SymmetrizationError

__all__ = [
    "SymTridiag",
    "det_complex",
    "eig_sym_tridiag",
    "find_phase_roots",
    "golden_section_min",
    "scan_grid",
    "symmetrize_tridiag",
]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SymTridiag:
    """Real symmetric tridiagonal matrix given by its two diagonals."""

    diag: tuple[float, ...]
    offdiag: tuple[float, ...]

    def __post_init__(self) -> None:
        d = tuple(float(x) for x in self.diag)
        e = tuple(float(x) for x in self.offdiag)
        if len(d) == 0 and len(e) != 0 or len(d) > 0 and len(e) != len(d) - 1:
            raise ValueError(f"inconsistent lengths: diag {len(d)}, offdiag {len(e)}")
        if not all(math.isfinite(x) for x in d + e):
            raise ValueError("non-finite entry")
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @property
    def order(self) -> int:
        return len(self.diag)

    def norm_inf(self) -> float:
        m = self.order
        if m == 0:
            return 0.0
        d = np.abs(self.diag)
        e = np.abs(np.asarray(self.offdiag))
        rows = d.copy()
        rows[:-1] += e
        rows[1:] += e
        return float(rows.max())

    def dense(self) -> np.ndarray:
        a = np.diag(np.asarray(self.diag, dtype=float))
        if self.order > 1:
            e = np.asarray(self.offdiag, dtype=float)
            a += np.diag(e, 1) + np.diag(e, -1)
        return a


def _count_below(d: np.ndarray, e2: np.ndarray, x: np.ndarray, pivmin: float) -> np.ndarray:
    """Number of eigenvalues strictly below each shift in x (LDL^T pivot signs)."""
    count = np.zeros(x.shape, dtype=np.int64)
    q = d[0] - x
    q = np.where(np.abs(q) < pivmin, -pivmin, q)
    count += q < 0
    for i in range(1, d.size):
        q = d[i] - x - e2[i - 1] / q
        q = np.where(np.abs(q) < pivmin, -pivmin, q)
        count += q < 0
    return count


def eig_sym_tridiag(t: SymTridiag) -> list[float]:
    """All eigenvalues, ascending, by Sturm-count bisection.

    Every eigenvalue is bisected independently (vectorized over the index),
    so tight doublets cost no more than isolated eigenvalues.
    """
    m = t.order
    if m == 0:
        return []
    d = np.asarray(t.diag, dtype=float)
    e = np.asarray(t.offdiag, dtype=float)
    if m == 1:
        return [float(d[0])]
    e2 = e * e
    radius = np.zeros(m)
    radius[:-1] += np.abs(e)
    radius[1:] += np.abs(e)
    lo0 = float(np.min(d - radius))
    hi0 = float(np.max(d + radius))
    scale = max(abs(lo0), abs(hi0), 1.0)
    eps = np.finfo(float).eps
    pivmin = np.finfo(float).tiny * max(1.0, float(e2.max(initial=0.0)))
    lo0 -= 2 * eps * scale
    hi0 += 2 * eps * scale
    k = np.arange(m)
    lo = np.full(m, lo0)
    hi = np.full(m, hi0)
    # invariant: count(lo) <= k < count(hi)
    for _ in range(200):
        width = hi - lo
        if np.all(width <= 2 * eps * np.maximum(np.abs(lo), np.abs(hi)) + eps * scale):
            break
        mid = 0.5 * (lo + hi)
        c = _count_below(d, e2, mid, pivmin)
        upper = c > k
        hi = np.where(upper, mid, hi)
        lo = np.where(upper, lo, mid)
    return [float(v) for v in 0.5 * (lo + hi)]


def symmetrize_tridiag(
    diag: Sequence[float], sup: Sequence[float], sub: Sequence[float]
) -> SymTridiag:
    """Diagonal similarity turning a sign-symmetric tridiagonal matrix into
    a symmetric one; offdiag[k] = sign(sup[k]) sqrt(sup[k] sub[k])."""
    if len(sup) != len(sub):
        raise ValueError("sup and sub must have equal length")
    off = []
    for k, (s, t) in enumerate(zip(sup, sub)):
        p = float(s) * float(t)
        if p < 0 or (p == 0 and (s != 0 or t != 0)):
            raise SymmetrizationError(
                f"entry {k}: sup*sub = {p:g}; no real diagonal similarity exists"
            )
        off.append(math.copysign(math.sqrt(p), s) if p > 0 else 0.0)
    return SymTridiag(tuple(diag), tuple(off))


def det_complex(m) -> complex:
    """Determinant of a small dense complex matrix (LU with partial pivoting)."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("square matrix required")
    if a.shape[0] > 8:
        raise ValueError("order must be at most 8")
    if not np.all(np.isfinite(a)):
        raise ValueError("non-finite entry")
    if a.shape[0] == 0:
        return 1.0 + 0.0j
    return complex(np.linalg.det(a))


def scan_grid(window: tuple[float, float], step: float) -> np.ndarray:
    lo, hi = float(window[0]), float(window[1])
    if step <= 0:
        raise ValueError("step must be positive")
    if not lo < hi:
        return np.empty(0)
    n = max(1, math.ceil((hi - lo) / step - 1e-9))
    return np.linspace(lo, hi, n + 1)


def _evaluate(f: Callable, grid: np.ndarray) -> np.ndarray:
    try:
        vals = np.asarray(f(grid), dtype=float)
        if vals.shape == grid.shape:
            return vals
    except (TypeError, ValueError):
        pass
    return np.array([float(f(float(x))) for x in grid])


def _bisect(g: Callable[[float], float], a: float, b: float, ga: float, tol: float) -> float:
    while abs(b - a) > tol:
        mid = 0.5 * (a + b)
        if mid == a or mid == b:
            break
        gm = g(mid)
        if gm == 0.0:
            return mid
        if (gm < 0) == (ga < 0):
            a, ga = mid, gm
        else:
            b = mid
    return 0.5 * (a + b)


MAX_BRANCH_STEP = 0.5 * math.pi


def find_phase_roots(
    phi: Callable,
    window: tuple[float, float],
    step: float = 0.01,
    tol: float = 1e-10,
) -> list[float]:
    """Points where the continuous continuation of ``phi`` crosses 2 pi Z.

    ``phi`` may return principal values; consecutive samples are joined on
    the nearest branch.  That continuation is trusted only while the
    reduced increment stays below pi/2 in magnitude; larger increments make
    the branch choice ambiguous and raise StepTooCoarseError.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    grid = scan_grid(window, step)
    if grid.size < 2:
        return []
    raw = _evaluate(phi, grid)
    if not np.all(np.isfinite(raw)):
        raise ValueError("phase function returned non-finite values")
    inc = np.diff(raw)
    red = inc - TWO_PI * np.round(inc / TWO_PI)
    bad = np.flatnonzero(np.abs(red) > MAX_BRANCH_STEP)
    if bad.size:
        i = int(bad[0])
        raise StepTooCoarseError(
            f"phase moves by {red[i]:.3f} rad between e={grid[i]:.6g} and e={grid[i + 1]:.6g}; "
            f"reduce the step below {step:g}"
        )
    unwrapped = np.concatenate(([raw[0]], raw[0] + np.cumsum(red)))
    branch = np.floor(unwrapped / TWO_PI)
    roots: list[float] = []
    for i in np.flatnonzero(branch[1:] != branch[:-1]):
        i = int(i)
        target = TWO_PI * max(branch[i], branch[i + 1])
        base = unwrapped[i]

        def g(x: float, base=base, target=target) -> float:
            v = float(phi(x))
            v += TWO_PI * round((base - v) / TWO_PI)
            return v - target

        a, b = float(grid[i]), float(grid[i + 1])
        ga = unwrapped[i] - target
        if ga == 0.0:
            roots.append(a)
            continue
        if unwrapped[i + 1] - target == 0.0:
            roots.append(b)
            continue
        roots.append(_bisect(g, a, b, ga, tol))
    return _dedupe(roots, tol)


def _dedupe(xs: list[float], tol: float) -> list[float]:
    out: list[float] = []
    for x in sorted(xs):
        if not out or x - out[-1] > tol:
            out.append(x)
    return out


def golden_section_min(
    f: Callable[[float], float], a: float, b: float, tol: float
) -> tuple[float, float]:
    """Minimize a unimodal function on [a, b]; returns (x, f(x))."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while abs(b - a) > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)
