"""Quantization on a reduced graph with degree-2 and degree-4 vertices.

Conventions
-----------
Every edge is oriented by the flow: it leaves its ``tail`` vertex along an
unstable branch and enters its ``head`` vertex along a stable branch.  The
unknown on an edge is the coefficient of the microlocal solution on it;
along an edge the coefficient read at the head equals ``t * x`` where ``x``
is the coefficient at the tail and ``t`` is the edge transport.  Tree edges
have ``t = 1``; a cut edge carries ``t = exp(i * hol)`` where ``hol`` is the
holonomy of the cycle it closes with the spanning tree.

At a degree-4 vertex the four half-edges are listed in cyclic order
``(I1, I3, I2, I4)``: I1, I2 leave the vertex, I3, I4 enter it, and

    (y_I3, y_I4) = T(eps) (x_I1, x_I2).

At a degree-2 vertex ``(out, in)``: ``y_in = C x_out``.

Chaining through degree-2 vertices leaves one unknown per outgoing
half-edge of the degree-4 vertices, so the reduced system is
``(Id - V) x = 0`` of size 2p with V unitary.  For p = 0 the graph is a
single cycle and the system is the scalar ``1 - exp(i phase)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from . import specfun
from .errors import GraphStructureError
from .linalg import _bisect, det_complex, find_phase_roots, golden_section_min, scan_grid

__all__ = [
    "Edge",
    "GlobalQuantum",
    "PhaseSeries",
    "ReducedGraph",
    "Vertex",
    "build_secular_system",
    "scalar_phase",
    "secular_det",
    "solve_spectrum",
]

SWAP = np.array([[0, 1], [1, 0]], dtype=complex)
MIN_THRESHOLD = 1e-6


@dataclass(frozen=True)
class PhaseSeries:
    """Phase g_m1 / h + g_0."""

    g_m1: float
    g_0: float

    def __call__(self, h: float) -> float:
        return self.g_m1 / h + self.g_0


@dataclass(frozen=True)
class Edge:
    tail: int
    head: int


@dataclass(frozen=True)
class Vertex:
    """Critical circle.

    ``branches`` lists edge indices: for degree 4 in cyclic order
    (I1, I3, I2, I4), for degree 2 as (outgoing, incoming).  ``flipped``
    assembles a degree-4 vertex from T(-eps) with the roles of stable and
    unstable branches exchanged; it describes the same condition.
    """

    id: int
    degree: int
    eps2: Callable[[float], float]
    branches: tuple[int, ...]
    flipped: bool = False

    @property
    def kind(self) -> str:
        return "direct" if self.degree == 4 else "reverse"

    @property
    def outgoing(self) -> tuple[int, ...]:
        return (self.branches[0], self.branches[2]) if self.degree == 4 else (self.branches[0],)

    @property
    def incoming(self) -> tuple[int, ...]:
        return (self.branches[1], self.branches[3]) if self.degree == 4 else (self.branches[1],)


@dataclass(frozen=True)
class GlobalQuantum:
    """First quantization condition eps1_0 + h eps1_1 = h n."""

    n: int
    h: float
    eps1_0: float
    eps1_1: float

    def __post_init__(self) -> None:
        if self.h <= 0:
            raise GraphStructureError("h must be positive")

    def residual(self) -> float:
        return self.eps1_0 + self.h * self.eps1_1 - self.h * self.n


@dataclass
class ReducedGraph:
    vertices: Sequence[Vertex]
    edges: Sequence[Edge]
    cut_cycles: Mapping[int, Callable[[float], PhaseSeries]]
    _index: dict[int, int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.vertices = tuple(self.vertices)
        self.edges = tuple(self.edges)
        self.cut_cycles = dict(self.cut_cycles)
        self._index = {v.id: i for i, v in enumerate(self.vertices)}
        self._validate()

    @property
    def p(self) -> int:
        return sum(1 for v in self.vertices if v.degree == 4)

    @property
    def q(self) -> int:
        return sum(1 for v in self.vertices if v.degree == 2)

    def vertex(self, vid: int) -> Vertex:
        return self.vertices[self._index[vid]]

    def _validate(self) -> None:
        if len(self._index) != len(self.vertices):
            raise GraphStructureError("duplicate vertex ids")
        for v in self.vertices:
            if v.degree not in (2, 4):
                raise GraphStructureError(f"vertex {v.id}: degree {v.degree} not in (2, 4)")
            if len(v.branches) != v.degree:
                raise GraphStructureError(f"vertex {v.id}: expected {v.degree} branches")
        p, q = self.p, self.q
        ne = len(self.edges)
        if ne != 2 * p + q:
            raise GraphStructureError(f"{ne} edges, expected 2p+q = {2 * p + q}")
        tails = [0] * ne
        heads = [0] * ne
        for v in self.vertices:
            for k in v.outgoing:
                self._check_edge(k, v)
                if self.edges[k].tail != v.id:
                    raise GraphStructureError(f"edge {k} does not leave vertex {v.id}")
                tails[k] += 1
            for k in v.incoming:
                self._check_edge(k, v)
                if self.edges[k].head != v.id:
                    raise GraphStructureError(f"edge {k} does not enter vertex {v.id}")
                heads[k] += 1
        if any(c != 1 for c in tails + heads):
            raise GraphStructureError("every edge end must be attached to exactly one branch")
        if len(self.cut_cycles) != p + 1:
            raise GraphStructureError(
                f"{len(self.cut_cycles)} cut cycles, expected b1 = p+1 = {p + 1}"
            )
        for k in self.cut_cycles:
            if not 0 <= k < ne:
                raise GraphStructureError(f"cut edge {k} does not exist")
        self._check_tree()

    def _check_edge(self, k: int, v: Vertex) -> None:
        if not 0 <= k < len(self.edges):
            raise GraphStructureError(f"vertex {v.id}: unknown edge {k}")

    def _check_tree(self) -> None:
        parent = {v.id: v.id for v in self.vertices}

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for k, e in enumerate(self.edges):
            if k in self.cut_cycles:
                continue
            if e.tail not in parent or e.head not in parent:
                raise GraphStructureError(f"edge {k} references an unknown vertex")
            a, b = find(e.tail), find(e.head)
            if a == b:
                raise GraphStructureError("edges outside the cut set contain a cycle")
            parent[a] = b
        if len({find(v.id) for v in self.vertices}) != 1:
            raise GraphStructureError("edges outside the cut set do not span the graph")


def _log_transport(g: ReducedGraph, k: int, e: float, h: float) -> complex:
    hol = g.cut_cycles.get(k)
    return 1j * hol(e)(h) if hol is not None else 0j


def _follow(g: ReducedGraph, k: int, quantum: GlobalQuantum, e: float) -> tuple[Vertex, int, complex]:
    """Walk from edge k through degree-2 vertices; returns the degree-4 head,
    the incoming slot (0 for I3, 1 for I4) and the accumulated log transport."""
    h = quantum.h
    acc = 0j
    for _ in range(len(g.vertices) + 1):
        acc += _log_transport(g, k, e, h)
        v = g.vertex(g.edges[k].head)
        if v.degree == 4:
            return v, v.incoming.index(k), acc
        acc -= complex(specfun.log_divalent_constant(quantum.n, v.eps2(e), h))
        k = v.outgoing[0]
    raise GraphStructureError("chain of degree-2 vertices does not reach a degree-4 vertex")


def scalar_phase(g: ReducedGraph, quantum: GlobalQuantum, e: float) -> float:
    """Phase of V for a graph without degree-4 vertices (a single cycle)."""
    if g.p != 0:
        raise GraphStructureError("scalar phase exists only when p = 0")
    h = quantum.h
    total = 0.0
    for k in g.cut_cycles:
        total += g.cut_cycles[k](e)(h)
    for v in g.vertices:
        total -= complex(specfun.log_divalent_constant(quantum.n, v.eps2(e), h)).imag
    return total


def _vertex_response(v: Vertex, quantum: GlobalQuantum, e: float) -> np.ndarray:
    """2x2 map from incoming coefficients (I3, I4) to outgoing ones (I1, I2)."""
    eps = v.eps2(e)
    if v.flipped:
        return specfun.transfer_matrix(-eps, quantum.h).array() @ SWAP
    return specfun.transfer_matrix(eps, quantum.h).array().conj().T


def _unitary_part(g: ReducedGraph, quantum: GlobalQuantum, e: float) -> np.ndarray:
    if g.p == 0:
        return np.array([[cmath.exp(1j * scalar_phase(g, quantum, e))]])
    deg4 = [v for v in g.vertices if v.degree == 4]
    slot = {v.id: 2 * i for i, v in enumerate(deg4)}
    n = 2 * len(deg4)
    r = np.zeros((n, n), dtype=complex)
    for v in deg4:
        for j, k in enumerate(v.outgoing):
            w, s, lt = _follow(g, k, quantum, e)
            r[slot[w.id] + s, slot[v.id] + j] = cmath.exp(lt)
    out = np.empty_like(r)
    for v in deg4:
        i = slot[v.id]
        out[i : i + 2, :] = _vertex_response(v, quantum, e) @ r[i : i + 2, :]
    return out


def build_secular_system(g: ReducedGraph, quantum: GlobalQuantum, e: float) -> np.ndarray:
    """Reduced homogeneous system Id - V (2p x 2p, or 1 x 1 when p = 0)."""
    v = _unitary_part(g, quantum, e)
    return np.eye(v.shape[0], dtype=complex) - v


def _normalized(v: np.ndarray, sqrt_det: complex) -> complex:
    n = v.shape[0]
    d = det_complex(np.eye(n, dtype=complex) - v)
    return d / ((-1j) ** n * sqrt_det)


def secular_det(g: ReducedGraph, quantum: GlobalQuantum, e: float) -> complex:
    """det(Id - V) / ((-i)^n sqrt(det V)).

    With V unitary of size n this equals prod_k 2 sin(phi_k / 2) over the
    eigenphases of V: real, bounded by 2^n, vanishing exactly on the
    spectrum.  The principal square root fixes the overall sign only.
    """
    v = _unitary_part(g, quantum, e)
    return _normalized(v, cmath.sqrt(det_complex(v)))


def _tracked(g: ReducedGraph, quantum: GlobalQuantum):
    """Real secular function with the branch of sqrt(det V) carried along e."""

    def f(e: float, psi_ref: float) -> tuple[float, float]:
        v = _unitary_part(g, quantum, e)
        psi = cmath.phase(det_complex(v))
        psi += 2 * math.pi * round((psi_ref - psi) / (2 * math.pi))
        return _normalized(v, cmath.exp(0.5j * psi)).real, psi

    return f


def solve_spectrum(
    g: ReducedGraph,
    quantum: GlobalQuantum,
    window: tuple[float, float],
    step: float = 0.01,
    tol: float = 1e-10,
) -> list[float]:
    """Spectral parameters in the window where the reduced system is singular."""
    if g.p == 0:
        return find_phase_roots(lambda e: scalar_phase(g, quantum, float(e)), window, step, tol)
    grid = scan_grid(window, step)
    if grid.size < 2:
        return []
    f = _tracked(g, quantum)
    vals = np.empty(grid.size)
    psis = np.empty(grid.size)
    psi = cmath.phase(det_complex(_unitary_part(g, quantum, float(grid[0]))))
    for i, x in enumerate(grid):
        vals[i], psi = f(float(x), psi)
        psis[i] = psi

    def at(x: float, i: int) -> float:
        return f(x, psis[i])[0]

    roots: list[float] = []
    for i in range(grid.size - 1):
        a, b = float(grid[i]), float(grid[i + 1])
        if vals[i] == 0.0:
            roots.append(a)
        elif vals[i] * vals[i + 1] < 0:
            roots.append(_bisect(lambda x, i=i: at(x, i), a, b, vals[i], tol))
    if vals[-1] == 0.0:
        roots.append(float(grid[-1]))

    # two roots closer than the grid step show up as a dip of |F| without
    # a sign change; the signed minimum tells whether F really crosses
    mag = np.abs(vals)
    for i in range(1, grid.size - 1):
        if not (mag[i] <= mag[i - 1] and mag[i] <= mag[i + 1]):
            continue
        if vals[i - 1] * vals[i] <= 0 or vals[i] * vals[i + 1] <= 0:
            continue
        a, b = float(grid[i - 1]), float(grid[i + 1])
        sgn = 1.0 if vals[i] > 0 else -1.0
        xm, _ = golden_section_min(lambda x, i=i, sgn=sgn: sgn * at(x, i), a, b, tol)
        fm = at(xm, i)
        if fm * vals[i] < 0:
            roots.append(_bisect(lambda x, i=i: at(x, i), a, xm, vals[i - 1], tol))
            roots.append(_bisect(lambda x, i=i: at(x, i), xm, b, fm, tol))
        elif abs(fm) < MIN_THRESHOLD:
            roots.append(xm)
    out: list[float] = []
    for x in sorted(roots):
        if not out or x - out[-1] > tol:
            out.append(x)
    return out
