"""Acceptance criteria 1-10, one test each.

Every test prints a single PASS/FAIL line with the measured quantities,
so ``pytest tests/test_acceptance.py -v`` doubles as a report.
"""

import math
import subprocess
import sys
import time
from contextlib import contextmanager

import numpy as np
import pytest

from oracles import sphere_dense, sturm_eigenvalues
from singbs import graphbs, linalg, model_reso12, model_sphere, specfun
from singbs.linalg import SymTridiag
from singbs.specfun import Epsilon2Series


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def run(number, budget):
        notes = []
        t0 = time.perf_counter()
        ok = False
        try:
            yield notes
            ok = True
        finally:
            elapsed = time.perf_counter() - t0
            if budget is not None and elapsed >= budget:
                ok = False
                notes.append(f"runtime {elapsed:.2f}s over budget {budget:g}s")
            with capsys.disabled():
                tag = "PASS" if ok else "FAIL"
                print(f"\ncriterion {number}: {tag} ({elapsed:.2f}s) " + "; ".join(notes))
        if budget is not None:
            assert elapsed < budget, f"runtime {elapsed:.2f}s over {budget}s"

    return run


def test_criterion_01_identity_suite(criterion):
    with criterion(1, 1.0) as notes:
        worst = 0.0
        for x in (0.0, 0.5, 1.0, 3.0, 10.0):
            g2 = abs(math.exp(2 * specfun.log_gamma(0.5 + 1j * x).real))
            worst = max(worst, abs(g2 / (math.pi / math.cosh(math.pi * x)) - 1))
        notes.append(f"gamma rel {worst:.1e}")
        assert worst <= 1e-11

        unit = swap = cross = 0.0
        for eps in (-3.0, -0.5, 0.0, 0.5, 3.0):
            for h in (1.0, 0.1, 0.001):
                t = specfun.transfer_matrix(eps, h)
                a = t.array()
                unit = max(unit, float(np.max(np.abs(a @ a.conj().T - np.eye(2)))))
                swap = max(swap, specfun.transfer_swap_identity_check(eps, h))
                target = -math.exp(2 * math.pi * eps)
                cross = max(cross, abs(t.cross_ratio() - target) / abs(target))
        notes.append(f"unitary {unit:.1e}, swap {swap:.1e}, cross-ratio {cross:.1e}")
        assert unit <= 1e-12 and swap <= 1e-12 and cross <= 1e-10

        modulus = period = 0.0
        for n in range(-6, 7):
            for eps in (-2.0, 0.0, 0.7):
                c = specfun.divalent_constant(n, eps, 0.05)
                modulus = max(modulus, abs(abs(c) - 1))
                period = max(period, abs(specfun.divalent_constant(n + 4, eps, 0.05) - c))
        notes.append(f"|C|-1 {modulus:.1e}, n+4 {period:.1e}")
        assert modulus <= 1e-12 and period <= 1e-12


def test_criterion_02_stirling(criterion):
    with criterion(2, 1.0) as notes:
        for e0 in (0.5, -0.5):
            for sign in "+-":
                e2 = Epsilon2Series(e0, 0.0)
                r = [
                    specfun.log_zeta(sign, e2, h).imag - specfun.stirling_phase(sign, e2, h)
                    for h in (0.02, 0.01)
                ]
                ratio = r[1] / r[0]
                notes.append(f"{sign}{e0:+.1f}: {ratio:.3f}")
                assert 0.35 <= ratio <= 0.65


def test_criterion_03_eigensolver(criterion):
    with criterion(3, 5.0) as notes:
        rng = np.random.default_rng(20240)
        worst = 0.0
        for _ in range(100):
            m = int(rng.integers(1, 9))
            d, e = rng.normal(size=m), rng.normal(size=m - 1)
            ev = linalg.eig_sym_tridiag(SymTridiag(d, e))
            worst = max(worst, max(abs(a - b) for a, b in zip(ev, sturm_eigenvalues(d, e))))
        r = 4 * math.sqrt(2) * math.sqrt(2 / 11)
        dev4 = max(abs(a - b) for a, b in zip(model_reso12.quantum_spectrum_scaled(4), (-r, 0.0, r)))
        notes.append(f"oracle {worst:.1e}, n=4 {dev4:.1e}")
        assert worst <= 1e-11 and dev4 <= 1e-12


def test_criterion_04_reso12_reproduction(criterion):
    with criterion(4, 10.0) as notes:
        n, window = 30, (-5.0, 5.0)
        assert model_reso12.model(n).h == pytest.approx(2 / 63, rel=1e-15)
        q = [x for x in model_reso12.quantum_spectrum_scaled(n) if window[0] <= x <= window[1]]
        s = model_reso12.semiclassical_spectrum(n, window)
        t30 = model_reso12.compare(n, window)
        t60 = model_reso12.compare(60, window)
        notes.append(
            f"counts {len(q)}/{len(s)}, max diff {t30.max_abs_diff:.2e} vs 0.1*spacing "
            f"{0.1 * t30.mean_spacing:.2e}, n=60 {t60.max_abs_diff:.2e}"
        )
        assert len(q) == len(s)
        assert t30.max_abs_diff <= 0.1 * t30.mean_spacing
        assert t60.max_abs_diff < t30.max_abs_diff


def test_criterion_05_spacing_law(criterion):
    with criterion(5, 30.0) as notes:
        ns = (30, 60, 120, 240)
        prods = dict(model_reso12.spacing_law_check(ns))
        spread = max(prods.values()) / min(prods.values())
        by_n = {n: p / math.log(n) for n, p in prods.items()}
        notes.append("gap*n*ln n " + ", ".join(f"{prods[n]:.3f}" for n in ns) + f" (spread {spread:.2f})")
        notes.append("gap*n " + ", ".join(f"{by_n[n]:.3f}" for n in ns))
        assert spread <= 2
        assert all(by_n[b] > by_n[a] for a, b in zip(ns, ns[1:])), "gap*n does not grow monotonically"


def test_criterion_06_regularized_action(criterion):
    with criterion(6, 5.0) as notes:
        k12 = model_reso12.regularized_kappa_check(1.0)
        ks = model_sphere.regularized_kappa_check(1.0, model_sphere.invariants(-1, 1, 40))
        d12, ds = abs(k12 - 1.5 * math.log(2)), abs(ks - math.log(4))
        notes.append(f"reso12 {k12:.6f} (err {d12:.1e}), sphere {ks:.6f} (err {ds:.1e})")
        assert d12 <= 1e-4 and ds <= 1e-4


def test_criterion_07_blocks(criterion):
    with criterion(7, 5.0) as notes:
        for l in (5, 6):
            m = model_sphere.invariants(-1, 1, l)
            blocks = model_sphere.quantum_blocks(m)
            ev = np.array(model_sphere.block_eigenvalues(blocks))
            ref = np.sort(np.linalg.eigvals(sphere_dense(-1, 1, l)).real)
            dev = float(np.max(np.abs(ev - ref)))
            notes.append(f"l={l} orders {blocks.orders} dev {dev:.1e}")
            assert sum(blocks.orders) == 2 * l + 1 and dev <= 1e-10


def _doublet_parities(q):
    gaps = np.diff(q)
    mids = 0.5 * (q[1:] + q[:-1])
    small = [
        i
        for i in range(len(gaps))
        if all(gaps[i] < gaps[j] for j in (i - 1, i + 1) if 0 <= j < len(gaps))
    ]
    left = {i % 2 for i in small if mids[i] < -1.5}
    right = {i % 2 for i in small if mids[i] > 1.5}
    return left, right


def test_criterion_08_sphere_reproduction(criterion):
    with criterion(8, 20.0) as notes:
        m = model_sphere.invariants(-1, 1, 40)
        q = np.array(model_sphere.quantum_spectrum_scaled(m))
        sym = float(np.max(np.abs(q + q[::-1])))
        t = model_sphere.compare(m, (-1, 1))
        left, right = _doublet_parities(q[np.abs(q) <= 5])
        sc = model_sphere.semiclassical_spectrum(m, (-5, 5))
        pairs_left = {sc[i][1] + sc[i + 1][1] for i in range(0, len(sc) - 1, 2) if sc[i][0] < -1.5}
        pairs_right = {sc[i][1] + sc[i + 1][1] for i in range(len(sc) - 2, 0, -2) if sc[i][0] > 1.5}
        notes.append(
            f"{len(q)} eigenvalues, symmetry {sym:.1e}, max diff {t.max_abs_diff:.2e} vs "
            f"{0.1 * t.mean_spacing:.2e}, doublet index parity {sorted(left)}->{sorted(right)}, "
            f"branch order {sorted(pairs_left)}->{sorted(pairs_right)}"
        )
        assert len(q) == 81 and sym <= 1e-12
        assert t.max_abs_diff <= 0.1 * t.mean_spacing
        assert len(left) == len(right) == 1 and left != right
        assert len(pairs_left) == len(pairs_right) == 1 and pairs_left != pairs_right


def test_criterion_09_cross_path(criterion):
    with criterion(9, 20.0) as notes:
        for n in (10, 30):
            g, qn = model_reso12.graph(n)
            a = graphbs.solve_spectrum(g, qn, (-5, 5))
            b = model_reso12.semiclassical_spectrum(n, (-5, 5))
            dev = max(abs(x - y) for x, y in zip(a, b))
            notes.append(f"reso12 n={n} {len(a)} roots dev {dev:.1e}")
            assert len(a) == len(b) and dev <= 1e-8
        m = model_sphere.invariants(-1, 1, 40)
        g, qn = model_sphere.graph(m)
        a = graphbs.solve_spectrum(g, qn, (-3, 3))
        b = [x for x, _ in model_sphere.semiclassical_spectrum(m, (-3, 3))]
        dev = max(abs(x - y) for x, y in zip(a, b))
        notes.append(f"sphere l=40 {len(a)} roots dev {dev:.1e}")
        assert len(a) == len(b) and dev <= 1e-8


INVOCATIONS = [
    ["reso12", "quantum", "--n", "30"],
    ["reso12", "semiclassical", "--n", "30"],
    ["reso12", "compare", "--n", "30", "--window", "-5,5"],
    ["reso12", "spacings", "--n", "60", "--format", "json"],
    ["sphere", "quantum", "--l", "2", "--a", "-1", "--b", "1"],
    ["sphere", "semiclassical"],
    ["sphere", "compare", "--threads", "2"],
    ["sphere", "spacings", "--format", "json"],
    ["selftest"],
    ["reso12", "compare", "--step", "5"],
]


def test_criterion_10_determinism(criterion):
    with criterion(10, None) as notes:
        same = 0
        for argv in INVOCATIONS:
            cmd = [sys.executable, "-m", "singbs", *argv]
            first = subprocess.run(cmd, capture_output=True)
            second = subprocess.run(cmd, capture_output=True)
            assert (first.returncode, first.stdout, first.stderr) == (
                second.returncode,
                second.stdout,
                second.stderr,
            ), " ".join(argv)
            same += 1
        notes.append(f"{same}/{len(INVOCATIONS)} invocations byte-identical")
