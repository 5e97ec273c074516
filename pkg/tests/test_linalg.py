import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import sturm_eigenvalues
from singbs import linalg, model_reso12
from singbs.errors import StepTooCoarseError, SymmetrizationError
from singbs.linalg import SymTridiag


class TestSymTridiag:
    def test_length_check(self):
        with pytest.raises(ValueError):
            SymTridiag((1.0, 2.0), (1.0, 2.0))

    def test_nonfinite(self):
        with pytest.raises(ValueError):
            SymTridiag((1.0, math.nan), (0.0,))


class TestEigen:
    def test_examples(self):
        assert linalg.eig_sym_tridiag(SymTridiag((), ())) == []
        assert linalg.eig_sym_tridiag(SymTridiag((5.0,), ())) == [5.0]
        ev = linalg.eig_sym_tridiag(SymTridiag((0.0, 0.0), (-3.0,)))
        assert ev == pytest.approx([-3.0, 3.0], abs=1e-14)
        ev = linalg.eig_sym_tridiag(SymTridiag((0.0, 0.0, 0.0), (math.sqrt(12), 2.0)))
        assert ev == pytest.approx([-4.0, 0.0, 4.0], abs=1e-14)

    def test_random_against_sturm_oracle(self):
        rng = np.random.default_rng(2024)
        worst = 0.0
        for _ in range(100):
            m = int(rng.integers(1, 9))
            d = rng.normal(size=m) * rng.choice([1e-3, 1.0, 50.0])
            e = rng.normal(size=m - 1)
            if m > 2 and rng.random() < 0.3:
                e[rng.integers(0, m - 1)] = 0.0
            ev = linalg.eig_sym_tridiag(SymTridiag(d, e))
            ref = sturm_eigenvalues(d, e)
            worst = max(worst, max(abs(a - b) for a, b in zip(ev, ref)))
        assert worst <= 1e-11

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.floats(-100, 100), min_size=1, max_size=30), st.data())
    def test_against_dense(self, d, data):
        e = data.draw(st.lists(st.floats(-100, 100), min_size=len(d) - 1, max_size=len(d) - 1))
        t = SymTridiag(d, e)
        ev = linalg.eig_sym_tridiag(t)
        ref = np.linalg.eigvalsh(t.dense())
        assert ev == sorted(ev)
        assert np.max(np.abs(np.array(ev) - ref)) <= 1e-12 * max(1.0, t.norm_inf())

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.floats(-10, 10), min_size=1, max_size=40))
    def test_zero_diagonal_symmetry(self, e):
        t = SymTridiag([0.0] * (len(e) + 1), e)
        ev = np.array(linalg.eig_sym_tridiag(t))
        assert np.max(np.abs(ev + ev[::-1])) <= 1e-12 * max(1.0, t.norm_inf())

    def test_tight_doublet(self):
        # two weakly coupled copies: eigenvalues split by ~delta^2
        delta = 1e-5
        t = SymTridiag((1.0, 0.0, 1.0), (delta, delta))
        ev = linalg.eig_sym_tridiag(t)
        ref = np.linalg.eigvalsh(t.dense())
        assert np.max(np.abs(np.array(ev) - ref)) < 1e-15

    def test_deterministic(self):
        t = SymTridiag(np.linspace(-1, 1, 50), np.ones(49))
        assert linalg.eig_sym_tridiag(t) == linalg.eig_sym_tridiag(t)

    def test_reso12_n4(self):
        h = 2 / 11
        ev = [x / h for x in linalg.eig_sym_tridiag(model_reso12.quantum_matrix(4))]
        r = 4 * math.sqrt(2) * math.sqrt(h)
        assert ev == pytest.approx([-r, 0.0, r], abs=1e-12)


class TestSymmetrize:
    def test_identity_when_symmetric(self):
        t = linalg.symmetrize_tridiag([1.0, 2.0, 3.0], [0.5, -1.5], [0.5, -1.5])
        assert t.offdiag == (0.5, -1.5)

    def test_example(self):
        t = linalg.symmetrize_tridiag([0.0, 0.0], [4.0], [1.0])
        assert t.offdiag == (2.0,)
        assert linalg.eig_sym_tridiag(t) == pytest.approx([-2.0, 2.0])

    def test_zero_pair(self):
        assert linalg.symmetrize_tridiag([1.0, 2.0], [0.0], [0.0]).offdiag == (0.0,)

    @pytest.mark.parametrize("sup,sub", [([1.0], [-1.0]), ([0.0], [2.0])])
    def test_rejects(self, sup, sub):
        with pytest.raises(SymmetrizationError):
            linalg.symmetrize_tridiag([0.0, 0.0], sup, sub)

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.tuples(st.floats(-5, 5), st.floats(0.01, 5), st.floats(0.01, 5)), min_size=1, max_size=12))
    def test_spectrum_preserved(self, rows):
        d = [r[0] for r in rows] + [0.3]
        sgn = [1 if i % 3 else -1 for i in range(len(rows))]
        sup = [s * r[1] for s, r in zip(sgn, rows)]
        sub = [s * r[2] for s, r in zip(sgn, rows)]
        dense = np.diag(d) + np.diag(sup, 1) + np.diag(sub, -1)
        ref = np.sort(np.linalg.eigvals(dense).real)
        got = linalg.eig_sym_tridiag(linalg.symmetrize_tridiag(d, sup, sub))
        assert np.max(np.abs(np.array(got) - ref)) < 1e-9 * max(1.0, np.abs(ref).max())


class TestDet:
    def test_known(self):
        m = np.array([[1, 2j], [3, 4]], dtype=complex)
        assert linalg.det_complex(m) == pytest.approx(4 - 6j)

    def test_order_limit(self):
        with pytest.raises(ValueError):
            linalg.det_complex(np.eye(9))

    def test_unitary_modulus(self):
        rng = np.random.default_rng(3)
        q, _ = np.linalg.qr(rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6)))
        assert abs(abs(linalg.det_complex(q)) - 1) < 1e-13


class TestPhaseRoots:
    def test_linear(self):
        assert linalg.find_phase_roots(lambda e: e, (-1, 1)) == pytest.approx([0.0], abs=1e-10)

    def test_three_e(self):
        got = linalg.find_phase_roots(lambda e: 3 * e, (-3, 3))
        assert got == pytest.approx([-2 * math.pi / 3, 0.0, 2 * math.pi / 3], abs=1e-10)

    def test_sine(self):
        got = linalg.find_phase_roots(lambda e: 2 * math.pi * np.sin(e), (-1, 1))
        assert got == pytest.approx([0.0], abs=1e-10)

    def test_empty_window(self):
        assert linalg.find_phase_roots(lambda e: e, (1.0, 1.0)) == []
        assert linalg.find_phase_roots(lambda e: e, (2.0, 1.0)) == []

    def test_too_coarse(self):
        with pytest.raises(StepTooCoarseError):
            linalg.find_phase_roots(lambda e: 400 * e, (-1, 1), step=0.01)

    def test_principal_values_are_unwrapped(self):
        wrapped = lambda e: np.angle(np.exp(3j * np.asarray(e)))  # noqa: E731
        got = linalg.find_phase_roots(wrapped, (-3, 3))
        assert got == pytest.approx([-2 * math.pi / 3, 0.0, 2 * math.pi / 3], abs=1e-10)

    def test_scalar_only_callable(self):
        got = linalg.find_phase_roots(lambda e: math.sin(e) * 10, (-1, 1))
        assert got == pytest.approx([-math.asin(2 * math.pi / 10), 0.0, math.asin(2 * math.pi / 10)], abs=1e-10)

    @settings(max_examples=40, deadline=None)
    @given(st.floats(0.2, 20), st.floats(-3, 3))
    def test_linear_roots_exact(self, slope, shift):
        got = linalg.find_phase_roots(lambda e: slope * (e - shift), (-5, 5))
        k = np.arange(math.ceil(slope * (-5 - shift) / (2 * math.pi)), math.floor(slope * (5 - shift) / (2 * math.pi)) + 1)
        ref = shift + 2 * math.pi * k / slope
        ref = ref[(ref >= -5) & (ref <= 5)]
        assert len(got) == len(ref)
        assert np.max(np.abs(np.array(got) - ref), initial=0.0) < 1e-9

    @pytest.mark.parametrize("n", [20, 31])
    def test_halving_step_keeps_roots(self, n):
        phi = lambda e: model_reso12.secular_phase(e, n)  # noqa: E731
        coarse = linalg.find_phase_roots(phi, (-5, 5), step=0.02)
        fine = linalg.find_phase_roots(phi, (-5, 5), step=0.01)
        for x in coarse:
            assert min(abs(x - y) for y in fine) < 1e-9


class TestGolden:
    def test_parabola(self):
        x, fx = linalg.golden_section_min(lambda x: (x - 0.3) ** 2, 0.0, 1.0, 1e-10)
        assert x == pytest.approx(0.3, abs=1e-9) and fx < 1e-18
