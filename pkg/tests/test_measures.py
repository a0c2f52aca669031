import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from qcorr.errors import CapabilityError, DomainError, StateError
from qcorr.linalg import DensityOperator, kron, partial_trace
from qcorr.measures import (
    binary_entropy,
    classical_correlation_oracle,
    concurrence_eof,
    discord_isotropic_complement_closed,
    discord_oracle,
    discord_werner_complement_closed,
    eof_isotropic,
    eof_werner,
    isotropic_entropy,
    koashi_winter_residual,
    mutual_information,
    von_neumann_entropy,
    werner_entropy,
)
from qcorr.optim import OptimizerConfig
from qcorr.states import (
    IsotropicParams,
    WernerParams,
    isotropic_complement_canonical,
    isotropic_state,
    werner_complement,
    werner_state,
)

FAST = OptimizerConfig(restarts=4, seed=42)
BELL = np.outer([1, 0, 0, 1], [1, 0, 0, 1]) / 2


def entropy_from_eigs(m):
    w = np.linalg.eigvalsh(m)
    w = w[w > 1e-14]
    return float(-np.sum(w * np.log2(w)))


def discord_by_entropies(rho_ac, eof, d):
    # D = E_f(AB) + S(C) - S(AC) with S(A) = log2 d on both sides
    s_c = entropy_from_eigs(partial_trace(rho_ac, "second").matrix)
    return eof + s_c - entropy_from_eigs(rho_ac.matrix)


def product_state(rng):
    a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    c = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    ra, rc = a @ a.conj().T, c @ c.conj().T
    return DensityOperator(kron(ra / np.trace(ra), rc / np.trace(rc)), (2, 4))


class TestEntropy:
    def test_maximally_mixed(self):
        assert von_neumann_entropy(np.eye(8) / 8) == pytest.approx(3, abs=1e-12)

    def test_pure(self):
        assert von_neumann_entropy(BELL) == pytest.approx(0, abs=1e-12)

    @pytest.mark.parametrize("d", [2, 3])
    def test_werner_complement(self, d):
        for x in np.linspace(-1, 1, 11):
            assert von_neumann_entropy(werner_complement(d, x)) == pytest.approx(math.log2(d), abs=1e-10)

    def test_negative_eigenvalue(self):
        with pytest.raises(StateError):
            von_neumann_entropy(np.diag([1.2, -0.2]))

    def test_werner_entropy_matches_numeric(self):
        for x in np.linspace(-1, 1, 9):
            assert werner_entropy(3, x) == pytest.approx(entropy_from_eigs(werner_state(3, x).matrix), abs=1e-10)

    def test_isotropic_entropy_matches_numeric(self):
        for f in np.linspace(0, 1, 9):
            assert isotropic_entropy(3, f) == pytest.approx(entropy_from_eigs(isotropic_state(3, f).matrix), abs=1e-10)


class TestBinaryEntropy:
    @pytest.mark.parametrize("p, h", [(0, 0), (1, 0), (0.5, 1)])
    def test_values(self, p, h):
        assert binary_entropy(p) == pytest.approx(h, abs=1e-15)

    @given(st.floats(0, 1))
    def test_symmetry(self, p):
        assert binary_entropy(p) == pytest.approx(binary_entropy(1 - p), abs=1e-12)

    @pytest.mark.parametrize("p", [-0.1, 1.1])
    def test_domain(self, p):
        with pytest.raises(DomainError):
            binary_entropy(p)


class TestMutualInformation:
    def test_product(self):
        assert mutual_information(product_state(np.random.default_rng(0))) == pytest.approx(0, abs=1e-10)

    def test_bell(self):
        assert mutual_information(DensityOperator(BELL, (2, 2))) == pytest.approx(2, abs=1e-12)

    def test_werner_complement_max(self):
        rho = werner_complement(2, 0.5)
        s_c = entropy_from_eigs(partial_trace(rho, "second").matrix)
        assert mutual_information(rho) == pytest.approx(1 + s_c - 1, abs=1e-10)
        res = discord_oracle(rho, FAST)
        assert res.discord + res.classical_correlation == pytest.approx(mutual_information(rho), abs=1e-12)


class TestEof:
    def test_werner_separable(self):
        assert eof_werner(2, 0.5) == 0
        assert eof_werner(3, 0.0) == 0

    def test_werner_endpoint(self):
        assert eof_werner(2, -1.0) == pytest.approx(1, abs=1e-12)

    def test_werner_minus_06(self):
        h09 = -0.9 * math.log2(0.9) - 0.1 * math.log2(0.1)
        assert eof_werner(2, -0.6) == pytest.approx(h09, abs=1e-12)

    def test_concurrence_limits(self):
        assert concurrence_eof(0) == 0
        assert concurrence_eof(1) == pytest.approx(1, abs=1e-12)

    def test_isotropic_values(self):
        assert eof_isotropic(3, 1 / 3) == 0
        assert eof_isotropic(2, 1.0) == pytest.approx(1, abs=1e-12)
        assert eof_isotropic(3, 1.0) == pytest.approx(math.log2(3), abs=1e-12)

    def test_isotropic_conjectured_flag(self):
        assert not eof_isotropic(3, 0.8).conjectured
        assert eof_isotropic(4, 0.8).conjectured

    def test_isotropic_d3_continuity(self):
        d = 3
        for t in (1 / d, 4 * (d - 1) / d**2):
            lo, hi = eof_isotropic(d, t - 1e-11), eof_isotropic(d, t + 1e-11)
            assert abs(hi - lo) <= 1e-9
            assert abs(eof_isotropic(d, t) - lo) <= 1e-9

    def test_d2_isotropic_matches_werner(self):
        for x in np.linspace(-1, 1, 41):
            assert eof_isotropic(2, (1 - x) / 2) == pytest.approx(eof_werner(2, x), abs=1e-12)

    @pytest.mark.parametrize("d", [2, 3])
    def test_isotropic_monotone(self, d):
        vals = [eof_isotropic(d, f) for f in np.linspace(0, 1, 201)]
        assert np.all(np.diff(vals) >= -1e-12)
        assert vals[-1] == pytest.approx(math.log2(d))


class TestClosedDiscord:
    def test_werner_values(self):
        assert discord_werner_complement_closed(2, 0.5) == pytest.approx(1, abs=1e-12)
        assert discord_werner_complement_closed(2, -1.0) == pytest.approx(0, abs=1e-12)

    def test_werner_x0(self):
        # lambda_+ = 1/6 (x3), lambda_- = 1/2: S = 1 + log2(3)/2, E_f = 0, minus log2 2
        assert discord_werner_complement_closed(2, 0.0) == pytest.approx(math.log2(3) / 2, abs=1e-12)

    def test_werner_x0_d3(self):
        lp, lm = 1 / 12, 1 / 6
        s = -(6 * lp * math.log2(lp) + 3 * lm * math.log2(lm))
        assert discord_werner_complement_closed(3, 0.0) == pytest.approx(s - math.log2(3), abs=1e-12)

    @pytest.mark.parametrize("d", [2, 3])
    def test_werner_matches_entropies(self, d):
        for x in np.linspace(-1, 1, 21):
            expected = discord_by_entropies(werner_complement(d, x), eof_werner(d, x), d)
            assert discord_werner_complement_closed(d, x) == pytest.approx(expected, abs=1e-10)

    @pytest.mark.parametrize("d", [2, 3])
    def test_isotropic_matches_entropies(self, d):
        for f in np.linspace(0, 1, 21):
            rho = isotropic_complement_canonical(d, f)
            expected = discord_by_entropies(rho, float(eof_isotropic(d, f)), d)
            assert discord_isotropic_complement_closed(d, f) == pytest.approx(expected, abs=1e-10)

    def test_isotropic_endpoint(self):
        assert discord_isotropic_complement_closed(3, 1.0) == pytest.approx(0, abs=1e-12)

    def test_isotropic_maximally_mixed_partner(self):
        # f = 1/9 leaves I/9 on AB: E_f = 0 and S = log2 9, so D = log2 3
        assert discord_isotropic_complement_closed(3, 1 / 9) == pytest.approx(math.log2(3), abs=1e-12)

    def test_family_equivalence(self):
        for x in np.linspace(-1, 1, 801):
            a = discord_werner_complement_closed(2, x)
            b = discord_isotropic_complement_closed(2, (1 - x) / 2)
            assert abs(a - b) <= 1e-12

    @pytest.mark.parametrize("d", [2, 3])
    def test_werner_range_and_argmax(self, d):
        xs = np.linspace(-1, 1, 2001)
        vals = np.array([discord_werner_complement_closed(d, x) for x in xs])
        assert vals.min() >= -1e-12
        assert vals.max() <= math.log2(d) + 1e-12
        step = xs[1] - xs[0]
        assert abs(xs[np.argmax(vals)] - 1 / d) <= step
        assert discord_werner_complement_closed(d, 1 / d) == pytest.approx(math.log2(d), abs=1e-12)
        away = np.abs(xs - 1 / d) > step
        assert np.all(vals[away] < math.log2(d) - 1e-9)

    @pytest.mark.parametrize("d", [2, 3])
    def test_isotropic_nonnegative(self, d):
        for f in np.linspace(0, 1, 201):
            assert discord_isotropic_complement_closed(d, f) >= -1e-12

    @pytest.mark.parametrize("d", [2, 3])
    def test_continuity(self, d):
        # slopes diverge logarithmically at the endpoints, so bound jumps on a fine grid
        # and check they shrink with the step
        def max_jump(fn, lo, n):
            vals = np.array([fn(d, t) for t in np.linspace(lo, 1, n)])
            return np.max(np.abs(np.diff(vals)))

        for fn, lo in ((discord_werner_complement_closed, -1.0), (discord_isotropic_complement_closed, 0.0)):
            jumps = [max_jump(fn, lo, n) for n in (101, 1001, 10001)]
            assert jumps[1] < 0.02
            assert jumps[0] > jumps[1] > jumps[2]


class TestOracles:
    def test_product_classical(self):
        value, _ = classical_correlation_oracle(product_state(np.random.default_rng(1)), FAST)
        assert value == pytest.approx(0, abs=1e-6)

    def test_bell_classical(self):
        value, _ = classical_correlation_oracle(DensityOperator(BELL, (2, 2)), FAST)
        assert value == pytest.approx(1, abs=1e-6)

    def test_product_discord(self):
        assert discord_oracle(product_state(np.random.default_rng(2)), FAST).discord == pytest.approx(0, abs=1e-6)

    @pytest.mark.parametrize("x, expected", [(0.5, 1.0), (-1.0, 0.0)])
    def test_werner_complement(self, x, expected):
        assert discord_oracle(werner_complement(2, x), FAST).discord == pytest.approx(expected, abs=1e-3)

    def test_best_so_far_monotone(self):
        _, rep = classical_correlation_oracle(werner_complement(2, -0.3), OptimizerConfig(restarts=6))
        assert len(rep.history) == 6
        assert np.all(np.diff(rep.history) >= 0)
        assert rep.best_value == rep.history[-1]

    def test_deterministic(self):
        rho = werner_complement(2, 0.1)
        a, _ = classical_correlation_oracle(rho, FAST)
        b, _ = classical_correlation_oracle(rho, FAST)
        assert a == b

    def test_dimension_guard(self):
        rho = DensityOperator(np.eye(34) / 34, (2, 17))
        with pytest.raises(CapabilityError):
            classical_correlation_oracle(rho, FAST)

    @pytest.mark.parametrize("params", [WernerParams(2, -0.5), WernerParams(2, 0.5), IsotropicParams(2, 0.9)])
    def test_koashi_winter(self, params):
        assert koashi_winter_residual(params, FAST) <= 1e-3

    def test_oracle_upper_bounds_closed(self):
        # measurement optimization can only under-estimate J, so discord from the oracle is >= closed form
        for x in (-0.6, 0.0, 0.8):
            got = discord_oracle(werner_complement(2, x), FAST).discord
            closed = discord_werner_complement_closed(2, x)
            assert closed - 1e-9 <= got <= closed + 1e-3


@settings(max_examples=25, deadline=None)
@given(x=st.floats(-1, 1), d=st.integers(2, 5))
def test_werner_discord_bounds(x, d):
    v = discord_werner_complement_closed(d, x)
    assert -1e-12 <= v <= math.log2(d) + 1e-12
