"""Periodic-orbit pressure, roots, Gibbs statistics.

The word-length weight is the exact seam: with it the level pressure is
(1/n) log c(n) - t, where c(n) counts cyclically reduced words (each
class weighted by its primitive period), and the root extrapolation
lands on log 3 for k = 2 to a few parts in 1e-8.
"""

import itertools

import numpy as np
import pytest

from limcone import (
    Functional,
    InvalidParameterError,
    NotInDualConeError,
    NotOnBoundaryError,
    entropy_of_state,
    evaluate,
    extrapolated_pressure,
    gibbs_direction,
    jordan,
    level_pressure,
    pressure_derivative_check,
    pressure_root,
    pressure_table,
    word_length_weight,
)
from limcone.pressure import pressure_root_detail

LOG3 = np.log(3.0)


def brute_cyc_reduced_count(k, n):
    total = 0
    for w in itertools.product(range(2 * k), repeat=n):
        if any(b == a ^ 1 for a, b in zip(w, w[1:])):
            continue
        if n > 1 and w[-1] == w[0] ^ 1:
            continue
        total += 1
    return total


def brute_class_jordan(rep, n):
    """Independent small-n oracle: canonical classes by brute force,
    Jordan data per class from plain dense eigensolves."""
    out = {}
    for w in itertools.product(range(4), repeat=n):
        if any(b == a ^ 1 for a, b in zip(w, w[1:])):
            continue
        if n > 1 and w[-1] == w[0] ^ 1:
            continue
        canon = min(w[j:] + w[:j] for j in range(n))
        if canon in out:
            continue
        period = next(p for p in range(1, n + 1) if n % p == 0 and canon == canon[p:] + canon[:p])
        m = evaluate(rep, list(canon))
        lam = np.sort(np.log(np.abs(np.linalg.eigvals(m))))[::-1]
        lam -= lam.mean()
        out[canon] = (lam, period)
    return out


class TestLevelPressure:
    @pytest.mark.parametrize("n", [3, 5, 7])
    def test_word_length_weight_exact(self, s2, n):
        # (1/n) log c(n) - t, c(n) counted by brute force
        c_n = brute_cyc_reduced_count(2, n)
        for t in (0.0, 0.7, 2.0):
            got = level_pressure(s2, None, t, n, weight_hook=word_length_weight)
            assert abs(got - (np.log(c_n) / n - t)) < 1e-12

    def test_zero_weight_approaches_log3(self, s2):
        p12 = level_pressure(s2, None, 0.0, 12, weight_hook=word_length_weight)
        assert abs(p12 - LOG3) < 1e-4

    def test_strictly_decreasing_in_t(self, s2):
        phi = Functional([1.0, -1.0])
        vals = [level_pressure(s2, phi, t, 8) for t in np.linspace(0, 3, 7)]
        assert np.all(np.diff(vals) < 0)

    def test_level_precondition(self, s2):
        with pytest.raises(InvalidParameterError):
            level_pressure(s2, Functional([1.0, -1.0]), 0.0, 1)


class TestPressureRoot:
    def test_word_length_hook_is_log3(self, s2):
        root = pressure_root(s2, None, weight_hook=word_length_weight)
        assert abs(root - LOG3) < 1e-5

    def test_homogeneity(self, s2):
        phi = Functional([1.0, -1.0])
        r1 = pressure_root(s2, phi)
        r3 = pressure_root(s2, 3.0 * phi)
        assert abs(r3 - r1 / 3.0) < 1e-5

    def test_not_in_dual_cone(self, s2):
        with pytest.raises(NotInDualConeError):
            pressure_root(s2, Functional([-1.0, 1.0]))

    def test_agrees_with_direct_count(self, s2):
        from limcone import critical_exponent_direct

        phi = Functional([1.0, -1.0])
        root = pressure_root(s2, phi)
        est = critical_exponent_direct(s2, phi, 12, "element")
        assert abs(root - est.value) / root < 0.07

    def test_detail_reports_levels(self, s2):
        detail = pressure_root_detail(s2, None, weight_hook=word_length_weight)
        assert set(detail.level_roots) == {9, 10, 11, 12}
        assert not detail.fallback


class TestPressureTable:
    def test_extrapolated_within_last_predictions(self, s2):
        phi = Functional([1.0, -1.0])
        table = pressure_table(s2, phi, 0.5, 10)
        preds = [
            n * table.levels[n] - (n - 1) * table.levels[n - 1]
            for n in (8, 9, 10)
        ]
        assert min(preds) - 1e-12 <= table.extrapolated <= max(preds) + 1e-12
        assert not table.oscillating

    def test_level_stability(self, s2):
        # |n P_n - (n-1) P_(n-1) - extrapolated| shrinks over the last levels
        phi = Functional([1.0, -1.0])
        table = pressure_table(s2, phi, 0.5, 12)
        devs = [
            abs(n * table.levels[n] - (n - 1) * table.levels[n - 1] - table.extrapolated)
            for n in (10, 11, 12)
        ]
        assert devs[2] <= devs[1] <= devs[0]

    def test_membership_signs_around_boundary(self, s2):
        # P < 0 just outside the boundary functional, > 0 just inside
        phi = Functional([1.0, -1.0])
        h = pressure_root(s2, phi)
        boundary = h * phi
        assert extrapolated_pressure(s2, 1.05 * boundary) < 0
        assert extrapolated_pressure(s2, 0.95 * boundary) > 0


class TestGibbs:
    def test_uniform_weights_against_brute_oracle(self, s2):
        # phi = 0: period-weighted plain mean of lambda / n
        n = 5
        oracle = brute_class_jordan(s2, n)
        lam = np.array([v[0] for v in oracle.values()])
        mult = np.array([v[1] for v in oracle.values()], dtype=float)
        expect = (lam * mult[:, None]).sum(axis=0) / (n * mult.sum())
        got = gibbs_direction(s2, Functional([0.0, 0.0]), n)
        assert np.abs(got - expect).max() < 1e-10

    def test_weighted_against_brute_oracle(self, s2):
        n = 5
        phi = Functional([0.8, -0.8])
        oracle = brute_class_jordan(s2, n)
        lam = np.array([v[0] for v in oracle.values()])
        mult = np.array([v[1] for v in oracle.values()], dtype=float)
        w = mult * np.exp(-(lam @ phi.coeffs))
        expect = (lam * w[:, None]).sum(axis=0) / (n * w.sum())
        got = gibbs_direction(s2, phi, n)
        assert np.abs(got - expect).max() < 1e-10

    def test_fuchsian_direction_on_ray(self, f3):
        g = gibbs_direction(f3, Functional([0.5, 0.0, -0.5]), 10)
        unit = g / np.linalg.norm(g)
        ray = np.array([1.0, 0.0, -1.0]) / np.sqrt(2)
        assert np.arccos(np.clip(unit @ ray, -1, 1)) < 1e-3

    def test_sum_zero(self, p3):
        g = gibbs_direction(p3, Functional([1.0, 0.0, -1.0]), 8)
        assert abs(g.sum()) < 1e-12


class TestDerivative:
    def test_zero_direction(self, s2):
        a, n = pressure_derivative_check(s2, Functional([1.0, -1.0]), Functional([0.0, 0.0]), 8)
        assert a == 0.0
        assert abs(n) < 1e-12

    def test_constant_weight_slope_is_minus_one(self, s2):
        # scaling the word-length weight: P((1+t) r) has slope -1 in t,
        # matching minus the Gibbs mean of the weight per unit time
        h = 1e-4
        up = level_pressure(s2, None, 1.0 + h, 8, weight_hook=word_length_weight)
        dn = level_pressure(s2, None, 1.0 - h, 8, weight_hook=word_length_weight)
        assert abs((up - dn) / (2 * h) + 1.0) < 1e-12

    def test_matches_finite_difference(self, s2):
        rng = np.random.default_rng(17)
        phi0 = Functional([1.0, -1.0])
        for _ in range(5):
            phi1 = Functional(rng.normal(size=2))
            a, n = pressure_derivative_check(s2, phi0, phi1, 10)
            assert abs(a - n) < 1e-4 * (1 + abs(a))

    def test_step_range_enforced(self, s2):
        with pytest.raises(InvalidParameterError):
            pressure_derivative_check(s2, Functional([1, -1]), Functional([1, -1]), 8, h_step=1.0)

    def test_strict_convexity_along_centered_direction(self, p3):
        # second difference of the pressure along a Gibbs-centered
        # direction is positive
        phi0 = Functional([1.0, 0.0, -1.0])
        g = gibbs_direction(p3, phi0, 10)
        phi1 = Functional([1.0, -1.0, 0.0])
        phi1 = phi1 - (phi1(g) / phi0(g)) * phi0     # zero Gibbs mean
        ts = np.linspace(-0.2, 0.2, 5)
        vals = [extrapolated_pressure(p3, phi0 + t * phi1, n_max=10) for t in ts]
        second = np.diff(vals, 2)
        assert np.all(second > 0)


class TestEntropy:
    def test_word_length_maximal_entropy(self, s2):
        # weight log3 * n sits on the boundary; its entropy is log 3
        hook = lambda n, lam: np.full(len(lam), LOG3 * n)
        val = entropy_of_state(s2, None, 12, weight_hook=hook)
        assert abs(val - LOG3) < 1e-4

    def test_off_boundary_rejected(self, s2):
        hook = lambda n, lam: np.full(len(lam), 0.5 * LOG3 * n)
        with pytest.raises(NotOnBoundaryError):
            entropy_of_state(s2, None, 12, weight_hook=hook)

    def test_schottky_boundary_entropy_bounded(self, s2):
        phi = Functional([1.0, -1.0])
        h = pressure_root(s2, phi)
        val = entropy_of_state(s2, h * phi, 12)
        h_top = extrapolated_pressure(s2, Functional([0.0, 0.0]), t=0.0)
        assert 0 < val <= h_top + 0.05

    def test_equals_phi_of_gibbs_direction(self, s2):
        phi = Functional([1.0, -1.0])
        bdry = pressure_root(s2, phi) * phi
        val = entropy_of_state(s2, bdry, 12)
        assert abs(val - bdry(gibbs_direction(s2, bdry, 12))) < 1e-12
