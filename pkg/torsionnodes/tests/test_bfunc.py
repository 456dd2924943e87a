import unittest
import numpy as np
import sympy
from hypothesis import given, settings, strategies as st
from torsionnodes.bfunc import (abel_partner, argument_principle_count, check_no_double_zero, combine_shifted,
                                construct_b, construct_b_linear, eval_b, find_zeros, full_level_sum, nodal_fiber_sum,
                                residues, translate_sum, uniqueness_spread, zero_intersection, zero_torsion_check)
from torsionnodes.contour import newton
from torsionnodes.errors import InvalidInputError, NumericFailure, PoleProximityError
from torsionnodes.policy import DEFAULT_POLICY
from torsionnodes.theta import quasi_periods
from torsionnodes.torus import Lattice, TorsionPoint, halves, torus_distance
from torsionnodes.utils import make_rng

GENERIC = Lattice(1.0, complex(0.21, 1.37))
coords = st.floats(min_value=0.0, max_value=1.0)


def far_from_poles(f, z, margin=0.05):
    return all(torus_distance(z + k * f.t_lift, pole, f.lattice) > margin for k in range(f.n) for pole in f.poles)


class ConstructionTests(unittest.TestCase):

    def test_degenerate_tau_rejected(self):
        with self.assertRaises(InvalidInputError) as ctx:
            construct_b(0.0, TorsionPoint(0, 0, 2), Lattice.square())
        self.assertEqual(1, ctx.exception.status)
        with self.assertRaises(InvalidInputError):
            construct_b(0.0, TorsionPoint(4, 0, 4), Lattice.square())

    def test_missing_lattice_rejected(self):
        with self.assertRaises(InvalidInputError):
            construct_b(0.0, TorsionPoint(1, 0, 2))

    def test_bad_lift_rejected(self):
        with self.assertRaises(InvalidInputError):
            construct_b(0.0, TorsionPoint(1, 0, 3), GENERIC, t_lift=0.5)

    def test_square_half_period_translate_sum(self):
        f = construct_b(0.0, TorsionPoint(1, 0, 2), Lattice.square())
        self.assertLess(abs(translate_sum(f, 0.23 + 0.31j)), 1e-10)
        self.assertAlmostEqual(np.pi / 2, f.c.real, places=12)

    def test_residues_by_direct_limit(self):
        f = construct_b(0.0, TorsionPoint(1, 0, 2), Lattice.square())
        eps = 1e-4
        self.assertLess(abs(complex(f(eps)) * eps - 1.0), 1e-5)
        self.assertLess(abs(complex(f(-0.5 + eps)) * eps + 1.0), 1e-5)

    def test_residues_by_contour(self):
        for n in (2, 3, 5):
            f = construct_b(0.3 + 0.2j, TorsionPoint(1, 1, n), GENERIC)
            plus, minus = residues(f)
            self.assertLess(abs(plus - 1.0), 1e-9)
            self.assertLess(abs(minus + 1.0), 1e-9)

    @settings(max_examples=20, deadline=None, derandomize=True)
    @given(coords, coords, st.sampled_from([(1, 0, 3), (1, 2, 5), (2, 3, 7), (1, 1, 4), (0, 1, 2)]))
    def test_translate_sum_vanishes(self, s, t, tau):
        f = construct_b(GENERIC.point(0.17, 0.44), TorsionPoint(*tau), GENERIC)
        z = GENERIC.point(s, t)
        if not far_from_poles(f, z):
            return
        self.assertLess(abs(translate_sum(f, z)), 1e-9)

    def test_translate_sum_near_pole_rejected(self):
        f = construct_b(0.0, TorsionPoint(1, 0, 3), GENERIC)
        with self.assertRaises(PoleProximityError):
            translate_sum(f, 1.0 / 3.0 + 1e-9)

    def test_elliptic(self):
        f = construct_b(0.1 + 0.1j, TorsionPoint(1, 2, 3), GENERIC)
        z = 0.37 + 0.52j
        for shift in (1.0, GENERIC.omega2, 2.0 - 3.0 * GENERIC.omega2):
            self.assertLess(abs(complex(f(z + shift)) - complex(f(z))), 1e-10)

    def test_lift_independence(self):
        t = TorsionPoint(1, 2, 3)
        f = construct_b(0.0, t, GENERIC)
        g = construct_b(0.0, t, GENERIC, t_lift=t.embed(GENERIC) - 1.0 + GENERIC.omega2)
        qp = quasi_periods(GENERIC)
        self.assertLess(abs(g.c - f.c - (qp.eta2 - qp.eta1)), 1e-12)
        for z in (0.2 + 0.3j, 0.7 + 1.1j):
            self.assertLess(abs(complex(f(z)) - complex(g(z))), 1e-10)

    def test_translation_of_base_point(self):
        t = TorsionPoint(1, 1, 5)
        p = 0.3 + 0.4j
        f = construct_b(p, t, GENERIC)
        f0 = construct_b(0.0, t, GENERIC)
        for z in (0.11 + 0.93j, 0.66 + 0.2j):
            self.assertLess(abs(complex(f(z)) - complex(f0(z - p))), 1e-10)

    def test_level_amplification(self):
        f = construct_b(0.0, TorsionPoint(1, 0, 2), GENERIC)
        z = 0.1234 + 0.0567j
        self.assertLess(abs(full_level_sum(f, z, 4)), 1e-8)
        self.assertLess(abs(full_level_sum(f.shifted(1.0), z, 4) - 16.0), 1e-8)
        g = construct_b(0.0, TorsionPoint(1, 1, 3), GENERIC)
        self.assertLess(abs(full_level_sum(g, z, 6)), 1e-8)
        with self.assertRaises(InvalidInputError):
            full_level_sum(g, z, 4)

    def test_shifted_translate_sum(self):
        f = construct_b(0.0, TorsionPoint(2, 1, 5), GENERIC)
        z = 0.41 + 0.29j
        self.assertLess(abs(translate_sum(f.shifted(0.5), z) - 2.5), 1e-9)

    def test_uniqueness_against_linear_construction(self):
        for tau in ((1, 0, 2), (1, 2, 3), (1, 1, 4)):
            t = TorsionPoint(*tau)
            f = construct_b(0.2 + 0.5j, t, GENERIC)
            g = construct_b_linear(0.2 + 0.5j, t, GENERIC)
            self.assertLess(uniqueness_spread(f, g), 1e-8)
            # Same normalization: the ratio itself is one
            z = 0.61 + 0.83j
            self.assertLess(abs(complex(f(z)) / complex(g(z)) - 1.0), 1e-8)


class ZeroTests(unittest.TestCase):

    def test_square_half_period_zeros(self):
        lat = Lattice.square()
        f = construct_b(0.0, TorsionPoint(1, 0, 2), lat)
        zeros = find_zeros(f)
        self.assertFalse(zeros.double)
        expected = [0.5j, 0.5 + 0.5j]
        for q in zeros.points:
            self.assertLess(min(torus_distance(q, e, lat) for e in expected), 1e-9)
        self.assertGreater(torus_distance(zeros.q1, zeros.q2, lat), 0.4)
        self.assertEqual([2, 2], zero_torsion_check(f))

    def test_argument_principle_count(self):
        f = construct_b(0.3 + 0.2j, TorsionPoint(1, 2, 3), GENERIC)
        self.assertEqual((2, 2, 0), argument_principle_count(f))

    def test_zeros_refined_and_abel(self):
        for tau in ((1, 0, 3), (1, 2, 3), (1, 3, 5)):
            f = construct_b(0.3 + 0.2j, TorsionPoint(*tau), GENERIC)
            zeros = find_zeros(f)
            self.assertFalse(zeros.double)
            self.assertEqual((1, 1), zeros.multiplicities)
            for q in zeros.points:
                self.assertLess(abs(complex(eval_b(f, q.z))), 1e-9)
            self.assertLess(zeros.abel_residual, 1e-8)
            self.assertLess(torus_distance(zeros.q1.z + zeros.q2.z, 2 * f.p.z - f.t_lift, GENERIC), 1e-8)
            self.assertGreater(min(zeros.derivatives), DEFAULT_POLICY.transversality_margin)

    def test_finer_grid_agrees(self):
        f = construct_b(0.0, TorsionPoint(1, 1, 3), GENERIC)
        coarse = find_zeros(f)
        fine = find_zeros(f, DEFAULT_POLICY.with_overrides(grid=64, edge_samples=8))
        for q in coarse.points:
            self.assertLess(min(torus_distance(q, r, GENERIC) for r in fine.points), 1e-6)

    def test_no_double_zero_generic(self):
        rng = make_rng(5)
        for _ in range(3):
            lat = Lattice.random(rng)
            p = lat.point(*rng.uniform(0.0, 1.0, size=2))
            for tau in ((1, 0, 2), (1, 1, 3), (1, 2, 4)):
                report = check_no_double_zero(construct_b(p, TorsionPoint(*tau), lat))
                self.assertTrue(report.passed)
                self.assertEqual(4, len(report.values))
                self.assertGreaterEqual(report.min_margin, 1e-4)

    def test_two_torsion_pairs_share_one_zero(self):
        p = 0.3 + 0.2j
        f1 = construct_b(p, TorsionPoint(1, 0, 2), GENERIC)
        f2 = construct_b(p, TorsionPoint(0, 1, 2), GENERIC)
        result = zero_intersection(f1, f2)
        self.assertEqual("SharedPoint", result.kind)
        self.assertEqual(1, len(result.shared))
        tau3 = TorsionPoint(1, 1, 2).embed(GENERIC)
        self.assertLess(torus_distance(result.shared[0], p - tau3, GENERIC), 1e-8)

    def test_mixed_orders_disjoint(self):
        p = 0.3 + 0.2j
        f1 = construct_b(p, TorsionPoint(1, 0, 2), GENERIC)
        f2 = construct_b(p, TorsionPoint(1, 1, 3), GENERIC)
        result = zero_intersection(f1, f2)
        self.assertEqual("Disjoint", result.kind)
        self.assertGreater(result.min_distance, 1e-4)

    def test_intersection_preconditions(self):
        f = construct_b(0.0, TorsionPoint(1, 0, 2), GENERIC)
        with self.assertRaises(InvalidInputError):
            zero_intersection(f, f)
        g = construct_b(0.1, TorsionPoint(0, 1, 2), GENERIC)
        with self.assertRaises(InvalidInputError):
            zero_intersection(f, g)

    def test_shifted_combination_is_proportional(self):
        p = 0.3 + 0.2j
        for first, second in (((1, 0, 3), (0, 1, 3)), ((1, 0, 4), (3, 0, 4)), ((1, 0, 2), (0, 1, 2))):
            f1 = construct_b(p, TorsionPoint(*first), GENERIC)
            f2 = construct_b(p, TorsionPoint(*second), GENERIC)
            report = combine_shifted(f1, f2)
            self.assertTrue(report.proportional)
            self.assertLess(abs(report.c + 1.0), 1e-9)
            self.assertLess(abs(report.ratio - 1.0), 1e-8)
            self.assertEqual(TorsionPoint(*first) - TorsionPoint(*second), report.difference)


class DoubleZeroTests(unittest.TestCase):
    """
    b is symmetric about every w = p - eta with 2 eta = tau, so b - b(w) has a double zero at w
    """

    def setUp(self):
        self.lat = Lattice(1.0, complex(0.17, 1.43))
        self.p = 0.2 + 0.1j

    def with_double_zero(self, tau, offset=0.0):
        f = construct_b(self.p, TorsionPoint(*tau), self.lat)
        w = self.p - halves(f.t)[0].embed(self.lat)
        return f.shifted(-complex(eval_b(f, w)) + offset), w

    def test_double_zero_reported_once(self):
        g, w = self.with_double_zero((1, 1, 3))
        self.assertFalse(check_no_double_zero(g).passed)
        zeros = find_zeros(g)
        self.assertTrue(zeros.double)
        self.assertEqual((2,), zeros.multiplicities)
        self.assertEqual(1, len(zeros.points))
        self.assertEqual(zeros.q1, zeros.q2)
        self.assertLess(torus_distance(zeros.q1, w, self.lat), 1e-9)
        self.assertLess(zeros.abel_residual, 1e-8)
        self.assertEqual(1, len(zeros.to_transport_format()["zeros"]))

    def test_nearly_double_zero_stays_simple(self):
        g, _ = self.with_double_zero((1, 1, 3), offset=1e-3)
        self.assertTrue(check_no_double_zero(g).passed)
        zeros = find_zeros(g)
        self.assertFalse(zeros.double)
        self.assertEqual((1, 1), zeros.multiplicities)
        for q in zeros.points:
            self.assertLess(abs(complex(eval_b(g, q.z))), 1e-9)
        self.assertLess(zeros.abel_residual, 1e-8)

    def test_check_agrees_with_find_zeros(self):
        for tau in ((1, 1, 3), (1, 0, 2), (1, 2, 5)):
            f = construct_b(self.p, TorsionPoint(*tau), self.lat)
            cases = [f] + [self.with_double_zero(tau, offset)[0] for offset in (0.0, 1e-2)]
            for g in cases:
                self.assertEqual(not check_no_double_zero(g).passed, find_zeros(g).double, g.c)

    def test_abel_partner(self):
        f = construct_b(self.p, TorsionPoint(1, 2, 5), self.lat)
        zeros = find_zeros(f)
        self.assertLess(torus_distance(abel_partner(f, zeros.q1.z), zeros.q2, self.lat), 1e-8)
        self.assertLess(torus_distance(abel_partner(f, zeros.q2.z), zeros.q1, self.lat), 1e-8)


class NewtonTests(unittest.TestCase):

    def test_converges(self):
        z, residual, steps = newton(lambda z: z * z - 2, lambda z: 2 * z, 1 + 0j)
        self.assertAlmostEqual(2 ** 0.5, z.real, places=12)
        self.assertLessEqual(residual, DEFAULT_POLICY.newton_residual)
        self.assertGreater(steps, 0)

    def test_multiplicity_restores_one_step_convergence(self):
        z, residual, steps = newton(lambda z: (z - 1) ** 2, lambda z: 2 * (z - 1), 3 + 0j, multiplicity=2)
        self.assertEqual((1 + 0j, 0.0, 1), (z, residual, steps))

    def test_stalled_step_is_not_convergence(self):
        with self.assertRaises(NumericFailure) as ctx:
            newton(lambda z: 1.0, lambda z: 1e20, 0j)
        self.assertEqual(1.0, ctx.exception.context["residual"])

    def test_zero_slope(self):
        with self.assertRaises(NumericFailure):
            newton(lambda z: z * z + 1, lambda z: 2 * z, 0j)


class NodalFiberSumTests(unittest.TestCase):

    def test_exact_small_levels(self):
        z = sympy.Rational(7, 10) + sympy.I * sympy.Rational(1, 5)
        for n, root in ((2, sympy.Integer(-1)), (4, sympy.I)):
            total = sum(root ** k * z / ((root ** k * z - 1) * (root ** k * z - root)) for k in range(n))
            self.assertEqual(0, sympy.simplify(sympy.expand_complex(total)))

    def test_level_five(self):
        self.assertLess(abs(nodal_fiber_sum(1.3 - 0.4j, 5)), 1e-12)

    def test_level_twelve_random(self):
        rng = make_rng(12)
        radii = np.concatenate([rng.uniform(0.2, 0.8, 50), rng.uniform(1.25, 3.0, 50)])
        z = radii * np.exp(2j * np.pi * rng.uniform(0.0, 1.0, 100))
        self.assertLess(float(np.max(np.abs(nodal_fiber_sum(z, 12)))), 1e-10)

    def test_bad_arguments(self):
        with self.assertRaises(InvalidInputError):
            nodal_fiber_sum(0.5, 1)
        with self.assertRaises(PoleProximityError):
            nodal_fiber_sum(1.0, 6)


if __name__ == '__main__':
    for case in (ConstructionTests, ZeroTests, DoubleZeroTests, NewtonTests, NodalFiberSumTests):
        suite = unittest.TestLoader().loadTestsFromTestCase(case)
        unittest.TextTestRunner(verbosity=2).run(suite)
