import cmath
import math
import unittest
from hypothesis import given, settings, strategies as st
from torsionnodes.errors import InvalidInputError
from torsionnodes.torus import (Lattice, TorsionPoint, contains_full_two_torsion, enumerate_torsion, halves,
                                pairing, parse_lattice, parse_torsion, reduce_tau, reduce_to_fundamental,
                                subgroup_from_generators, torsion_count, torsion_order, torus_distance, torus_gap)

reals = st.floats(min_value=-50.0, max_value=50.0, allow_nan=False, allow_infinity=False)


def in_fundamental_domain(tau: complex) -> bool:
    return -0.5 - 1e-12 <= tau.real < 0.5 + 1e-12 and abs(tau) >= 1.0 - 1e-12


class LatticeTests(unittest.TestCase):

    def test_reduce_tau_examples(self):
        self.assertAlmostEqual(1j, reduce_tau(1j + 3), places=12)
        self.assertAlmostEqual(2j, reduce_tau(0.5j), places=12)
        reduced = reduce_tau(complex(0.3, 0.2))
        self.assertTrue(in_fundamental_domain(reduced))
        self.assertGreater(reduced.imag, 0.2)

    def test_reduce_tau_boundary_tie_break(self):
        self.assertAlmostEqual(complex(-0.5, 2.0), reduce_tau(complex(0.5, 2.0)), places=12)
        hexagonal = complex(0.5, math.sqrt(3) / 2)
        self.assertAlmostEqual(complex(-0.5, math.sqrt(3) / 2), reduce_tau(hexagonal), places=12)

    @settings(max_examples=100, deadline=None, derandomize=True)
    @given(st.floats(min_value=-5.0, max_value=5.0), st.floats(min_value=0.05, max_value=5.0))
    def test_reduce_tau_lands_in_domain(self, x, y):
        reduced = reduce_tau(complex(x, y))
        self.assertTrue(in_fundamental_domain(reduced))
        self.assertAlmostEqual(reduced, reduce_tau(reduced), places=9)

    def test_lattice_is_normalized(self):
        lat = Lattice.from_periods(2.0, complex(1.0, 4.0))
        self.assertEqual(1.0, lat.omega1)
        self.assertTrue(in_fundamental_domain(lat.tau))

    def test_bad_periods_rejected(self):
        with self.assertRaises(InvalidInputError):
            Lattice(1.0, complex(0.3, -1.0))
        with self.assertRaises(InvalidInputError):
            Lattice(0.0, 1j)

    def test_special_lattices(self):
        self.assertTrue(Lattice.square().is_special())
        self.assertTrue(Lattice.hexagonal().is_special())
        self.assertFalse(Lattice(1.0, complex(0.1, 1.3)).is_special())

    def test_nome(self):
        self.assertAlmostEqual(math.exp(-math.pi), Lattice.square().nome.real, places=14)

    def test_parse_lattice(self):
        lat = parse_lattice("tau=0.21,1.37")
        self.assertAlmostEqual(complex(0.21, 1.37), lat.tau, places=14)
        self.assertEqual(Lattice.square(), parse_lattice("square"))
        with self.assertRaises(InvalidInputError):
            parse_lattice("tau=oops")


class TorusPointTests(unittest.TestCase):

    lat = Lattice(1.0, complex(0.21, 1.37))

    @settings(max_examples=100, deadline=None, derandomize=True)
    @given(reals, reals)
    def test_reduction_is_idempotent_and_in_cell(self, x, y):
        p = reduce_to_fundamental(complex(x, y), self.lat)
        s, t = self.lat.coordinates(p.z)
        self.assertTrue(-1e-9 <= s < 1.0 and -1e-9 <= t < 1.0)
        self.assertLess(torus_distance(p, complex(x, y), self.lat), 1e-9)
        self.assertAlmostEqual(p.z, reduce_to_fundamental(p.z, self.lat).z, places=12)

    def test_square_reduction_example(self):
        square = Lattice.square()
        self.assertLess(abs(reduce_to_fundamental(2.7 + 3.4j, square).z - (0.7 + 0.4j)), 1e-12)
        self.assertEqual(0j, reduce_to_fundamental(0.0, square).z)
        self.assertLess(abs(reduce_to_fundamental(self.lat.omega1 + 0.3 * self.lat.omega2, self.lat).z
                            - 0.3 * self.lat.omega2), 1e-12)

    def test_lattice_vector_reduces_to_zero(self):
        self.assertEqual(0j, reduce_to_fundamental(3 * self.lat.omega1 - 2 * self.lat.omega2, self.lat).z)

    def test_non_finite_rejected(self):
        with self.assertRaises(InvalidInputError):
            reduce_to_fundamental(complex(math.inf, 0.0), self.lat)

    def test_torus_distance_wraps(self):
        self.assertAlmostEqual(0.02, torus_distance(0.01, 0.99, self.lat), places=12)

    def test_torus_gap_matches_distance(self):
        points = [0.1 + 0.2j, 0.9 + 1.3j, -0.4 + 0.05j]
        gaps = torus_gap(points, 0.95 + 1.2j, self.lat)
        for z, gap in zip(points, gaps):
            self.assertAlmostEqual(torus_distance(z, 0.95 + 1.2j, self.lat), gap, places=12)


class TorsionPointTests(unittest.TestCase):

    def test_order_examples(self):
        self.assertEqual(2, torsion_order(TorsionPoint(1, 0, 2)))
        self.assertEqual(3, torsion_order(TorsionPoint(2, 4, 6)))
        self.assertEqual(1, torsion_order(TorsionPoint(6, 0, 6)))
        self.assertEqual(12, TorsionPoint(3, 4, 12).order())

    def test_equality_across_levels(self):
        self.assertEqual(TorsionPoint(1, 0, 2), TorsionPoint(2, 0, 4))
        self.assertEqual(hash(TorsionPoint(1, 1, 3)), hash(TorsionPoint(2, 2, 6)))
        self.assertNotEqual(TorsionPoint(1, 0, 2), TorsionPoint(0, 1, 2))

    def test_arithmetic(self):
        s = TorsionPoint(1, 0, 2) + TorsionPoint(0, 1, 3)
        self.assertEqual(6, s.n)
        self.assertEqual(6, s.order())
        self.assertTrue((TorsionPoint(1, 2, 5) * 5).is_zero())
        self.assertTrue((TorsionPoint(1, 2, 5) - TorsionPoint(1, 2, 5)).is_zero())

    def test_embed(self):
        lat = Lattice.square()
        self.assertAlmostEqual(0.5 + 0.5j, TorsionPoint(1, 1, 2).embed(lat), places=15)
        with self.assertRaises(InvalidInputError):
            TorsionPoint(1, 1, 2).embed()

    def test_order_divides_level_exhaustive(self):
        for n in range(1, 13):
            for t in enumerate_torsion(n):
                k = t.order()
                self.assertEqual(0, n % k)
                self.assertTrue((t * k).is_zero())
                self.assertTrue(all(not (t * j).is_zero() for j in range(1, k)))

    def test_pairing_alternating_bilinear(self):
        n = 6
        points = enumerate_torsion(n)
        for x in points[::5]:
            self.assertEqual(0, pairing(x, x))
            for y in points[::7]:
                self.assertEqual((-pairing(y, x)) % n, pairing(x, y))
                for z in points[::11]:
                    self.assertEqual((pairing(x, z) + pairing(y, z)) % n, pairing(x + y, z, level=n))

    def test_pairing_basis(self):
        self.assertEqual(1, pairing(TorsionPoint(1, 0, 5), TorsionPoint(0, 1, 5)))
        self.assertEqual(4, pairing(TorsionPoint(0, 1, 5), TorsionPoint(1, 0, 5)))

    def test_pairing_examples(self):
        self.assertEqual(1, pairing(TorsionPoint(1, 0, 6), TorsionPoint(0, 1, 6)))
        self.assertEqual(3, pairing(TorsionPoint(1, 0, 6), TorsionPoint(3, 3, 6)))

    def test_pairing_bad_level(self):
        with self.assertRaises(InvalidInputError):
            pairing(TorsionPoint(1, 0, 4), TorsionPoint(0, 1, 4), level=6)

    def test_exact_order_counts(self):
        for n in range(1, 31):
            self.assertEqual(torsion_count(n), len(enumerate_torsion(n, exact_order=True)))
            self.assertEqual(n * n, sum(torsion_count(d) for d in range(1, n + 1) if n % d == 0))
        self.assertEqual(3, torsion_count(2))
        self.assertEqual(24, torsion_count(6))

    def test_subgroups(self):
        self.assertEqual([TorsionPoint(0, 0, 2), TorsionPoint(1, 0, 2)],
                         subgroup_from_generators([TorsionPoint(1, 0, 2)]))
        self.assertEqual(4, len(subgroup_from_generators([TorsionPoint(1, 0, 4)])))
        full = subgroup_from_generators([TorsionPoint(1, 0, 2), TorsionPoint(0, 1, 2)])
        self.assertEqual(4, len(full))
        self.assertTrue(contains_full_two_torsion(full))
        mixed = subgroup_from_generators([TorsionPoint(1, 0, 4), TorsionPoint(0, 1, 2)])
        self.assertEqual(8, len(mixed))
        self.assertTrue(contains_full_two_torsion(mixed))
        self.assertFalse(contains_full_two_torsion(subgroup_from_generators([TorsionPoint(1, 0, 4)])))

    def test_halves(self):
        t = TorsionPoint(1, 2, 3)
        hs = halves(t)
        self.assertEqual(4, len(set(hs)))
        for eta in hs:
            self.assertEqual(t, eta * 2)

    def test_parse_torsion(self):
        t = parse_torsion("1/2,1/3")
        self.assertEqual(6, t.n)
        self.assertEqual((3, 2, 6), t.reduced())
        with self.assertRaises(InvalidInputError):
            parse_torsion("1/0,0/2")
        with self.assertRaises(InvalidInputError):
            parse_torsion("half")

    def test_embedding_is_torsion(self):
        lat = Lattice(1.0, complex(0.21, 1.37))
        for t in enumerate_torsion(5):
            z = t.embed(lat)
            self.assertLess(torus_distance(5 * z, 0.0, lat), 1e-12)
            self.assertTrue(cmath.isfinite(z))


if __name__ == '__main__':
    for case in (LatticeTests, TorusPointTests, TorsionPointTests):
        suite = unittest.TestLoader().loadTestsFromTestCase(case)
        unittest.TextTestRunner(verbosity=2).run(suite)
