import cmath
import math
import unittest
import mpmath
import numpy as np
from hypothesis import assume, given, settings, strategies as st
from torsionnodes.errors import InvalidInputError, PoleProximityError
from torsionnodes.theta import (quasi_periods, residue, theta1, theta1_derivatives, weierstrass_p,
                                weierstrass_p_prime, weierstrass_zeta, zeta_series)
from torsionnodes.torus import Lattice, torus_distance

coords = st.floats(min_value=0.05, max_value=0.95)
ROWS = 40


def eisenstein_zeta(z: complex, tau: complex) -> complex:
    """
    zeta summed row by row over the lattice Z + k*tau, each row in closed form through the cotangent
    """
    total = cmath.pi / cmath.tan(cmath.pi * z) + z * cmath.pi ** 2 / 3.0
    for k in range(1, ROWS + 1):
        for kk in (k, -k):
            total += (cmath.pi / cmath.tan(cmath.pi * (z - kk * tau)) + cmath.pi / cmath.tan(cmath.pi * kk * tau)
                      + z * cmath.pi ** 2 / cmath.sin(cmath.pi * kk * tau) ** 2)
    return total


def eisenstein_p(z: complex, tau: complex) -> complex:
    total = cmath.pi ** 2 / cmath.sin(cmath.pi * z) ** 2 - cmath.pi ** 2 / 3.0
    for k in range(1, ROWS + 1):
        for kk in (k, -k):
            total += (cmath.pi ** 2 / cmath.sin(cmath.pi * (z - kk * tau)) ** 2
                      - cmath.pi ** 2 / cmath.sin(cmath.pi * kk * tau) ** 2)
    return total


class ThetaSeriesTests(unittest.TestCase):

    def test_reference_sum(self):
        q, w = 0.05, 0.3
        reference = sum(2.0 * (-1) ** k * q ** ((k + 0.5) ** 2) * math.sin((2 * k + 1) * w) for k in range(50))
        self.assertAlmostEqual(reference, complex(theta1(w, q)).real, places=15)

    def test_against_mpmath(self):
        q = Lattice(1.0, complex(0.21, 1.37)).nome
        for w in (0.3 + 0.1j, -1.1 + 0.7j, 2.0 - 0.4j):
            expected = complex(mpmath.jtheta(1, mpmath.mpc(w.real, w.imag), mpmath.mpc(q.real, q.imag)))
            self.assertLess(abs(complex(theta1(w, q)) - expected), 1e-13 * max(1.0, abs(expected)))
            expected_d = complex(mpmath.jtheta(1, mpmath.mpc(w.real, w.imag), mpmath.mpc(q.real, q.imag), 1))
            self.assertLess(abs(complex(theta1_derivatives(w, q)[1]) - expected_d), 1e-12 * max(1.0, abs(expected_d)))

    @settings(max_examples=50, deadline=None, derandomize=True)
    @given(st.floats(min_value=-2.0, max_value=2.0), st.floats(min_value=-0.5, max_value=0.5))
    def test_odd(self, x, y):
        q = cmath.exp(1j * math.pi * complex(0.1, 1.2))
        w = complex(x, y)
        self.assertLess(abs(theta1(w, q) + theta1(-w, q)), 1e-13)

    def test_vectorized_matches_scalar(self):
        q = Lattice.square().nome
        ws = np.array([0.1, 0.2 + 0.3j, -0.7j])
        values = theta1(ws, q)
        for w, v in zip(ws, values):
            self.assertAlmostEqual(complex(theta1(complex(w), q)), v, places=14)

    def test_vanishes_at_origin(self):
        self.assertEqual(0.0, abs(complex(theta1(0.0, 0.3 + 0.1j))))

    def test_nome_limit(self):
        with self.assertRaises(InvalidInputError):
            theta1(0.3, 0.9995)


class WeierstrassTests(unittest.TestCase):

    square = Lattice.square()
    generic = Lattice(1.0, complex(0.21, 1.37))

    def test_legendre_relation(self):
        for lat in (self.square, self.generic, Lattice.hexagonal()):
            qp = quasi_periods(lat)
            self.assertLess(abs(qp.eta1 * lat.omega2 - qp.eta2 * lat.omega1 - 2j * math.pi), 1e-12)

    def test_square_eta1_is_pi(self):
        eta1 = quasi_periods(self.square).eta1
        self.assertAlmostEqual(math.pi, eta1.real, places=12)
        self.assertAlmostEqual(0.0, eta1.imag, places=12)

    def test_zeta_at_half_period(self):
        self.assertAlmostEqual(math.pi / 2, complex(weierstrass_zeta(0.5, self.square)), places=12)
        qp = quasi_periods(self.generic)
        self.assertAlmostEqual(qp.eta1 / 2, complex(weierstrass_zeta(0.5, self.generic)), places=12)

    def test_zeta_against_lattice_sum(self):
        for lat in (self.square, self.generic):
            for z in (0.5, 0.23 + 0.31j, -0.4 + 0.6j):
                self.assertLess(abs(complex(weierstrass_zeta(z, lat)) - eisenstein_zeta(z, lat.tau)), 1e-10)
                self.assertLess(abs(complex(weierstrass_p(z, lat)) - eisenstein_p(z, lat.tau)), 1e-9)

    @settings(max_examples=30, deadline=None, derandomize=True)
    @given(coords, coords, st.integers(min_value=-3, max_value=3), st.integers(min_value=-3, max_value=3))
    def test_quasi_periodicity(self, s, t, m, k):
        lat = self.generic
        z = lat.point(s, t)
        qp = quasi_periods(lat)
        shifted = complex(weierstrass_zeta(z + m * lat.omega1 + k * lat.omega2, lat))
        self.assertLess(abs(shifted - complex(weierstrass_zeta(z, lat)) - qp.increment(m, k)), 1e-10)
        self.assertLess(abs(complex(weierstrass_p(z + m + k * lat.omega2, lat)) - complex(weierstrass_p(z, lat))),
                        1e-9 * max(1.0, abs(complex(weierstrass_p(z, lat)))))

    def test_series_agrees_with_reduced_zeta(self):
        lat = self.generic
        for z in (0.3 + 0.2j, 1.4 - 0.3j, 0.9 + 0.9j):
            self.assertLess(abs(complex(zeta_series(z, lat)) - complex(weierstrass_zeta(z, lat))), 1e-10)

    @settings(max_examples=30, deadline=None, derandomize=True)
    @given(coords, coords)
    def test_zeta_is_odd(self, s, t):
        z = self.generic.point(s, t) - 0.5 * (1 + self.generic.omega2)
        assume(torus_distance(z, 0j, self.generic) > 1e-3)
        self.assertLess(abs(complex(weierstrass_zeta(z, self.generic) + weierstrass_zeta(-z, self.generic))), 1e-10)

    def test_p_is_minus_zeta_derivative(self):
        h = 1e-5
        for z in (0.31 + 0.27j, 0.6 + 0.9j):
            fd = (weierstrass_zeta(z + h, self.generic) - weierstrass_zeta(z - h, self.generic)) / (2 * h)
            self.assertLess(abs(complex(fd) + complex(weierstrass_p(z, self.generic))), 1e-6)
            fd = (weierstrass_p(z + h, self.generic) - weierstrass_p(z - h, self.generic)) / (2 * h)
            self.assertLess(abs(complex(fd) - complex(weierstrass_p_prime(z, self.generic))), 1e-5)

    def test_p_prime_vanishes_at_half_periods(self):
        for half in (0.5, 0.5 * self.generic.omega2, 0.5 + 0.5 * self.generic.omega2):
            self.assertLess(abs(complex(weierstrass_p_prime(half, self.generic))), 1e-9)

    def test_residue_of_zeta(self):
        res = residue(lambda z: weierstrass_zeta(z, self.generic), 0.0)
        self.assertLess(abs(res - 1.0), 1e-12)
        res = residue(lambda z: weierstrass_zeta(z, self.generic), self.generic.omega2)
        self.assertLess(abs(res - 1.0), 1e-12)

    def test_laurent_behaviour_at_origin(self):
        for h in (1e-2, 1e-3, 1e-4):
            z = h * (0.6 + 0.8j)
            self.assertLess(abs(z * complex(weierstrass_zeta(z, self.generic)) - 1.0), 1e-13 + 10 * h ** 4)
            self.assertLess(abs(complex(weierstrass_p(z, self.generic)) - z ** -2), 1e-5 + 100 * h ** 2)

    def test_pole_proximity(self):
        with self.assertRaises(PoleProximityError) as ctx:
            weierstrass_zeta(1e-12, self.square)
        self.assertEqual(2, ctx.exception.status)
        with self.assertRaises(PoleProximityError):
            weierstrass_p(np.array([0.3, 1.0 + 1e-13]), self.square)


if __name__ == '__main__':
    for case in (ThetaSeriesTests, WeierstrassTests):
        suite = unittest.TestLoader().loadTestsFromTestCase(case)
        unittest.TextTestRunner(verbosity=2).run(suite)
