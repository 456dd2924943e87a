import unittest
from torsionnodes.errors import InvalidInputError
from torsionnodes.policy import DEFAULT_POLICY
from torsionnodes.suite import CRITERIA, DETERMINISM_DEFAULTS, SuiteContext, run_criterion, run_suite
from torsionnodes.torus import Lattice


class SuiteTests(unittest.TestCase):

    def setUp(self):
        self.ctx = SuiteContext(seed=11, policy=DEFAULT_POLICY, scale=0.02)

    def test_registry_order(self):
        self.assertEqual(["translate-sum", "level-amplification", "zero-structure", "two-torsion-law",
                          "no-double-zero", "pairwise-disjointness", "nodal-fiber-sum", "monodromy",
                          "lemma-exhaustives", "arrangement-dichotomy", "uniqueness", "determinism"], list(CRITERIA))

    def test_exact_criteria(self):
        for name in ("monodromy", "lemma-exhaustives", "nodal-fiber-sum"):
            result = run_criterion(name, self.ctx)
            self.assertTrue(result.passed, result.detail)
            self.assertEqual(name, result.name)

    def test_numeric_criteria(self):
        for name in ("translate-sum", "level-amplification", "two-torsion-law", "no-double-zero", "uniqueness"):
            result = run_criterion(name, self.ctx)
            self.assertTrue(result.passed, result.detail)

    def test_zero_structure(self):
        result = run_criterion("zero-structure", self.ctx)
        self.assertTrue(result.passed, result.detail)
        self.assertEqual([], result.detail["failures"])

    def test_fixed_lattice(self):
        ctx = SuiteContext(seed=2, policy=DEFAULT_POLICY, lattice=Lattice(1.0, complex(0.21, 1.37)), scale=0.02)
        result = run_criterion("two-torsion-law", ctx)
        self.assertTrue(result.passed)
        self.assertEqual(1, result.detail["lattices"])

    def test_seeds_are_recorded(self):
        result = run_criterion("nodal-fiber-sum", self.ctx)
        self.assertEqual(11 * 1000 + 7, result.seed)

    def test_determinism(self):
        result = run_criterion("determinism", self.ctx)
        self.assertTrue(result.passed)
        self.assertEqual(list(DETERMINISM_DEFAULTS), result.detail["criteria"])

    def test_determinism_covers_selected_report(self):
        results = run_suite(self.ctx, ["determinism", "nodal-fiber-sum", "translate-sum"])
        self.assertEqual(["translate-sum", "nodal-fiber-sum", "determinism"], [r.name for r in results])
        self.assertTrue(results[-1].passed)
        self.assertEqual(["translate-sum", "nodal-fiber-sum"], results[-1].detail["criteria"])

    def test_selection_keeps_registry_order(self):
        results = run_suite(self.ctx, ["monodromy", "nodal-fiber-sum"])
        self.assertEqual(["nodal-fiber-sum", "monodromy"], [r.name for r in results])

    def test_unknown_criterion(self):
        with self.assertRaises(InvalidInputError):
            run_suite(self.ctx, ["no-such-check"])
        with self.assertRaises(InvalidInputError):
            run_criterion("no-such-check", self.ctx)


if __name__ == '__main__':
    suite = unittest.TestLoader().loadTestsFromTestCase(SuiteTests)
    unittest.TextTestRunner(verbosity=2).run(suite)
