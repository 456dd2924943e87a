import unittest
import torsionnodes.config
from torsionnodes.policy import NumericPolicy


class TorsionNodesAutoDiscoverConfigTests(unittest.TestCase):

    def test_auto_discover_global_config(self):
        config = torsionnodes.config.get_global_config()
        self.assertEqual("ERROR", config.get_screen_verbosity())
        self.assertEqual("ERROR", config.get_file_verbosity())
        self.assertEqual("$NONE", config.get_log_file())
        self.assertEqual(12, config.get_enumeration_cap())
        self.assertEqual(1, config.get_workers())
        self.assertEqual(20240601, config.get_default_seed())
        self.assertEqual({}, config.get_tolerances())

    def test_auto_discover_class_config(self):
        config = torsionnodes.config.get_config("clazz")

        # Inherited from GLOBAL
        self.assertEqual("$NONE", config.get_log_file())
        self.assertEqual(12, config.get_enumeration_cap())

        # Defined by class
        self.assertEqual(2, config.get_workers())
        self.assertEqual(7, config.get_default_seed())
        self.assertEqual({"arrangement_tol": 1.0e-5, "grid": 20}, config.get_tolerances())

        # Custom key/value without a builtin getter
        self.assertEqual("Value1", config.get("CUSTOM1"))

    def test_missing_section_uses_global(self):
        config = torsionnodes.config.get_config("NO_SUCH_SECTION")
        self.assertEqual(torsionnodes.config.get_global_config().data(), config.data())

    def test_config_file_is_reported(self):
        self.assertTrue(torsionnodes.config.get_config_file().endswith("torsionnodes-test.yaml"))

    def test_policy_from_class_config(self):
        policy = NumericPolicy.from_config(torsionnodes.config.get_config("CLAZZ"))
        self.assertEqual(1.0e-5, policy.arrangement_tol)
        self.assertEqual(20, policy.grid)
        self.assertEqual(12, policy.enumeration_cap)
        self.assertEqual(1e-9, policy.pole_proximity)


if __name__ == '__main__':
    suite = unittest.TestLoader().loadTestsFromTestCase(TorsionNodesAutoDiscoverConfigTests)
    unittest.TextTestRunner(verbosity=2).run(suite)
