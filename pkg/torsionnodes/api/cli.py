"""
Command line front end: torsionnodes {bfun,classify,monodromy,verify} [options]

Every command builds a report dictionary, wraps it in a Result and returns the Result status as the exit code.
"""
import argparse
import os
import re
from typing import List, Optional
from torsionnodes.api.report import FORMATS, write_report
from torsionnodes.api.result import EXIT_OK, EXIT_UNCLASSIFIED, EXIT_VERIFY_FAILED, Result
from torsionnodes.arrangement import Verdict, classify_arrangement, dichotomy_experiment
from torsionnodes.bfunc import (TRANSLATE_SUM_TOL, check_no_double_zero, construct_b, find_zeros, residues,
                                translate_sum, zero_torsion_check)
from torsionnodes.config import get_config, get_config_file, get_global_config
from torsionnodes.errors import InvalidInputError, NumericFailure, TorsionNodesError
from torsionnodes.policy import NumericPolicy
from torsionnodes.suite import CRITERIA, SuiteContext, run_suite
from torsionnodes.torsion_group import (DEFAULT_DELTAS, check_surjectivity, check_surjectivity_prime_powers,
                                        gcd_pairing_check, generated_subgroup, indivisibility_check, lem5_scan,
                                        orbit_on_exact_order, sl2_order, transvection, triple_exclusion_exhaustive)
from torsionnodes.torus import Lattice, parse_lattice, parse_torsion, subgroup_from_generators
from torsionnodes.utils import complex_pair, get_logger, make_rng

global_config = get_global_config()
logger = get_logger("CLI",
                    global_config.get_log_file(),
                    global_config.get_file_verbosity(),
                    global_config.get_screen_verbosity())

_VECTOR_RE = re.compile(r"^\s*([-+]?\d+)\s*,\s*([-+]?\d+)\s*$")
_RANGE_RE = re.compile(r"^\s*(\d+)\s*\.\.\s*(\d+)\s*$")


class ArgumentParser(argparse.ArgumentParser):
    """
    Reports usage errors as InvalidInputError so that they map to exit status 1
    """

    def error(self, message):
        raise InvalidInputError(message)


def parse_complex(text: str) -> complex:
    """Accepts "re,im" or a single real number"""
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise InvalidInputError("Point must look like <re>,<im>", text=text)


def parse_vector(text: str):
    match = _VECTOR_RE.match(text)
    if match is None:
        raise InvalidInputError("Vector must look like x,y", text=text)
    return int(match.group(1)), int(match.group(2))


def parse_range(text: str) -> List[int]:
    match = _RANGE_RE.match(text)
    if match is None:
        raise InvalidInputError("Range must look like a..b", text=text)
    return list(range(int(match.group(1)), int(match.group(2)) + 1))


def parse_overrides(items: Optional[List[str]]) -> dict:
    """
    Tolerance overrides: KEY=VALUE pairs naming policy fields; a bare number sets the arrangement tolerance
    """
    overrides = {}
    for item in items or []:
        if "=" in item:
            key, value = item.split("=", 1)
            overrides[key.strip()] = value.strip()
        else:
            overrides["arrangement_tol"] = item.strip()
    try:
        NumericPolicy().with_overrides(**overrides)
    except ValueError as e:
        raise InvalidInputError("Bad tolerance value: {0}".format(e))
    return overrides


class RunConfig:
    """
    Resolved settings for one command: configuration section, policy, lattice and seed
    """

    def __init__(self, args):
        self.command = args.command
        self.config = get_config(args.command)
        self.overrides = parse_overrides(args.tol)
        if args.cap is not None:
            self.overrides["enumeration_cap"] = args.cap
        try:
            self.policy = NumericPolicy.from_config(self.config).with_overrides(**self.overrides)
        except ValueError as e:
            raise InvalidInputError("Bad tolerance value: {0}".format(e))
        self.seed = args.seed if args.seed is not None else self.config.get_default_seed()
        self.workers = args.workers if args.workers is not None else self.config.get_workers()
        self.random_lattice = args.lattice == "random"
        self.lattice = Lattice.random(make_rng(self.seed)) if self.random_lattice else parse_lattice(args.lattice)
        if self.lattice.is_special():
            logger.warning("lattice tau=%s is special; genericity statements need not hold", self.lattice.omega2)

    def header(self) -> dict:
        return {"command": self.command,
                "config_file": get_config_file(),
                "config_env": os.getenv("TORSIONNODES_CONFIG_FILE"),
                "seed": self.seed,
                "lattice": self.lattice.to_transport_format(),
                "random_lattice": self.random_lattice,
                "tolerances": self.policy.as_dict(),
                "overrides": dict(self.overrides)}


def cmd_bfun(args) -> Result:
    run = RunConfig(args)
    lat, policy = run.lattice, run.policy
    tau = parse_torsion(args.tau, lat)
    f = construct_b(parse_complex(args.p), tau, lat, policy=policy)
    zeros = find_zeros(f, policy)
    rng = make_rng(run.seed + 1)
    residual = 0.0
    for _ in range(20):
        try:
            residual = max(residual, abs(translate_sum(f, lat.point(*rng.uniform(0.0, 1.0, size=2)), policy)))
        except NumericFailure:
            continue
    res_p, res_q = residues(f, policy)
    report = run.header()
    report.update({"b": f.to_transport_format(),
                   "residues": {"p": complex_pair(res_p), "p_minus_tau": complex_pair(res_q)},
                   "zeros": zeros.to_transport_format(),
                   "abel_residual": zeros.abel_residual,
                   "translate_sum_residual": residual,
                   "translate_sum_ok": residual <= TRANSLATE_SUM_TOL,
                   "double_zero": check_no_double_zero(f, policy).to_transport_format(),
                   "zero_torsion_levels": zero_torsion_check(f, policy=policy),
                   "points": [[q.z.real, q.z.imag, "zero"] for q in (zeros.q1, zeros.q2)] +
                             [[z.real, z.imag, "pole"] for z in f.poles]})
    return Result(EXIT_OK, report)


def cmd_classify(args) -> Result:
    run = RunConfig(args)
    report = run.header()
    if args.m_sweep:
        sweep = []
        status = EXIT_OK
        for m in parse_range(args.m_sweep):
            if m < 2:
                continue
            experiment = dichotomy_experiment(m, args.trials, run.seed + m, run.policy, run.workers)
            sweep.append(experiment.to_transport_format())
            if any(r.verdict is Verdict.Unclassified for r in experiment.runs):
                status = EXIT_UNCLASSIFIED
        report.update({"sweep": sweep, "trials": args.trials, "points": []})
        return Result(status, report)
    if not args.subgroup:
        raise InvalidInputError("classify needs --subgroup generators or --m-sweep")
    gens = [parse_torsion(text, run.lattice) for text in args.subgroup]
    subgroup = subgroup_from_generators(gens)
    arrangement = classify_arrangement(subgroup, parse_complex(args.p), run.lattice, args.cluster_tol, run.policy,
                                       run.workers)
    report.update(arrangement.to_transport_format())
    report["generators"] = [g.to_text() for g in gens]
    kinds = {2: "node", 3: "triple"}
    report["points"] = [[c.center.real, c.center.imag, kinds.get(c.branches, "cluster")]
                        for c in arrangement.clusters]
    status = EXIT_UNCLASSIFIED if arrangement.verdict is Verdict.Unclassified else EXIT_OK
    return Result(status, report)


def cmd_monodromy(args) -> Result:
    run = RunConfig(args)
    cap = run.policy.enumeration_cap
    n = args.n
    if n < 1:
        raise InvalidInputError("Level must be positive", n=n)
    deltas = [parse_vector(v) for v in args.deltas] if args.deltas else list(DEFAULT_DELTAS)
    report = run.header()
    report["n"] = n
    report["deltas"] = [list(d) for d in deltas]
    if args.lem5:
        checked, counterexample = lem5_scan(n)
        report["order_two_difference"] = {"holds": counterexample is None, "checked": checked,
                                          "counterexample": counterexample}
    if args.triples:
        report["triple_exclusion"] = triple_exclusion_exhaustive(min(max(n, 2), 12)).to_transport_format()
    if not args.lem5 and not args.triples:
        group = generated_subgroup([transvection(d, n) for d in deltas], cap)
        orbits = orbit_on_exact_order(deltas, n, cap)
        report.update({"order": group.order,
                       "sl2_order": sl2_order(n),
                       "surjective": check_surjectivity(deltas, n, cap),
                       "prime_power_surjectivity": {str(q): ok for q, ok in
                                                    check_surjectivity_prime_powers(deltas, n, cap).items()},
                       "orbit_sizes": [len(o) for o in orbits],
                       "gcd_pairing": gcd_pairing_check(deltas, n),
                       "indivisible": indivisibility_check(deltas, n)})
    report["points"] = []
    return Result(EXIT_OK, report)


def cmd_verify(args) -> Result:
    run = RunConfig(args)
    ctx = SuiteContext(run.seed, run.policy, None if args.lattice == "random" else run.lattice, args.scale, args.n,
                       run.workers)
    results = run_suite(ctx, args.only)
    report = run.header()
    report["criteria"] = [r.to_transport_format() for r in results]
    report["passed"] = all(r.passed for r in results)
    report["points"] = []
    return Result(EXIT_OK if report["passed"] else EXIT_VERIFY_FAILED, report)


COMMANDS = {"bfun": cmd_bfun, "classify": cmd_classify, "monodromy": cmd_monodromy, "verify": cmd_verify}


def build_parser() -> ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument("--lattice", default="random", help="tau=<re>,<im>, square, hexagonal or random")
    common.add_argument("--seed", type=int, default=None, help="seed for random lattices and samples")
    common.add_argument("--tol", action="append", help="tolerance override KEY=VALUE, or a bare clustering tolerance")
    common.add_argument("--format", choices=FORMATS, default="json")
    common.add_argument("--out", default=None, help="output file (default stdout)")
    common.add_argument("--workers", type=int, default=None, help="threads for sweeps")
    common.add_argument("--cap", type=int, default=None, help="largest level for exhaustive enumeration")

    parser = ArgumentParser(prog="torsionnodes", description="b-functions, torsion monodromy and arrangements "
                                                             "of translated curves on complex tori")
    sub = parser.add_subparsers(dest="command")

    bfun = sub.add_parser("bfun", parents=[common], help="construct b and find its zeros")
    bfun.add_argument("--p", default="0", help="base point <re>,<im>")
    bfun.add_argument("--tau", required=True, help="torsion point a/n,b/n")

    classify = sub.add_parser("classify", parents=[common], help="classify an arrangement")
    classify.add_argument("--subgroup", nargs="+", help="generators a/n,b/n")
    classify.add_argument("--p", default="0", help="base point <re>,<im>")
    classify.add_argument("--cluster-tol", type=float, default=None)
    classify.add_argument("--m-sweep", default=None, help="range of subgroup orders a..b")
    classify.add_argument("--trials", type=int, default=5)

    monodromy = sub.add_parser("monodromy", parents=[common], help="transvection groups and exhaustive lemmas")
    monodromy.add_argument("--n", type=int, required=True)
    monodromy.add_argument("--deltas", nargs="+", help="vanishing cycles x,y")
    monodromy.add_argument("--lem5", action="store_true", help="check the order-2 difference statement at n")
    monodromy.add_argument("--triples", action="store_true", help="check the triple exclusion statement")

    verify = sub.add_parser("verify", parents=[common], help="run the verification suite")
    verify.add_argument("--only", nargs="+", choices=sorted(CRITERIA))
    verify.add_argument("--n", type=int, default=12, help="largest level for the nodal fiber identity")
    verify.add_argument("--scale", type=float, default=1.0, help="fraction of the full sample counts")
    return parser


def parse(argv: Optional[List[str]] = None):
    """
    Parses the command line

    Raises
    ------
    InvalidInputError
        On any usage error
    """
    args = build_parser().parse_args(argv)
    if args.command is None:
        raise InvalidInputError("A command is required: " + ", ".join(COMMANDS))
    if args.workers is not None and args.workers < 1:
        raise InvalidInputError("--workers must be positive")
    return args


def execute(args) -> Result:
    """
    Runs the parsed command, mapping package errors to Result statuses
    """
    try:
        return COMMANDS[args.command](args)
    except TorsionNodesError as e:
        logger.error("%s failed: %s", args.command, e)
        return Result.from_error(e, command=args.command)


def run(argv: Optional[List[str]] = None) -> Result:
    try:
        args = parse(argv)
    except InvalidInputError as e:
        logger.error("bad arguments: %s", e)
        return Result.from_error(e)
    return execute(args)


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = parse(argv)
    except InvalidInputError as e:
        logger.error("bad arguments: %s", e)
        result = Result.from_error(e)
        write_report(result)
        return result.status
    result = execute(args)
    write_report(result, args.format, args.out)
    return result.status
