import logging
import sys
import textwrap
from argparse import ArgumentParser, RawDescriptionHelpFormatter

from lipsolve import config
from lipsolve.builders import (
    binomial_mle_map,
    build_binomial_model,
    build_example1_model,
    build_example2_model,
)
from lipsolve.exceptions import LipsolveException, RejectedInput
from lipsolve.io import load_model
from lipsolve.solver import ALGORITHM_ALIASES, ALGORITHMS, SolverConfig
from lipsolve.util import parse_int_pair

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_NOT_CONVERGED = 2


class ScriptArgumentParser(ArgumentParser):
    """Usage errors are input errors; exit code 2 is reserved for non-convergence."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT_ERROR, f"{self.prog}: error: {message}\n")


def make_parser(prog, description):
    parser = ScriptArgumentParser(
        prog=prog,
        formatter_class=RawDescriptionHelpFormatter,
        description=textwrap.dedent(description),
    )
    parser.add_argument(
        "-v",
        "--verbose",
        action="store_true",
        help="log solver progress to stderr",
    )
    return parser


def parse_grid(text):
    """
    A theta grid: comma separated values (``0,0.25,1``) or ``uniform:K`` for the
    ``K + 1`` points ``k / K``.
    """
    if text.startswith("uniform:"):
        count = int(text.split(":", 1)[1])
        if count < 1:
            raise ValueError("uniform:K needs K >= 1")
        return tuple(k / count for k in range(count + 1))
    return tuple(float(value) for value in text.split(","))


def add_model_arguments(parser):
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--model", metavar="model.json", help="model table file")
    source.add_argument(
        "--binomial",
        metavar="N,M",
        type=parse_int_pair,
        help="binomial model with N past and M future trials",
    )
    source.add_argument(
        "--example1",
        action="store_true",
        help="binomial model with N=2 past trials and M=1 future trial",
    )
    source.add_argument(
        "--example2",
        metavar="EPS",
        type=float,
        help="two-parameter model with mixing weight EPS in (0, 1)",
    )
    parser.add_argument(
        "--grid",
        metavar="GRID",
        type=parse_grid,
        default=None,
        help="theta grid for built-in binomial models: 'uniform:K' or comma separated values "
        "(default: 0, 0.1, ..., 1)",
    )


def add_solver_arguments(parser):
    parser.add_argument(
        "--algorithm",
        choices=sorted(ALGORITHM_ALIASES) + list(ALGORITHMS),
        default=None,
        help=f"optimizer (default: {config.ALGORITHM})",
    )
    parser.add_argument(
        "--floor",
        type=float,
        default=None,
        help="mix every prior with this much of the uniform prior (default: 0)",
    )
    parser.add_argument(
        "--tol",
        type=float,
        default=None,
        help=f"certificate tolerance (default: {config.CERTIFICATE_TOLERANCE:g})",
    )
    parser.add_argument(
        "--max-iters",
        dest="max_iterations",
        type=int,
        default=None,
        help=f"iteration limit (default: {config.MAX_ITERATIONS})",
    )


def solver_config(args):
    options = {
        "algorithm": args.algorithm,
        "floor": args.floor,
        "certificate_tolerance": args.tol,
        "max_iterations": args.max_iterations,
    }
    return SolverConfig(**{name: value for name, value in options.items() if value is not None})


def model_from_args(args):
    grid = config.DEFAULT_GRID if args.grid is None else args.grid
    if args.model is not None:
        return load_model(args.model)
    if args.binomial is not None:
        return build_binomial_model(*args.binomial, grid)
    if args.example1:
        return build_example1_model(grid)
    return build_example2_model(args.example2)


def mle_map(m):
    """Maximum likelihood estimator on a binomial model's grid."""
    if m.theta_values is None:
        raise RejectedInput("a plug-in estimator needs a model with numeric theta values")
    return binomial_mle_map(m.space.k - 1, m.theta_values)


def setup_logging(verbose):
    if verbose:
        logging.basicConfig(level=logging.DEBUG, stream=sys.stderr)


def run(command, args):
    """Call ``command(args)`` and turn library errors into exit code 1."""
    setup_logging(args.verbose)
    try:
        return command(args)
    except (LipsolveException, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
