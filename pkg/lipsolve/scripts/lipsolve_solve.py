#!/usr/bin/env python
"""
.. _lipsolve_solve:

``lipsolve_solve``
------------------

::

    usage: lipsolve_solve [-h] [-v] (--model model.json | --binomial N,M | --example1 | --example2 EPS) [--grid GRID]
                          [--algorithm {eg,fw,frank-wolfe,exp-gradient}] [--floor FLOOR] [--anneal] [--tol TOL]
                          [--max-iters MAX_ITERATIONS] [--format {json,csv}] [--trace] [--out result.json]

    Compute the latent information prior of a model: the prior maximizing the
    conditional mutual information between the parameter and the future
    observation given the past one.

    With --anneal the solve is repeated on floors 1/2, 1/4, ... (mixing in the
    uniform prior), each warm-started from the previous one; the last result is
    written.

    The result is written as JSON (prior weights, objective, certificate gap) or as a
    theta_label,weight CSV. Exits with 0 on success, 1 on input errors and 2 if
    the solver did not reach the certificate tolerance (the result is still written).

    options:
      -h, --help            show this help message and exit
      -v, --verbose         log solver progress to stderr
      --anneal              solve on the geometric floor schedule
      --format {json,csv}   output format (default: json)
      --trace               include the (objective, gap) trace in JSON output
      --out result.json     output file (default: stdout)
"""

import sys

from lipsolve import config
from lipsolve.integration.pandas import prior_frame, to_csv
from lipsolve.schema import SolverResultDocument
from lipsolve.scripts.utils import (
    EXIT_NOT_CONVERGED,
    EXIT_OK,
    add_model_arguments,
    add_solver_arguments,
    make_parser,
    model_from_args,
    run,
    solver_config,
)
from lipsolve.solver import anneal_lip, solve_lip
from lipsolve.util import atomic_write, dump_json


def render(result, m, fmt, trace=False):
    if fmt == "csv":
        return to_csv(prior_frame(result.prior, m.theta_labels))
    document = SolverResultDocument.from_object(
        result, m.theta_labels, generator=config.USER_AGENT, trace=trace
    )
    return dump_json(document.to_dict())


def solve(args):
    m = model_from_args(args)
    cfg = solver_config(args)
    result = anneal_lip(m, cfg=cfg)[-1] if args.anneal else solve_lip(m, cfg)
    text = render(result, m, args.format, args.trace)
    if args.out is None:
        sys.stdout.write(text)
    else:
        atomic_write(args.out, text)
        print(
            f"I = {result.objective:.12g} nats, certificate gap {result.certificate_gap:.3g}, "
            f"{result.support_size} support points, {result.iterations} iterations"
        )
        print(f"Written to {args.out}")
    if not result.converged:
        print(
            f"warning: not converged after {result.iterations} iterations "
            f"(gap {result.certificate_gap:.3g})",
            file=sys.stderr,
        )
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def main():
    parser = make_parser(
        "lipsolve_solve",
        """
        Compute the latent information prior of a model: the prior maximizing the
        conditional mutual information between the parameter and the future
        observation given the past one.

        With --anneal the solve is repeated on floors 1/2, 1/4, ... (mixing in the
        uniform prior), each warm-started from the previous one; the last result is
        written.

        The result is written as JSON (prior weights, objective, certificate gap) or as a
        theta_label,weight CSV. Exits with 0 on success, 1 on input errors and 2 if
        the solver did not reach the certificate tolerance (the result is still written).
        """,
    )
    add_model_arguments(parser)
    add_solver_arguments(parser)
    parser.add_argument(
        "--anneal",
        action="store_true",
        help="solve on the geometric floor schedule",
    )
    parser.add_argument(
        "--format",
        choices=("json", "csv"),
        default="json",
        help="output format (default: json)",
    )
    parser.add_argument(
        "--trace",
        action="store_true",
        help="include the (objective, gap) trace in JSON output",
    )
    parser.add_argument(
        "--out",
        metavar="result.json",
        default=None,
        help="output file (default: stdout)",
    )
    args = parser.parse_args()
    if args.anneal and args.floor is not None:
        parser.error("--anneal and --floor are mutually exclusive")
    sys.exit(run(solve, args))


if __name__ == "__main__":
    main()
