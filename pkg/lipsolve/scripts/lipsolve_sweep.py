#!/usr/bin/env python
"""
.. _lipsolve_sweep:

``lipsolve_sweep``
------------------

::

    usage: lipsolve_sweep [-h] [-v] (--pairs "N1,M1;N2,M2;..." | --default-figure1) [--grid GRID]
                          [--algorithm {eg,fw,frank-wolfe,exp-gradient}] [--floor FLOOR] [--anneal] [--tol TOL]
                          [--max-iters MAX_ITERATIONS] --out DIR

    Solve the latent information prior of the binomial model for several
    (N past trials, M future trials) pairs.

    Writes pair_N{N}_M{M}.json for every pair, figure1.csv with one row per
    (N, M, theta) weight and summary.csv with the objective, certificate gap,
    support size and the total variation distance to the uniform prior and to the
    Jeffreys histogram of each pair.

    Pairs are solved in parallel; set LIPSOLVE_THREADS to cap the number of worker
    processes. A failing pair is reported and skipped. Exits with 1 if any pair
    failed and with 2 if any pair did not converge.

    options:
      -h, --help            show this help message and exit
      -v, --verbose         log solver progress to stderr
      --pairs "N1,M1;N2,M2;..."
                            (N, M) pairs to solve
      --default-figure1     N in 0, 5, 20, 100 crossed with M in 1, 5, 100, 1000
      --out DIR             output directory
"""

import logging
import os
import sys
from multiprocessing import Pool

from lipsolve import config
from lipsolve.builders import build_binomial_model
from lipsolve.exceptions import LipsolveException, RejectedInput
from lipsolve.integration.pandas import summary_frame, sweep_frame, to_csv
from lipsolve.io import write_document
from lipsolve.reference import jeffreys_histogram, reference_prior, total_variation
from lipsolve.schema import SolverResultDocument
from lipsolve.scripts.utils import (
    EXIT_INPUT_ERROR,
    EXIT_NOT_CONVERGED,
    EXIT_OK,
    add_solver_arguments,
    make_parser,
    parse_grid,
    run,
    solver_config,
)
from lipsolve.solver import anneal_lip, solve_lip
from lipsolve.util import parse_int_pair

logger = logging.getLogger(__name__)


def parse_pairs(text):
    """``"N1,M1;N2,M2"`` to ``[(N1, M1), (N2, M2)]``."""
    pairs = [parse_int_pair(part) for part in text.split(";") if part.strip()]
    if not pairs:
        raise ValueError("no (N, M) pairs given")
    return pairs


def default_pairs():
    return [(n, m) for n in config.FIGURE1_N for m in config.FIGURE1_M]


def threads():
    value = os.environ.get("LIPSOLVE_THREADS")
    if not value:
        return config.THREADS
    if not value.strip().isdigit() or int(value) < 1:
        raise RejectedInput(f"LIPSOLVE_THREADS must be a positive integer, got {value!r}")
    return int(value)


def solve_pair(task):
    """
    Solve one pair. Returns ``(N, M, labels, result, tv_uniform, tv_jeffreys, None)``
    or ``(N, M, None, None, None, None, error)``.
    """
    n_past, m_future, grid, cfg, anneal = task
    try:
        m = build_binomial_model(n_past, m_future, grid)
        result = anneal_lip(m, cfg=cfg)[-1] if anneal else solve_lip(m, cfg)
        tv_uniform = total_variation(result.prior, reference_prior(m))
        tv_jeffreys = total_variation(result.prior, jeffreys_histogram(m.theta_values))
    except LipsolveException as e:
        return n_past, m_future, None, None, None, None, str(e)
    except Exception as e:
        logger.exception("unexpected error solving N=%d, M=%d", n_past, m_future)
        return n_past, m_future, None, None, None, None, f"{type(e).__name__}: {e}"
    return n_past, m_future, m.theta_labels, result, tv_uniform, tv_jeffreys, None


def solve_all(tasks, processes):
    if processes == 1 or len(tasks) == 1:
        return [solve_pair(task) for task in tasks]
    with Pool(min(processes, len(tasks))) as pool:
        return pool.map(solve_pair, tasks)


def sweep(args):
    pairs = default_pairs() if args.default_figure1 else args.pairs
    grid = config.DEFAULT_GRID if args.grid is None else args.grid
    cfg = solver_config(args)
    tasks = [(n_past, m_future, grid, cfg, args.anneal) for n_past, m_future in pairs]
    processes = threads()
    print(f"Solving {len(tasks)} pairs with {min(processes, len(tasks))} worker(s)")

    solved, failed, not_converged = [], [], []
    for n_past, m_future, labels, result, tv_u, tv_j, error in solve_all(tasks, processes):
        if error is not None:
            logger.warning("pair N=%d, M=%d failed: %s", n_past, m_future, error)
            print(f"N={n_past}, M={m_future}: failed: {error}")
            failed.append((n_past, m_future))
            continue
        path = os.path.join(args.out, f"pair_N{n_past}_M{m_future}.json")
        document = SolverResultDocument.from_object(
            result, labels, generator=config.USER_AGENT
        )
        write_document(document, path)
        print(
            f"N={n_past}, M={m_future}: I = {result.objective:.10g}, "
            f"gap {result.certificate_gap:.3g}, support {result.support_size}"
        )
        if not result.converged:
            not_converged.append((n_past, m_future))
        solved.append((n_past, m_future, labels, result, tv_u, tv_j))

    to_csv(
        sweep_frame((n, m, labels, result.prior) for n, m, labels, result, _, _ in solved),
        os.path.join(args.out, "figure1.csv"),
    )
    to_csv(
        summary_frame((n, m, result, tv_u, tv_j) for n, m, _, result, tv_u, tv_j in solved),
        os.path.join(args.out, "summary.csv"),
    )
    print(f"Written to {args.out}")
    if failed:
        return EXIT_INPUT_ERROR
    if not_converged:
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def main():
    parser = make_parser(
        "lipsolve_sweep",
        """
        Solve the latent information prior of the binomial model for several
        (N past trials, M future trials) pairs.

        Writes pair_N{N}_M{M}.json for every pair, figure1.csv with one row per
        (N, M, theta) weight and summary.csv with the objective, certificate gap,
        support size and the total variation distance to the uniform prior and to the
        Jeffreys histogram of each pair.

        Pairs are solved in parallel; set LIPSOLVE_THREADS to cap the number of worker
        processes. A failing pair is reported and skipped. Exits with 1 if any pair
        failed and with 2 if any pair did not converge.
        """,
    )
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument(
        "--pairs",
        metavar='"N1,M1;N2,M2;..."',
        type=parse_pairs,
        help="(N, M) pairs to solve",
    )
    source.add_argument(
        "--default-figure1",
        dest="default_figure1",
        action="store_true",
        help="N in 0, 5, 20, 100 crossed with M in 1, 5, 100, 1000",
    )
    parser.add_argument(
        "--grid",
        metavar="GRID",
        type=parse_grid,
        default=None,
        help="theta grid: 'uniform:K' or comma separated values (default: 0, 0.1, ..., 1)",
    )
    add_solver_arguments(parser)
    parser.add_argument(
        "--anneal",
        action="store_true",
        help="solve every pair on the geometric floor schedule",
    )
    parser.add_argument("--out", metavar="DIR", required=True, help="output directory")
    args = parser.parse_args()
    if args.anneal and args.floor is not None:
        parser.error("--anneal and --floor are mutually exclusive")
    sys.exit(run(sweep, args))


if __name__ == "__main__":
    main()
