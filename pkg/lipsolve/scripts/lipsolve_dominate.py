#!/usr/bin/env python
"""
.. _lipsolve_dominate:

``lipsolve_dominate``
---------------------

::

    usage: lipsolve_dominate [-h] [-v] (--model model.json | --binomial N,M | --example1 | --example2 EPS) [--grid GRID]
                             (--predictive q.json | --plug-in | --example2-predictive)
                             [--algorithm {eg,fw,frank-wolfe,exp-gradient}] [--floor FLOOR] [--tol TOL]
                             [--max-iters MAX_ITERATIONS] [--out dominating.json] [--comparison comparison.csv]

    Build a limit of Bayes predictives whose Kullback-Leibler risk is nowhere
    larger than that of the given predictive table, and compare the two risk
    profiles parameter by parameter.

    The composed predictive is written as JSON with a flag per x row ("direct" or
    "limit-filled"); the comparison table has columns theta_label, risk_q,
    risk_dominating and relation. Exits with 2 if the D_q minimization did not
    converge.

    options:
      -h, --help            show this help message and exit
      -v, --verbose         log solver progress to stderr
      --predictive q.json   predictive table file
      --plug-in             maximum likelihood plug-in predictive (binomial models)
      --example2-predictive
                            the predictive table of the two-parameter example
      --out dominating.json
                            composed predictive file
      --comparison comparison.csv
                            risk comparison file
"""

import sys

from lipsolve.builders import example2_predictive
from lipsolve.dominator import dominating_predictive
from lipsolve.exceptions import RejectedInput
from lipsolve.integration.pandas import risk_comparison_frame, to_csv
from lipsolve.io import load_predictive, write_document
from lipsolve.predictive import plug_in_predictive
from lipsolve.schema import LimitReportDocument
from lipsolve.scripts.utils import (
    EXIT_NOT_CONVERGED,
    EXIT_OK,
    add_model_arguments,
    add_solver_arguments,
    make_parser,
    mle_map,
    model_from_args,
    run,
    solver_config,
)


def predictive_from_args(args, m):
    if args.predictive is not None:
        q = load_predictive(args.predictive)
    elif args.plug_in:
        q = plug_in_predictive(m, mle_map(m))
    else:
        q = example2_predictive()
    if q.space != m.space:
        raise RejectedInput("the predictive's x and y labels do not match the model")
    return q


def dominate(args):
    m = model_from_args(args)
    q = predictive_from_args(args, m)
    domination = dominating_predictive(m, q, solver_config(args))
    frame = risk_comparison_frame(domination.comparison)
    print(frame.to_string(index=False))
    verdict = "dominates" if domination.comparison.dominates else "does not dominate"
    print(f"composed predictive {verdict} the input; D_q = {domination.d_q_value:.12g}")
    if args.out is not None:
        write_document(LimitReportDocument.from_object(domination.limit), args.out)
        print(f"Written to {args.out}")
    if args.comparison is not None:
        to_csv(frame, args.comparison)
        print(f"Written to {args.comparison}")
    if not domination.converged:
        print(
            f"warning: D_q minimization not converged (gap {domination.result.certificate_gap:.3g})",
            file=sys.stderr,
        )
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def main():
    parser = make_parser(
        "lipsolve_dominate",
        """
        Build a limit of Bayes predictives whose Kullback-Leibler risk is nowhere
        larger than that of the given predictive table, and compare the two risk
        profiles parameter by parameter.

        The composed predictive is written as JSON with a flag per x row ("direct" or
        "limit-filled"); the comparison table has columns theta_label, risk_q,
        risk_dominating and relation. Exits with 2 if the D_q minimization did not
        converge.
        """,
    )
    add_model_arguments(parser)
    predictive = parser.add_mutually_exclusive_group(required=True)
    predictive.add_argument(
        "--predictive", metavar="q.json", help="predictive table file"
    )
    predictive.add_argument(
        "--plug-in",
        dest="plug_in",
        action="store_true",
        help="maximum likelihood plug-in predictive (binomial models)",
    )
    predictive.add_argument(
        "--example2-predictive",
        dest="example2_predictive",
        action="store_true",
        help="the predictive table of the two-parameter example",
    )
    add_solver_arguments(parser)
    parser.add_argument(
        "--out",
        metavar="dominating.json",
        default=None,
        help="composed predictive file",
    )
    parser.add_argument(
        "--comparison",
        metavar="comparison.csv",
        default=None,
        help="risk comparison file",
    )
    args = parser.parse_args()
    sys.exit(run(dominate, args))


if __name__ == "__main__":
    main()
