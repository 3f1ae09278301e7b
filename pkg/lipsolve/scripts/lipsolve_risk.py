#!/usr/bin/env python
"""
.. _lipsolve_risk:

``lipsolve_risk``
-----------------

::

    usage: lipsolve_risk [-h] [-v] (--model model.json | --binomial N,M | --example1 | --example2 EPS) [--grid GRID]
                         (--predictive q.json | --prior prior.json | --plug-in) [--format {json,csv}] [--out risks.json]

    Kullback-Leibler prediction risk of a predictive table at every grid point.

    The predictive is read from a file, taken as the (limit of) Bayes predictive of
    a prior file, or built by plugging the maximum likelihood estimate into a
    binomial model. Infinite risks are written as "inf".

    options:
      -h, --help            show this help message and exit
      -v, --verbose         log solver progress to stderr
      --predictive q.json   predictive table file
      --prior prior.json    prior file; its Bayes predictive is used
      --plug-in             maximum likelihood plug-in predictive (binomial models)
      --format {json,csv}   output format (default: json)
      --out risks.json      output file (default: stdout)
"""

import sys

from lipsolve.exceptions import RejectedInput
from lipsolve.functionals import risk_profile
from lipsolve.integration.pandas import risk_profile_frame, to_csv
from lipsolve.io import load_predictive, load_prior
from lipsolve.predictive import limit_predictive, plug_in_predictive
from lipsolve.schema import RiskProfileDocument
from lipsolve.scripts.utils import (
    EXIT_OK,
    add_model_arguments,
    make_parser,
    mle_map,
    model_from_args,
    run,
)
from lipsolve.util import atomic_write, dump_json


def predictive_from_args(args, m):
    if args.predictive is not None:
        q = load_predictive(args.predictive)
        if q.space != m.space:
            raise RejectedInput("the predictive's x and y labels do not match the model")
        return q
    if args.prior is not None:
        prior = load_prior(args.prior)
        if len(prior) != m.size:
            raise RejectedInput("the prior does not match the model's grid")
        return limit_predictive(m, prior).final
    return plug_in_predictive(m, mle_map(m))


def render(profile, fmt):
    if fmt == "csv":
        return to_csv(risk_profile_frame(profile))
    document = RiskProfileDocument(
        theta_labels=profile.theta_labels, risks=list(profile)
    )
    return dump_json(document.to_dict())


def risk(args):
    m = model_from_args(args)
    profile = risk_profile(m, predictive_from_args(args, m))
    text = render(profile, args.format)
    if args.out is None:
        sys.stdout.write(text)
    else:
        atomic_write(args.out, text)
        print(f"sup risk {profile.sup:.12g} nats over {len(profile)} parameters")
        print(f"Written to {args.out}")
    return EXIT_OK


def main():
    parser = make_parser(
        "lipsolve_risk",
        """
        Kullback-Leibler prediction risk of a predictive table at every grid point.

        The predictive is read from a file, taken as the (limit of) Bayes predictive of
        a prior file, or built by plugging the maximum likelihood estimate into a
        binomial model. Infinite risks are written as "inf".
        """,
    )
    add_model_arguments(parser)
    predictive = parser.add_mutually_exclusive_group(required=True)
    predictive.add_argument(
        "--predictive", metavar="q.json", help="predictive table file"
    )
    predictive.add_argument(
        "--prior",
        metavar="prior.json",
        help="prior file; its Bayes predictive is used",
    )
    predictive.add_argument(
        "--plug-in",
        dest="plug_in",
        action="store_true",
        help="maximum likelihood plug-in predictive (binomial models)",
    )
    parser.add_argument(
        "--format",
        choices=("json", "csv"),
        default="json",
        help="output format (default: json)",
    )
    parser.add_argument(
        "--out",
        metavar="risks.json",
        default=None,
        help="output file (default: stdout)",
    )
    args = parser.parse_args()
    sys.exit(run(risk, args))


if __name__ == "__main__":
    main()
