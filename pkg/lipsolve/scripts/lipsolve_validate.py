#!/usr/bin/env python
"""
.. _lipsolve_validate:

``lipsolve_validate``
---------------------

::

    usage: lipsolve_validate [-h] [-v] (--model model.json | --binomial N,M | --example1 | --example2 EPS) [--grid GRID]

    Check a model table: every entry in [0, 1], every parameter's table summing to
    one, and every x reachable from some parameter.

    Exits with 0 if the model is valid and 1 otherwise, listing every violation.

    options:
      -h, --help            show this help message and exit
      -v, --verbose         log solver progress to stderr
      --model model.json    model table file
      --binomial N,M        binomial model with N past and M future trials
      --example1            binomial model with N=2 past trials and M=1 future trial
      --example2 EPS        two-parameter model with mixing weight EPS in (0, 1)
      --grid GRID           theta grid for built-in binomial models
"""

import sys

from lipsolve.io import load_model
from lipsolve.model import validate_model
from lipsolve.scripts.utils import (
    EXIT_INPUT_ERROR,
    EXIT_OK,
    add_model_arguments,
    make_parser,
    model_from_args,
    run,
)


def validate(args):
    if args.model is not None:
        m = load_model(args.model, validate=False)
        source = args.model
    else:
        m = model_from_args(args)
        source = "built-in model"
    report = validate_model(m)
    if report.is_valid:
        print(f"{source}: valid ({m.size} parameters, {m.space.k} x values, {m.space.l} y values)")
        return EXIT_OK
    print(f"{source}: {len(report)} violation(s)")
    print(report)
    return EXIT_INPUT_ERROR


def main():
    parser = make_parser(
        "lipsolve_validate",
        """
        Check a model table: every entry in [0, 1], every parameter's table summing to
        one, and every x reachable from some parameter.

        Exits with 0 if the model is valid and 1 otherwise, listing every violation.
        """,
    )
    add_model_arguments(parser)
    args = parser.parse_args()
    sys.exit(run(validate, args))


if __name__ == "__main__":
    main()
