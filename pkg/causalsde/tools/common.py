#!/usr/bin/env python3
#
# Copyright (c) 2021 causalsde developers
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in
# all copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.
#
"""Command-line plumbing shared by the experiment subcommands: argument
parsing, loading of the run configuration, and writing of the resolved
configuration, the JSON report and (on failure) an error record."""
import logging
import os

import causalsde.common.logging

from causalsde.common.argparse import ArgumentParser, existing_file, unsigned_int
from causalsde.common.schema import ConfigError
from causalsde.config import RunConfig
from causalsde.errors import CausalSDEError
from causalsde.report import write_error_record
from causalsde.yaml import YAMLError


# Errors that abort a run with an error record rather than a traceback
_RUN_ERRORS = (CausalSDEError, ConfigError, YAMLError, OSError, ValueError)


def build_parser(command, description=None):
    parser = ArgumentParser(prog="causalsde %s" % (command,), description=description)
    parser.add_argument(
        "--config",
        required=True,
        type=existing_file,
        metavar="YAML",
        help="Run configuration; see 'causalsde example' for a template.",
    )
    parser.add_argument(
        "--out",
        default=None,
        metavar="DIR",
        help="Output directory; overrides 'Output' in the configuration.",
    )
    parser.add_argument(
        "--seed",
        default=None,
        type=unsigned_int,
        metavar="U64",
        help="Seed for all random streams; overrides 'Seed' in the configuration.",
    )
    parser.add_argument(
        "--workers",
        default=None,
        type=int,
        metavar="N",
        help="Number of threads used for ensembles; overrides 'Experiment: Workers'.",
    )

    causalsde.common.logging.add_argument_group(parser)

    return parser


def run_command(command, argv, experiment, description=None):
    """Runs 'experiment(config)' for a subcommand and returns the exit code.

    The experiment returns a RunReport, which is written to
    '<out>/<command>.report.json'; the exit code is 0 iff every check of the
    report passed. Errors are logged and recorded in '<out>/error.json'.
    """
    parser = build_parser(command, description)
    args = parser.parse_args(argv)
    causalsde.common.logging.initialize_from_args(args)

    log = logging.getLogger(__name__)
    output = args.out or "."
    try:
        config = RunConfig.load(args.config, args.seed, args.out, args.workers)
        output = config.output
        os.makedirs(output, exist_ok=True)

        filename = config.write_resolved(command)
        log.info("Wrote resolved configuration to %r", filename)
        log.info("Running %r with seed %i", command, config.data["Seed"])

        report = experiment(config)
        report.write_json(config.output_path("%s.report.json" % (command,)))
    except _RUN_ERRORS as error:
        log.error("'causalsde %s' failed: %s", command, error)
        _write_error(output, command, error)
        return 1

    for line in report.summary_lines():
        log.info("%s", line)

    if not report.passed:
        log.error("Failed checks: %s", ", ".join(report.failed_checks()))
        return 1

    log.info("All checks passed")

    return 0


def _write_error(output, command, error):
    filename = os.path.join(output, "error.json")
    try:
        os.makedirs(output, exist_ok=True)
        write_error_record(filename, command, error)
    except OSError as write_error:
        logging.getLogger(__name__).warning(
            "Could not write error record to %r: %s", filename, write_error
        )
