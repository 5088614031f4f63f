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
"""Console logging through coloredlogs, plus an optional plain log file; the
command-line options are shared by every experiment."""
import logging

import coloredlogs


LEVELS = ("debug", "info", "warning", "error")

_FORMAT = "%(asctime)s %(name)s %(levelname)s %(message)s"
_console_installed = False


def initialize_console_logging():
    """Installs the colored STDERR handler once per process."""
    global _console_installed

    if not _console_installed:
        coloredlogs.install(fmt=_FORMAT)
        _console_installed = True


def initialize(log_level="info", log_file=None):
    initialize_console_logging()

    level = getattr(logging, log_level.upper())
    logging.getLogger().setLevel(level)
    coloredlogs.set_level(level)

    if log_file:
        handler = logging.FileHandler(log_file)
        handler.setFormatter(logging.Formatter(_FORMAT))
        logging.getLogger().addHandler(handler)


def add_argument_group(parser, default="info"):
    """Adds the logging options expected by 'initialize_from_args'."""
    group = parser.add_argument_group("Logging")
    group.add_argument(
        "--log-file",
        default=None,
        metavar="FILE",
        help="Also write log messages to this file.",
    )
    group.add_argument(
        "--log-level",
        default=default,
        choices=LEVELS,
        help="Minimum level of logged messages [%(default)s]",
    )
    group.add_argument(
        "--quiet",
        default=False,
        action="store_true",
        help="Only log warnings and errors; same as --log-level=warning",
    )


def initialize_from_args(args):
    initialize("warning" if args.quiet else args.log_level, args.log_file)
