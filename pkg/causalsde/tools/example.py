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
"""Writes an example run configuration to a folder chosen by the user."""
import argparse
import logging
import sys

import causalsde
import causalsde.common.logging

from causalsde.resources import copy_example


def parse_args(argv):
    parser = argparse.ArgumentParser(prog="causalsde example", description=__doc__)
    parser.add_argument(
        "--version", action="version", version="%(prog)s v" + causalsde.__version__,
    )
    parser.add_argument(
        "destination",
        default=".",
        nargs="?",
        help="Destination folder for the example configuration.",
    )

    return parser.parse_args(argv)


def main(argv):
    """Main function; takes a list of arguments but excluding sys.argv[0]."""
    args = parse_args(argv)
    causalsde.common.logging.initialize_console_logging()

    try:
        return copy_example(args.destination)
    except OSError as error:
        logging.getLogger(__name__).error("Could not copy example: %s", error)
        return 1


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
