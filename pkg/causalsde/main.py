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
import logging
import sys

import setproctitle

import causalsde
import causalsde.common.logging


_COMMANDS = {
    "simulate": "causalsde.tools.simulate",
    "converge": "causalsde.tools.converge",
    "girsanov": "causalsde.tools.girsanov",
    "density": "causalsde.tools.density",
    "fbm": "causalsde.tools.fbm",
    "identify": "causalsde.tools.identify",
    "verify": "causalsde.tools.verify",
    "example": "causalsde.tools.example",
}


_HELP = """causalsde - causal pathwise construction of scalar diffusions
Version: {version}

Experiments:
    causalsde simulate   -- Solve the causal equation on seeded Wiener paths
                            and write X, w and the translated driver per path.
    causalsde converge   -- Strong error against Euler-Maruyama or Milstein
                            on shared Brownian paths, with log-log slope.
    causalsde girsanov   -- Monte-Carlo mean of the Girsanov weight, and
                            weighted against direct expectations.
    causalsde density    -- KS comparison of the law of X_t with the law of
                            c applied to the translated Wiener process.
    causalsde fbm        -- Solutions driven by fractional Brownian motion.
    causalsde identify   -- Recovery of the driving Wiener path from X.
    causalsde verify     -- Consistency checks of the configured model.

Other:
    causalsde example    -- Write an example run configuration.

Every experiment takes --config FILE and optionally --out DIR, --seed U64,
--workers N and --quiet; see 'causalsde <command> --help'.
"""


def main(argv):
    # Change process name from 'python' to 'causalsde'
    setproctitle.setproctitle("causalsde")
    # Setup basic logging to STDERR
    causalsde.common.logging.initialize_console_logging()

    if not argv or argv[0] in ("-h", "--help", "help"):
        print(_HELP.format(version=causalsde.__version__))
        return 0
    elif argv[0] in ("--version",):
        print("causalsde v{}".format(causalsde.__version__))
        return 0

    command = _COMMANDS.get(argv[0])
    if command is None:
        log = logging.getLogger(__name__)
        log.error("Unknown command %r", argv[0])
        return 1

    module = __import__(command, fromlist=["main"])

    return module.main(argv[1:])


def entry_point():
    return main(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
