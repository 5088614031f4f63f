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
import os

import configargparse

import causalsde


DEFAULT_CONFIG_FILES = [
    "/etc/causalsde/causalsde.ini",
    "~/.causalsde/causalsde.ini",
]


class ArgumentParser(configargparse.ArgumentParser):
    """Command-line parser that also reads option defaults from per-host INI
    files; keys may be written with underscores instead of dashes, e.g.
    'log_level = debug' for '--log-level'.
    """

    def __init__(self, *args, **kwargs):
        kwargs.setdefault("default_config_files", DEFAULT_CONFIG_FILES)

        super().__init__(*args, **kwargs)

        self.add_argument(
            "--version",
            action="version",
            version="%(prog)s v" + causalsde.__version__,
        )

    def get_possible_config_keys(self, *args, **kwargs):
        keys = super().get_possible_config_keys(*args, **kwargs)
        for key in keys:
            key = key.strip("-").replace("-", "_")
            if key not in keys:
                keys.append(key)

        return keys


def existing_file(value):
    """Argument type requiring that a path points to an existing file."""
    if not os.path.isfile(value):
        raise configargparse.ArgumentTypeError("file not found: %r" % (value,))

    return value


def unsigned_int(value):
    """Argument type for 64-bit unsigned seeds."""
    try:
        result = int(value, 0)
    except ValueError:
        raise configargparse.ArgumentTypeError("not an integer: %r" % (value,))

    if not 0 <= result < 2 ** 64:
        raise configargparse.ArgumentTypeError(
            "not an unsigned 64-bit int: %r" % (value,)
        )

    return result
