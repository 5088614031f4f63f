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
import os
import shutil

from pkg_resources import resource_filename


def example_config():
    """Returns the path to the example run configuration."""
    path = os.path.join("resources", "examples", "run.yaml")

    return resource_filename("causalsde", path)


def copy_example(destination):
    """Copies the example run configuration to 'destination/causalsde.yaml';
    returns 0 on success, or 1 if the file already exists."""
    log = logging.getLogger(__name__)
    filename = os.path.join(destination, "causalsde.yaml")

    if os.path.exists(filename):
        log.error("Example configuration already exists at %r", filename)
        return 1

    os.makedirs(destination, exist_ok=True)
    shutil.copyfile(example_config(), filename)

    log.info("Sucessfully saved example in %r", filename)

    return 0
