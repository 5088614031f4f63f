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
"""Order-preserving evaluation of per-path work.

Models hold plain Python callables, which cannot be shipped to worker
processes, so ensembles are spread over a pool of threads; numpy releases the
GIL inside most array operations. Results are always returned in input order,
and nothing but the caller writes to shared state.
"""
from concurrent.futures import ThreadPoolExecutor


def map_ordered(func, items, workers=1, timer=None):
    """Returns [func(item) for item in items], evaluated by up to 'workers'
    threads. If a ProgressTimer is given it is incremented once per item."""
    items = list(items)
    if workers < 1:
        raise ValueError("workers must be >= 1, not %r" % (workers,))

    results = []
    if workers == 1 or len(items) < 2:
        for item in items:
            results.append(func(item))
            if timer is not None:
                timer.increment()
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            for result in executor.map(func, items):
                results.append(result)
                if timer is not None:
                    timer.increment()

    if timer is not None:
        timer.finalize()

    return results
