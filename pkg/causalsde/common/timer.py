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
import time

from causalsde.common.text import format_int


_DESC = (
    "Processed {Items} of {Total} {Unit} ({Progress}) in {Time}, "
    "est. {Remaining} left"
)
_FINAL = "Processed {Items} {Unit} in {Time}"


class ProgressTimer:
    """Logs the progress of a long running loop over a known number of items
    (paths, samples) every 'step' items, with an estimate of the time left."""

    def __init__(self, total, unit="paths", desc=None, step=None, log=None):
        self._log = log or logging.getLogger(__name__)
        self._desc = desc
        self._unit = unit
        self._total = int(total)
        self._step = int(step) if step else max(1, self._total // 10)
        self._count = 0
        self._last_count = 0
        self._start_time = time.time()

    @property
    def count(self):
        return self._count

    def increment(self, count=1):
        self._count += count
        if (self._count - self._last_count) >= self._step and self._count < self._total:
            self._print(_DESC)
            self._last_count = self._count
        return self

    def finalize(self):
        self._print(_FINAL)

    def _print(self, desc):
        current_running = time.time() - self._start_time
        progress, remaining = "NA", "NA"
        if self._total:
            fraction = self._count / self._total
            progress = "%.1f%%" % (fraction * 100,)
            if fraction:
                remaining = self._format_time(
                    current_running / fraction - current_running
                )

        message = desc.format(
            Items=format_int(self._count),
            Total=format_int(self._total),
            Unit=self._unit,
            Time=self._format_time(current_running),
            Progress=progress,
            Remaining=remaining,
        )

        if self._desc:
            message = "%s: %s" % (self._desc, message)

        self._log.info(message)

    @classmethod
    def _format_time(cls, ftime):
        utc = time.gmtime(ftime)
        return "%02i:%02i:%02is" % (utc.tm_hour, utc.tm_min, utc.tm_sec)
