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
"""Structured records of experiments, written as versioned JSON documents."""
import json
import math

from typing import Any, Dict, Optional

import numpy as np

from causalsde.common.text import padded_table


SCHEMA_VERSION = 1


class RunReport:
    """Named checks (value, threshold, passed), free-form data and the seeds
    used by one experiment. A report passes iff every check passed; checks are
    recorded, never raised."""

    def __init__(self, name: str, seeds: Optional[Dict[str, Any]] = None):
        self.name = name
        self.seeds = dict(seeds or {})
        self.checks = {}
        self.data = {}

    def check(self, name, value, threshold, passed, note=None):
        record = {
            "value": _to_plain(value),
            "threshold": _to_plain(threshold),
            "passed": bool(passed),
        }
        if note:
            record["note"] = note

        self.checks[name] = record

        return bool(passed)

    def check_max(self, name, value, threshold, note=None):
        """Records a check passing if value <= threshold; NaN values fail."""
        value = float(value)

        return self.check(name, value, threshold, value <= threshold, note)

    def add(self, key, value):
        self.data[key] = _to_plain(value)

    @property
    def passed(self):
        return all(check["passed"] for check in self.checks.values())

    def failed_checks(self):
        return [key for (key, check) in self.checks.items() if not check["passed"]]

    def to_dict(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "name": self.name,
            "passed": self.passed,
            "seeds": _to_plain(self.seeds),
            "checks": self.checks,
            "data": self.data,
        }

    def write_json(self, filename):
        with open(filename, "w") as handle:
            json.dump(self.to_dict(), handle, indent=2, sort_keys=True)
            handle.write("\n")

    def summary_lines(self):
        rows = [("Check", "Value", "Threshold", "Passed")]
        for key, check in self.checks.items():
            rows.append((key, check["value"], check["threshold"], check["passed"]))

        return list(padded_table(rows))


def _to_plain(value):
    """Converts numpy scalars/arrays and nested containers to JSON types; non-
    finite floats are written as null."""
    if isinstance(value, dict):
        return {str(key): _to_plain(item) for (key, item) in value.items()}
    elif isinstance(value, (list, tuple)):
        return [_to_plain(item) for item in value]
    elif isinstance(value, np.ndarray):
        return _to_plain(value.tolist())
    elif isinstance(value, (bool, np.bool_)):
        return bool(value)
    elif isinstance(value, (int, np.integer)):
        return int(value)
    elif isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None

    return value


def write_error_record(filename, command, error):
    """Writes a machine-readable record of the error that aborted a command."""
    record = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "error": type(error).__name__,
        "message": str(error),
    }

    for key in ("index", "step", "reached", "smallest_eigenvalue"):
        if hasattr(error, key):
            record[key] = _to_plain(getattr(error, key))

    with open(filename, "w") as handle:
        json.dump(record, handle, indent=2, sort_keys=True)
        handle.write("\n")
