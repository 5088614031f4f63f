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
"""Run configurations: YAML files with one section per concern, validated and
completed with defaults. The resolved configuration, including the seed drawn
when none was given, is written next to the results of every run."""
import copy
import os

import causalsde.yaml

from causalsde.common.schema import (
    REQUIRED_VALUE,
    And,
    ConfigError,
    IsBoolean,
    IsInt,
    IsListOf,
    IsNone,
    IsNumber,
    IsStr,
    IsUnsignedInt,
    Or,
    ValueGE,
    ValueGT,
    ValueIn,
    ValueLT,
    process_config,
    read_config,
)
from causalsde.measure import OBSERVABLES
from causalsde.models import (
    CATALOG_NAMES,
    PHI_NAMES,
    CatalogEntry,
    OdeConfig,
    catalog_model,
    tabulated_catalog_model,
)
from causalsde.paths import Grid, Seed
from causalsde.reference import SCHEMES
from causalsde.solver import ANALYTIC_START, QUADRATURES, STRICT_START, SolverConfig


_CONSTRUCTIONS = ("closed_form", "tabulated")
_SINGULAR_STARTS = (ANALYTIC_START, STRICT_START)


def _model_specification(name):
    return {
        "Name": name,
        "Shift": IsNumber(default=0.0),
        "Alpha": IsNumber(default=0.5),
        "Sigma": And(IsNumber, ValueGT(0), default=1.0),
        "Phi": ValueIn(PHI_NAMES, default="arctan"),
        "PhiScale": IsNumber(default=1.0),
        "Construction": ValueIn(_CONSTRUCTIONS, default="closed_form"),
        "OdeStep": And(IsNumber, ValueGT(0), default=1e-3),
        "OdeRange": And(IsNumber, ValueGT(0), default=10.0),
    }


_SPECIFICATION = {
    "Model": _model_specification(ValueIn(CATALOG_NAMES, default=REQUIRED_VALUE)),
    # Optional second model observed alongside the first (identify)
    "Instrument": _model_specification(
        Or(ValueIn(CATALOG_NAMES), IsNone, default=None)
    ),
    "Grid": {
        "Horizon": And(IsNumber, ValueGT(0), default=1.0),
        "Steps": And(IsInt, ValueGE(1), default=512),
    },
    "Solver": {
        "Tolerance": And(IsNumber, ValueGT(0), default=1e-10),
        "MaxIterations": And(IsInt, ValueGE(1), default=200),
        "Lambda": Or(ValueIn(("auto",)), And(IsNumber, ValueGE(0)), default="auto"),
        "Quadrature": ValueIn(QUADRATURES, default="trapezoid"),
        "SingularStart": ValueIn(_SINGULAR_STARTS, default=ANALYTIC_START),
        "FeedbackSubsteps": And(IsInt, ValueGE(1), default=4),
    },
    "Experiment": {
        "Paths": And(IsInt, ValueGE(1), default=10),
        "Samples": And(IsInt, ValueGE(1), default=10000),
        "Hurst": And(IsNumber, ValueGT(0), ValueLT(1), default=0.7),
        "Time": And(IsNumber, ValueGE(0), default=1.0),
        "StepList": IsListOf(IsInt, default=[64, 128, 256, 512, 1024]),
        "Reference": ValueIn(SCHEMES, default="euler"),
        "MinSlope": IsNumber(default=0.4),
        "Observable": ValueIn(tuple(sorted(OBSERVABLES)), default="tanh"),
        "InitialSpread": And(IsNumber, ValueGE(0), default=0.0),
        "Workers": And(IsInt, ValueGE(1), default=1),
        "DumpSamples": IsBoolean(default=False),
        "Observed": Or(IsStr, IsNone, default=None),
        "ObservedColumn": IsStr(default="X"),
        "ObservedOutput": Or(IsStr, IsNone, default=None),
    },
    "Verify": {
        "Range": And(IsNumber, ValueGT(0), default=3.0),
        "Points": And(IsInt, ValueGE(2), default=601),
        "Tolerance": And(IsNumber, ValueGT(0), default=1e-6),
    },
    "Seed": Or(IsUnsignedInt, IsNone, default=None),
    "Output": IsStr(default="."),
}


class RunConfig:
    """A validated run configuration with defaults applied."""

    def __init__(self, data, filename=None):
        self.data = data
        self.filename = filename

    @classmethod
    def load(cls, filename, seed=None, output=None, workers=None):
        """Reads a configuration; command-line values for the seed, the output
        directory and the number of workers take precedence over the file."""
        data = read_config(filename, _SPECIFICATION)

        return cls._finalize(data, filename, seed, output, workers)

    @classmethod
    def from_dict(cls, data, seed=None, output=None, workers=None):
        data = process_config(copy.deepcopy(data), _SPECIFICATION)

        return cls._finalize(data, None, seed, output, workers)

    @classmethod
    def _finalize(cls, data, filename, seed, output, workers):
        if seed is not None:
            data["Seed"] = seed
        elif data["Seed"] is None:
            data["Seed"] = Seed.from_entropy().value

        if not data["Seed"] < 2 ** 64:
            raise ConfigError("Seed must be an unsigned 64-bit integer")

        if output is not None:
            data["Output"] = output
        if workers is not None:
            data["Experiment"]["Workers"] = workers

        observed = data["Experiment"]["Observed"]
        if observed is not None and not os.path.isfile(observed):
            raise ConfigError("Observed path file not found: %r" % (observed,))

        return cls(data, filename)

    @property
    def seed(self):
        return Seed(self.data["Seed"])

    @property
    def output(self):
        return self.data["Output"]

    @property
    def grid(self):
        section = self.data["Grid"]

        return Grid(section["Horizon"], section["Steps"])

    @property
    def experiment(self):
        return self.data["Experiment"]

    @property
    def verify(self):
        return self.data["Verify"]

    @property
    def workers(self):
        return self.experiment["Workers"]

    def solver_config(self, **kwargs):
        section = self.data["Solver"]
        lam = section["Lambda"]

        options = {
            "tol": float(section["Tolerance"]),
            "max_iter": section["MaxIterations"],
            "lam": None if lam == "auto" else float(lam),
            "quadrature": section["Quadrature"],
            "singular_start": section["SingularStart"],
        }
        options.update(kwargs)

        return SolverConfig(**options)

    @property
    def feedback_substeps(self):
        return self.data["Solver"]["FeedbackSubsteps"]

    def model(self):
        return build_model(self.data["Model"])

    def instrument(self):
        """The second model, defaulting to the first if none is configured."""
        section = self.data["Instrument"]
        if section["Name"] is None:
            return self.model()

        return build_model(section)

    def output_path(self, *names):
        return os.path.join(self.output, *names)

    def write_resolved(self, command):
        """Writes the resolved configuration to '<output>/<command>.config.yaml'."""
        filename = self.output_path("%s.config.yaml" % (command,))
        with open(filename, "w") as handle:
            handle.write("# Resolved configuration of 'causalsde %s'\n" % (command,))
            causalsde.yaml.safe_dump(self.data, handle)

        return filename


def build_model(section):
    entry = CatalogEntry(
        name=section["Name"],
        a=float(section["Shift"]),
        alpha=float(section["Alpha"]),
        sigma=float(section["Sigma"]),
        phi=section["Phi"],
        phi_scale=float(section["PhiScale"]),
    )

    if section["Construction"] == "tabulated":
        ode_config = OdeConfig(float(section["OdeStep"]), float(section["OdeRange"]))

        return tabulated_catalog_model(entry, ode_config)

    return catalog_model(entry)
