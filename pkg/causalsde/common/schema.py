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
"""Validation of YAML run-configurations against a declarative specification.

A specification is a (nested) dictionary mirroring the expected layout of the
configuration file. Keys are either constant strings or specification objects,
and values are specification objects or sub-dictionaries. For example, the grid
section of a run configuration is specified as
-------------------------------------------------------------------------------
|  _GRID_SPECIFICATION = {
|    "Horizon": And(IsNumber, ValueGT(0), default=1.0),
|    "Steps": And(IsInt, ValueGE(1), default=512),
|  }
-------------------------------------------------------------------------------

Default values are applied to keys missing from the file, and values marked as
REQUIRED_VALUE must be supplied by the user. Given the configuration
-------------------------------------------------------------------------------
|  Grid:
|    Steps: 1024
-------------------------------------------------------------------------------

'process_config' returns {"Grid": {"Horizon": 1.0, "Steps": 1024}}. If a value
does not match the specification, a ConfigError is raised describing the
problem and the location of the value:
-------------------------------------------------------------------------------
|  Configuration requirement not met at 'Grid :: Steps':
|    Expected value: (an integer) and (value >= 1)
|    Observed value: 0
-------------------------------------------------------------------------------
"""
import copy
import operator

import causalsde.yaml


class ConfigError(RuntimeError):
    """Raised if a configuration is unreadable, or does not meet specifications."""


def read_config(filename, specification):
    """Reads and validates a YAML configuration using the given specification."""
    try:
        with open(filename) as handle:
            data = causalsde.yaml.safe_load(handle)
    except causalsde.yaml.YAMLError as error:
        raise ConfigError(error)

    return process_config(data, specification)


def process_config(data, specification, path=()):
    """Validates a configuration and applies defaults to missing keys; returns
    the (possibly replaced) data. Default values are deep-copied."""
    if _is_spec(specification):
        _as_spec(specification)(path, data)
        return data
    elif not isinstance(specification, dict):
        raise TypeError(
            "Unexpected type in configuration specification at %r: %r!"
            % (path_to_str(path), specification)
        )

    # Empty sections are loaded as None by YAML
    if data is None:
        data = {}
    elif not isinstance(data, dict):
        raise ConfigError(
            "Inconsistency between specification and configuration at %s:\n"
            "    Expected a section, found %s %r!"
            % (path_to_str(path), type(data).__name__, data)
        )

    _apply_defaults(data, specification, path)
    for key, value in data.items():
        subpath = path + (key,)
        spec = specification[_match_key(key, specification, subpath)]
        data[key] = process_config(value, spec, subpath)

    return data


###############################################################################
###############################################################################

# Marks specifications without a default value
DEFAULT_NOT_SET = object()
# Marks values that the user MUST supply
REQUIRED_VALUE = object()


class ConfigSpec:
    """Base-class for specifications; sub-classes implement 'meets_spec'. A
    default, if given, must itself meet the specification."""

    def __init__(self, description, default=DEFAULT_NOT_SET):
        self.description = description
        self.default = default

        if default not in (DEFAULT_NOT_SET, REQUIRED_VALUE):
            if not self.meets_spec(default):
                raise ValueError(
                    "Default value does not meet requirements:\n"
                    "  Expected value: %s\n"
                    "  Observed value: %r\n" % (description, default)
                )

    def __call__(self, path, value):
        if not self.meets_spec(value):
            raise ConfigError(
                "Configuration requirement not met at %r:\n"
                "  Expected value: %s\n"
                "  Observed value: %r\n"
                "  Observed type:  %s"
                % (path_to_str(path), self.description, value, type(value).__name__)
            )

    def meets_spec(self, value):
        raise NotImplementedError


class _TypeSpec(ConfigSpec):
    """Accepts instances of 'types', except booleans unless listed."""

    types = ()
    text = None

    def __init__(self, description=None, default=DEFAULT_NOT_SET):
        ConfigSpec.__init__(self, description or self.text, default)

    def meets_spec(self, value):
        if isinstance(value, bool) and bool not in self.types:
            return False

        return isinstance(value, self.types)


class IsInt(_TypeSpec):
    types = (int,)
    text = "an integer"


class IsUnsignedInt(IsInt):
    text = "an unsigned integer"

    def meets_spec(self, value):
        return IsInt.meets_spec(self, value) and value >= 0


class IsNumber(_TypeSpec):
    """Floats or integers; YAML reads whole-valued floats written without a
    decimal point (e.g. 'Horizon: 1') as integers."""

    types = (int, float)
    text = "a number"


class IsBoolean(_TypeSpec):
    types = (bool,)
    text = "a boolean"


class IsStr(_TypeSpec):
    types = (str,)
    text = "a non-empty string"

    def meets_spec(self, value):
        return _TypeSpec.meets_spec(self, value) and bool(value)


class IsNone(ConfigSpec):
    """The value was left empty or not set."""

    def __init__(self, description="null or not set", default=DEFAULT_NOT_SET):
        if default is not DEFAULT_NOT_SET:
            raise NotImplementedError("IsNone does not support default values")

        ConfigSpec.__init__(self, description)

    def meets_spec(self, value):
        return value is None


class _Comparison(ConfigSpec):
    symbol = None
    compare = None

    def __init__(self, rvalue, description=None, default=DEFAULT_NOT_SET):
        self.rvalue = rvalue
        if description is None:
            description = "value %s {rvalue}" % (self.symbol,)

        ConfigSpec.__init__(self, description.format(rvalue=rvalue), default)

    def meets_spec(self, value):
        try:
            return bool(type(self).compare(value, self.rvalue))
        except TypeError:
            return False


class ValueGT(_Comparison):
    symbol = ">"
    compare = operator.gt


class ValueGE(_Comparison):
    symbol = ">="
    compare = operator.ge


class ValueLT(_Comparison):
    symbol = "<"
    compare = operator.lt


class ValueIn(ConfigSpec):
    def __init__(
        self, rvalues, description="value in {rvalue}", default=DEFAULT_NOT_SET
    ):
        self.rvalues = tuple(rvalues)

        rvalue = _join_choices(self.rvalues, "or")
        ConfigSpec.__init__(self, description.format(rvalue=rvalue), default)

    def meets_spec(self, value):
        try:
            return value in self.rvalues
        except TypeError:
            return False


###############################################################################
###############################################################################


class _Combination(ConfigSpec):
    """Combines specifications; only the combination may carry a default."""

    separator = None

    def __init__(self, *specs, default=DEFAULT_NOT_SET, template="{}"):
        self.specs = [_as_spec(spec) for spec in specs]
        if not self.specs:
            raise ValueError("No specification given to %r" % (type(self).__name__,))
        elif any(spec.default is not DEFAULT_NOT_SET for spec in self.specs):
            raise ValueError(
                "Default values cannot be set in specs given to logical operators"
            )

        parts = ["(%s)" % (spec.description,) for spec in self.specs]
        description = template.format(self.separator.join(parts))
        ConfigSpec.__init__(self, description, default)

    def _matches(self, value):
        return (spec.meets_spec(value) for spec in self.specs)


class And(_Combination):
    separator = " and "

    def meets_spec(self, value):
        return all(self._matches(value))


class Or(_Combination):
    separator = " or "

    def meets_spec(self, value):
        return any(self._matches(value))


class IsListOf(_Combination):
    """A non-empty list, every item of which meets one of the specifications."""

    separator = " or "

    def __init__(self, *specs, default=DEFAULT_NOT_SET):
        _Combination.__init__(self, *specs, default=default, template="[{}, ...]")

    def meets_spec(self, value):
        if not isinstance(value, list) or not value:
            return False

        return all(any(self._matches(item)) for item in value)


###############################################################################
###############################################################################


def path_to_str(path):
    """('Grid', 'Steps') -> 'Grid :: Steps'"""
    return " :: ".join(map(str, path))


def _is_spec(value):
    if isinstance(value, type):
        return issubclass(value, ConfigSpec)

    return isinstance(value, ConfigSpec)


def _as_spec(spec):
    """Instantiates specification classes given in place of instances."""
    if isinstance(spec, type) and issubclass(spec, ConfigSpec):
        return spec()
    elif isinstance(spec, ConfigSpec):
        return spec

    raise TypeError("Specifications must derive from 'ConfigSpec'")


def _join_choices(values, word):
    """(1, 2, 3), 'or' -> '1, 2, or 3'"""
    values = [repr(value) for value in values]
    if len(values) < 3:
        return (" %s " % (word,)).join(values)

    return "%s, %s %s" % (", ".join(values[:-1]), word, values[-1])


def _match_key(key, specification, path):
    """Returns the key of 'specification' matching an observed key, which is
    either the key itself or a specification object it meets."""
    if key in specification:
        return key

    choices = []
    for candidate in specification:
        if not _is_spec(candidate):
            choices.append(candidate)
        elif _as_spec(candidate).meets_spec(key):
            return candidate

    ValueIn(choices, description="key in {rvalue}")(path, key)
    raise AssertionError("unreachable")  # pragma: no coverage


def _apply_defaults(data, specification, path):
    for key, value in specification.items():
        if _is_spec(key) or key in data:
            continue
        elif isinstance(value, dict):
            # Filled in when the sub-section is processed
            data[key] = {}
        elif _is_spec(value):
            default = _as_spec(value).default
            if default is REQUIRED_VALUE:
                raise ConfigError(
                    "A value MUST be supplied for %r" % (path_to_str(path + (key,)),)
                )
            elif default is not DEFAULT_NOT_SET:
                data[key] = copy.deepcopy(default)
        else:
            data[key] = copy.deepcopy(value)
