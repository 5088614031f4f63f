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
"""Plain-text formatting for log output."""

# Spaces between adjacent columns of a padded table
COLUMN_GAP = 4


def padded_table(table):
    """Yields the rows of 'table' as left-aligned columns separated by at least
    COLUMN_GAP spaces. Strings in place of rows (e.g. '# comment') are yielded
    unchanged and do not affect column widths."""
    table = [
        row if isinstance(row, str) else [format_value(value) for value in row]
        for row in table
    ]

    widths = {}
    for row in table:
        if not isinstance(row, str):
            for column, field in enumerate(row):
                widths[column] = max(widths.get(column, 0), len(field))

    for row in table:
        if isinstance(row, str):
            yield row
        else:
            padded = [
                field.ljust(widths[column] + COLUMN_GAP)
                for column, field in enumerate(row)
            ]
            yield "".join(padded).rstrip()


def format_value(value):
    """Floats are written with 4 significant digits, None as 'NA' and anything
    else via str."""
    if value is None:
        return "NA"
    elif isinstance(value, float):
        return "%.4g" % (value,)

    return str(value)


def format_int(value):
    """100000 -> '100,000'"""
    return "{:,}".format(value)
