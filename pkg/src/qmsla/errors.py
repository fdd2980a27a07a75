"""Exception hierarchy shared by every module.

Each class carries the CLI exit code it maps to, so the command layer can
translate failures without a lookup table of its own.
"""
from __future__ import annotations


class QmslaError(Exception):
    exit_code = 1


class InputOutputError(QmslaError):
    exit_code = 2


class SchemaError(QmslaError):
    exit_code = 3


class DimensionError(QmslaError):
    exit_code = 4


class InvalidWidthError(DimensionError):
    pass


class InvalidPermutationError(DimensionError):
    pass


class GateError(DimensionError):
    pass


class NumericError(QmslaError):
    exit_code = 5


class RootFindingError(NumericError):
    exit_code = 6
