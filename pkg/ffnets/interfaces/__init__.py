"""
Abstract interfaces for function field backends.
"""

from .function_field import FunctionField

__all__ = [
    'FunctionField',
]
