"""
Shared base pieces: the exception hierarchy and the field wrappers that every
other subpackage builds on.
"""

from isaacsfd.base._errors import *  # noqa: F401,F403
from isaacsfd.base._errors import __all__ as _error_names
from isaacsfd.base._field import Constant, SmoothField, constant, is_constant

__all__ = list(_error_names) + ['Constant', 'SmoothField', 'constant', 'is_constant']
