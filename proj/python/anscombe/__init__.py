"""Optimal stopping boundaries for sequential clinical trials."""

from ._core import *  # noqa: F401,F403
from ._core import AnscombeError, __doc__  # noqa: F401
