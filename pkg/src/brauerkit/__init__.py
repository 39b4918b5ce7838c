"""Brauer diagrams, their linearisations, wiring diagrams and tensor evaluations."""

from .diagram import *  # noqa: F401,F403
from .palette import *  # noqa: F401,F403
from .exactlin import *  # noqa: F401,F403
from .linear import *  # noqa: F401,F403
from .wiring import *  # noqa: F401,F403
from .circuit import *  # noqa: F401,F403
from .tensor import *  # noqa: F401,F403
from .expr import *  # noqa: F401,F403
from .laws import *  # noqa: F401,F403
from . import circuit, diagram, exactlin, expr, laws, linear, palette, tensor, wiring

__version__ = "0.1.0"
