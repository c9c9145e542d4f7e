"""Terms, hypersubstitutions, multi-hypersubstitutions under colorations,
finite algebras and bounded equational closures."""

from .algebra import *  # noqa: F401,F403
from .coloring import *  # noqa: F401,F403
from .engine import *  # noqa: F401,F403
from .errors import *  # noqa: F401,F403
from .hyp import *  # noqa: F401,F403
from .registry import *  # noqa: F401,F403
from .solidity import *  # noqa: F401,F403
from .terms import *  # noqa: F401,F403

__version__ = "0.1.0"
