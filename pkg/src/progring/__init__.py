"""Focus-method interfaces, PGLB instruction sequences, threads, services and
their components."""
from .interface import *  # noqa: F401,F403
from .pglb import *  # noqa: F401,F403
from .threads import *  # noqa: F401,F403
from .services import *  # noqa: F401,F403
from .components import *  # noqa: F401,F403

__version__ = "0.1.0"
