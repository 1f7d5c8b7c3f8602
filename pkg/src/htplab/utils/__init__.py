from . import constants
from . import errors
from . import funcs
from . import intervals
from . import load
from . import reports

__all__ = ["constants", "errors", "funcs", "intervals", "load", "reports"]
