import sys

# EDS denominators pass the default 4300-digit str() limit at indices of a few hundred
if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)

from . import utils  # noqa: E402
from . import arithmetic  # noqa: E402
from . import workbench  # noqa: E402
from . import suite  # noqa: E402
from . import cli  # noqa: E402

# Define __all__
__all__ = ["utils", "arithmetic", "workbench", "suite", "cli"]
