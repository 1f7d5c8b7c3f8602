from . import nfcore
from . import ideals
from . import ecurve
from . import divample
from . import htpverify

__all__ = ["nfcore", "ideals", "ecurve", "divample", "htpverify"]
