"""Exact Dirichlet inverses, ordered factorizations and explicit growth bounds."""

from .arith import *  # noqa: F401,F403
from .arith import __all__ as _arith_all
from .bounds import *  # noqa: F401,F403
from .bounds import __all__ as _bounds_all
from .factorizations import *  # noqa: F401,F403
from .factorizations import __all__ as _fact_all
from .zeta import *  # noqa: F401,F403
from .zeta import __all__ as _zeta_all

__version__ = "0.1.0"
__all__ = [*_arith_all, *_fact_all, *_zeta_all, *_bounds_all]
