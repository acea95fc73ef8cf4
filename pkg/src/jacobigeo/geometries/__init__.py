"""Contact, almost-contact metric and locally conformally symplectic structures."""
from .contact import *  # noqa: F401,F403
from .contact import __all__ as _contact_all
from .lcs import *  # noqa: F401,F403
from .lcs import __all__ as _lcs_all

__all__ = list(_contact_all) + list(_lcs_all)
