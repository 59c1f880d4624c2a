from .core import *
from .core import __all__

__version__ = '1.0.0'
__release__ = '1.0.0'
