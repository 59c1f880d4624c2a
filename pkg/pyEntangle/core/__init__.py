from .tensor import *
from .circuit import *
from .entanglement import *
from .rank2 import *
from .grover import *
from .hhl import *
from .report import *
from .sweep import *

__all__ = (tensor.__all__ + circuit.__all__ + entanglement.__all__ + rank2.__all__ + grover.__all__ + hhl.__all__ +
           report.__all__ + sweep.__all__)
