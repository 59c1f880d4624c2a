class EntangleError(Exception):
    def __init__(self, value=None):
        super(EntangleError, self).__init__(value)
        self.value = value


class DimensionError(EntangleError):
    """ Raised when a qubit index, subsystem index, gate arity or register size does not fit the object it is used
    with """


class HermitianError(EntangleError):
    """ Raised when a Hermitian matrix is required but something else was provided """
    def __init__(self, value=None):
        if value is None:
            value = 'hermitian required'
        super(HermitianError, self).__init__(value)


class ValidationError(EntangleError):
    """ Raised for values outside their allowed range: non-normalized states, invalid density matrices, non-unitary
    gates, search targets, algorithm parameters """


class ConvergenceError(EntangleError):
    def __init__(self, value):
        super(ConvergenceError, self).__init__(value)
