class VilenkinException(Exception):
    def __init__(self, reason="", real_exc=None):
        super(VilenkinException, self).__init__(reason, real_exc)
        self.reason = reason
        self.real_except = real_exc

    def __str__(self):
        if self.real_except is None:
            return str(self.reason)
        return f"{self.reason}: {self.real_except}"


class PrecisionMismatchError(VilenkinException):
    """Operands carry different primes or precisions."""


class PrecisionError(VilenkinException):
    """An element is not known to the precision an operation needs."""


class DomainError(VilenkinException):
    """Argument outside the domain of an operation."""


class PreconditionError(VilenkinException):
    """Operation precondition violated."""


class ConfigError(VilenkinException):
    pass


class CommandException(VilenkinException):
    pass
