"""Exception hierarchy. Each CLI exit code maps onto one of these."""


class TSGraphError(Exception):
    exit_code = 1


class InvalidPairError(TSGraphError, ValueError):
    pass


class DomainError(TSGraphError, ValueError):
    pass


class RegimeError(DomainError):
    """Parameters fall outside the regime where a formula is defined."""


class CapacityError(TSGraphError):
    exit_code = 2


class ParseError(TSGraphError, ValueError):
    exit_code = 3

    def __init__(self, message, offset=None, line=None):
        self.offset = offset
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if offset is not None:
            where.append(f"byte {offset}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class InvalidCodewordError(TSGraphError, ValueError):
    exit_code = 4


class SchemaError(TSGraphError, ValueError):
    exit_code = 5
