"""Exception hierarchy. ``DomainError`` subclasses map to CLI exit code 1."""


class FlowerCodeError(Exception):
    pass


class ParameterError(FlowerCodeError, ValueError):
    pass


class RangeError(ParameterError):
    pass


class EmptyCodeError(ParameterError):
    pass


class DomainError(FlowerCodeError):
    pass


class UnrepairableError(DomainError):
    def __init__(self, node: int, packets):
        self.node = node
        self.packets = sorted(packets)
        names = ", ".join(f"P{p}" for p in self.packets)
        super().__init__(f"node {node} cannot be repaired: no external replica of {names}")


class CoverageError(DomainError):
    pass


class InsufficientDataError(DomainError):
    def __init__(self, have: int, need: int):
        self.have = have
        self.need = need
        super().__init__(f"{have} distinct packets available, {need} required")


class IntegrityError(DomainError):
    pass


class FieldSizeError(ParameterError):
    pass


class PlacementError(DomainError):
    pass
