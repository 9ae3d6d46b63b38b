class DomainError(ValueError):
    """A parameter lies outside the domain where a quantity is defined."""

    def __init__(self, param: str, value, reason: str):
        self.param = param
        self.value = value
        super().__init__(f"{param}={value!r}: {reason}")


class DimensionError(ValueError):
    pass


class EstimationError(ArithmeticError):
    """Linear solve failed; ``cond`` carries the condition-number diagnostic."""

    def __init__(self, message: str, cond: float):
        self.cond = cond
        super().__init__(f"{message} (condition number {cond:.3e})")
