"""Exception hierarchy shared across the package."""


class PapsimError(Exception):
    """Base class for all simulator errors."""


class UnknownComponent(PapsimError, KeyError):
    def __init__(self, name):
        super().__init__(name)
        self.name = name

    def __str__(self):
        return f"unknown component {self.name!r}"


class DuplicateComponent(PapsimError, ValueError):
    pass


class EmptyInletList(PapsimError, ValueError):
    pass


class PhiOutOfRange(PapsimError, ValueError):
    pass


class FractionOutOfRange(PapsimError, ValueError):
    pass


class NegativeFlow(PapsimError, ValueError):
    pass


class PressureDecrease(PapsimError, ValueError):
    pass


class UnbalancedReaction(PapsimError, ValueError):
    pass


class StressLimitExceeded(PapsimError, ValueError):
    pass


class NeverRecovers(PapsimError, ValueError):
    pass


class DivisionByZeroInvestment(PapsimError, ZeroDivisionError):
    pass


class FlowsheetError(PapsimError, ValueError):
    """Structural problem in the flowsheet graph."""


class DanglingPort(FlowsheetError):
    pass


class DuplicateStreamProducer(FlowsheetError):
    pass


class DuplicateStreamConsumer(FlowsheetError):
    pass


class CyclicWithoutTear(FlowsheetError):
    def __init__(self, cycles):
        self.cycles = [list(c) for c in cycles]
        listing = "; ".join(" -> ".join(c) for c in self.cycles)
        super().__init__(f"cycle(s) remain after removing tears: {listing}")


class BlockError(PapsimError):
    def __init__(self, block_id, error):
        self.block_id = block_id
        self.error = error
        super().__init__(f"block {block_id!r} failed: {type(error).__name__}: {error}")


class NotConverged(PapsimError):
    def __init__(self, result):
        self.result = result
        super().__init__(
            f"tear streams not converged after {result.iterations} iterations "
            f"(last residual {result.residual_history[-1]:.3e})"
        )


class FileUnreadable(PapsimError, OSError):
    pass


class ParseError(PapsimError, ValueError):
    def __init__(self, msg, line, column):
        self.line = line
        self.column = column
        super().__init__(f"{msg} (line {line}, column {column})")
