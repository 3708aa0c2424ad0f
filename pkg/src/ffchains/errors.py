"""Exception types raised across the package."""


class FFChainsError(Exception):
    """Base class for all package errors."""


class CycleError(FFChainsError, ValueError):
    """The given relations do not generate a strict partial order."""

    def __init__(self, pair, message=None):
        self.pair = pair
        super().__init__(message or f"relation {pair[0]} < {pair[1]} closes a cycle")


class BudgetExceeded(FFChainsError):
    """A bounded search ran out of node expansions before deciding."""


class CapExceeded(FFChainsError, ValueError):
    """A size parameter is above the configured hard cap."""


class NotAWall(FFChainsError, ValueError):
    """An ordered chain partition violates the blocking condition."""

    def __init__(self, element, chain_index):
        self.element = element
        self.chain_index = chain_index
        super().__init__(
            f"element {element} is comparable to every element of earlier chain {chain_index}"
        )


class HypothesisFailed(FFChainsError, ValueError):
    """An element has both C-height above s and C-depth above t."""

    def __init__(self, element, height, depth):
        self.element = element
        super().__init__(f"element {element} has C-height {height} and C-depth {depth}")


class NotBFree(FFChainsError):
    """A butterfly was found; ``witness`` holds (low, low, high, high)."""

    def __init__(self, witness):
        self.witness = tuple(witness)
        super().__init__(f"butterfly found on elements {self.witness}")


class NotPrime(FFChainsError, ValueError):
    pass


class NoPerfectMatching(FFChainsError):
    pass


class NotLadderLike(FFChainsError, ValueError):
    pass


class WidthOutOfScope(FFChainsError, ValueError):
    pass


class InconsistentOrder(FFChainsError):
    pass


class DomainError(FFChainsError, ValueError):
    pass
