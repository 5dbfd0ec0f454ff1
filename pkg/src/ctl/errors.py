"""Exception hierarchy shared by every layer of the toolkit."""


class CTLError(Exception):
    """Base class for all toolkit errors."""


class DimensionMismatch(CTLError, ValueError):
    pass


class CharacteristicMismatch(CTLError, ValueError):
    pass


class NonTerminating(CTLError):
    """Path enumeration did not find an empty stratum below the length cap."""

    def __init__(self, length_cap: int):
        super().__init__(f"path basis did not terminate within length cap {length_cap}")
        self.length_cap = length_cap


class UnknownVertex(CTLError, KeyError):
    pass


class ShapeMismatch(CTLError, ValueError):
    pass


class AlgebraMismatch(CTLError, ValueError):
    pass


class NotAModuleMap(CTLError, ValueError):
    pass


class Diverges(CTLError):
    """Syzygy iteration did not reach zero within the cap."""

    def __init__(self, cap: int, what: str = ""):
        super().__init__(f"syzygy iteration exceeded cap {cap}" + (f" for {what}" if what else ""))
        self.cap = cap


class InfiniteGlobalDimension(Diverges):
    pass


class Inconclusive(CTLError):
    """A bounded search ran out of budget without a decision."""


class CapExceeded(CTLError):
    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what}: search size {size} exceeds cap {cap}")
        self.size = size
        self.cap = cap


class ResidueNotInCatalog(CTLError):
    def __init__(self, dims):
        super().__init__(f"non-zero residue with dimension vector {tuple(dims)} has no catalog summand")
        self.dims = tuple(dims)


class HypothesisViolated(CTLError):
    def __init__(self, message: str, witnesses=()):
        super().__init__(message)
        self.witnesses = tuple(witnesses)


class MalformedInput(CTLError, ValueError):
    pass
