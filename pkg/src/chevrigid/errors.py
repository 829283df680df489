"""Exception hierarchy shared by every module of the package."""


class ChevError(Exception):
    """Base class for all errors raised by chevrigid."""


class RingError(ChevError):
    pass


class NonUnit(RingError):
    """An inverse was requested for an element that is not a unit."""


class NotLocal(RingError):
    """A local-ring operation was requested on a ring without local structure."""


class RingMismatch(RingError):
    """Arithmetic across two different rings was attempted."""


class DescriptorError(RingError, ValueError):
    """A ring descriptor string could not be parsed or is inadmissible."""


class UnsupportedType(ChevError, ValueError):
    """A root-system family/rank outside A_l (l>=2), D_l (l>=4), E_6..E_8."""


class MixedSystems(ChevError):
    """Two roots or basis indices from different root systems were combined."""


class NotARoot(ChevError, ValueError):
    pass


class NonIntegralDividedPower(ChevError):
    """(ad x)^2 had an odd entry, so (ad x)^2/2 is not integral."""


class NoMatch(ChevError):
    pass


class StructuralFailure(ChevError):
    """Unit-pivot elimination found only radical pivots."""


class NotInvolution(ChevError):
    pass


class NotBlockSplit(ChevError):
    pass


class PreconditionFailed(ChevError):
    def __init__(self, condition, index=None, detail=""):
        self.condition = condition
        self.index = index
        msg = condition if index is None else f"{condition} (index {index})"
        if detail:
            msg = f"{msg}: {detail}"
        super().__init__(msg)


class PivotNotUnit(ChevError):
    def __init__(self, step, detail=""):
        self.step = step
        super().__init__(f"{step}: {detail}" if detail else step)


class NonvanishingConstant(ChevError):
    pass


class PositionOutOfRange(ChevError, IndexError):
    pass


class ConstraintViolated(ChevError):
    def __init__(self, step, detail=""):
        self.step = step
        super().__init__(f"{step}: {detail}" if detail else step)


class ClosureStalled(ChevError):
    def __init__(self, dimension, target):
        self.dimension = dimension
        self.target = target
        super().__init__(f"closure stabilised at dimension {dimension} < {target}")
