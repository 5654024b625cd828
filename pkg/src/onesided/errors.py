"""Exception hierarchy shared by every module of the package."""


class OneSidedError(Exception):
    """Base class for all package errors."""


class InputError(OneSidedError, ValueError):
    """Malformed or inconsistent user input."""


class NotIrreducible(InputError):
    pass


class NoRootInInterval(InputError):
    pass


class MultipleRootsInInterval(InputError):
    pass


class ContextMismatch(OneSidedError, TypeError):
    """Two scalars from different fields were combined."""


class InvalidUnit(InputError):
    pass


class PreconditionNotMet(OneSidedError):
    pass


class InconsistentSystem(OneSidedError):
    """Raised by ``exact_linalg.solve`` when ``M x = b`` has no solution.

    ``certificate`` is a left vector ``u`` with ``u M = 0`` and ``u b != 0``.
    """

    def __init__(self, certificate):
        super().__init__("linear system is inconsistent")
        self.certificate = certificate


class CertificateConstructionFailed(OneSidedError, AssertionError):
    pass


class NoWitnessExists(OneSidedError):
    def __init__(self, certificate):
        super().__init__("property (B) fails; no witness exists for some target")
        self.certificate = certificate


class BudgetExhausted(OneSidedError):
    def __init__(self, budget):
        super().__init__(f"witness search exhausted its budget (box radius {budget})")
        self.budget = budget


class DependentGenerators(InputError):
    pass


class NotPure(OneSidedError):
    def __init__(self, torsion):
        super().__init__(f"G/H has torsion of order {torsion.k}")
        self.torsion = torsion


class ConvexityNotEstablished(OneSidedError):
    pass


class NotCritical(InputError):
    pass
