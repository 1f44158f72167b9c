"""Exception taxonomy.

Exit-code mapping used by the CLI:
  2 -- invalid input (bad permutations, unknown catalog names, bad requests)
  3 -- a size guard tripped
  4 -- model limitation (a required expansion is not proper in the ambient model)
  1 -- a verification clause failed (by contract this signals an implementation
       fault, not a mathematical surprise)
"""


class PLocalError(Exception):
    """Base class for all package errors."""


class InvalidInput(PLocalError):
    """Bad user-supplied data (exit 2)."""


class InvalidPermutation(InvalidInput):
    pass


class EmptyInput(InvalidInput):
    pass


class UnknownCatalogName(InvalidInput):
    pass


class PreconditionViolated(InvalidInput):
    pass


class SizeGuardExceeded(PLocalError):
    """A configured size guard was exceeded (exit 3)."""


class ModelLimitation(PLocalError):
    """The ambient-group model cannot realize the requested object (exit 4)."""


class ExpansionNotProper(ModelLimitation):
    """An object-set expansion exists abstractly but is not proper here."""


class NotProper(ModelLimitation):
    pass


class InvariantViolation(PLocalError):
    """A certified mathematical identity failed; indicates a bug (exit 1)."""


class NotFClosed(InvalidInput):
    pass


class CollectionOutOfRange(InvalidInput):
    pass


class NotInDomain(PLocalError):
    pass


class ForeignElement(InvalidInput):
    pass


class NotLocalizable(PLocalError):
    """Definition clauses for a localizable pair failed.

    `clause` is the 1-based index of the first failed clause.
    """

    def __init__(self, clause, message=""):
        self.clause = clause
        super().__init__(f"localizable-pair clause ({clause}) failed. {message}".strip())


class NotPartialSubgroup(PLocalError):
    pass


class NotConjugationStable(PLocalError):
    pass


class NotFullyNormalized(PreconditionViolated):
    pass


class NotFullyCentralized(PreconditionViolated):
    pass


class NotCentral(PreconditionViolated):
    pass


class NotPDisconnected(PreconditionViolated):
    pass


class HypothesisNotMet(PLocalError):
    """A theorem's standing hypothesis does not hold for the given data."""


class LambdaDomainIncomplete(InvalidInput):
    pass


class ConditionFailed(PLocalError):
    """A numbered side condition of a construction failed.

    `index` names the failed condition.
    """

    def __init__(self, index, message=""):
        self.index = index
        super().__init__(f"condition ({index}) failed. {message}".strip())


class DecompositionStuck(InvariantViolation):
    """The decreasing measure of a decomposition algorithm failed to decrease."""
