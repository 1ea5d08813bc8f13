"""Exception types shared across the package."""


class AgroundError(Exception):
    """Base class for all package errors."""


# --- network construction / inference ---------------------------------------

class CycleDetected(AgroundError):
    pass


class MissingTable(AgroundError):
    pass


class NonStochasticRow(AgroundError):
    pass


class UnknownNode(AgroundError):
    pass


class ImpossibleEvidence(AgroundError):
    """Entered evidence has zero probability under the model."""


class StateSpaceTooLarge(AgroundError):
    pass


# --- distributions / table synthesis -----------------------------------------

class InvalidParameter(AgroundError):
    pass


class SupportMismatch(AgroundError):
    """Distribution mass lies outside the binning range and truncation is off."""


class DegenerateCell(AgroundError):
    """Deterministic map is undefined or non-finite on a parent cell."""


# --- grounding model ----------------------------------------------------------

class DivisionByZeroLength(AgroundError):
    pass


class GroundReactionExceedsWeight(AgroundError):
    pass


class SingleHullUnsupported(AgroundError):
    pass


class ConfigurationIncomplete(AgroundError):
    def __init__(self, missing):
        self.missing = list(missing)
        super().__init__(f"missing configuration inputs: {', '.join(self.missing)}")


# --- ingestion ----------------------------------------------------------------

class InsufficientSamples(AgroundError):
    pass


class NonMonotoneVolumeCurve(AgroundError):
    pass


class NegativeReaction(AgroundError):
    pass


class OutOfBounds(AgroundError):
    pass


# --- sessions -----------------------------------------------------------------

class OutOfRangeValue(AgroundError):
    pass


class UnknownEvidenceId(AgroundError):
    pass


class CorruptFile(AgroundError):
    pass


class VersionMismatch(AgroundError):
    pass


# --- service / CLI ------------------------------------------------------------

class PortInUse(AgroundError):
    pass


class DataDirUnwritable(AgroundError):
    pass


class FixtureMissing(AgroundError):
    pass
