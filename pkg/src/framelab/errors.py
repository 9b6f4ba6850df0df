"""Exception types shared across the package."""


class FramelabError(Exception):
    """Base class for all domain errors raised by framelab."""


class CantorRestriction(FramelabError):
    """A function paired with a Cantor component must be a pure trig polynomial."""


class ZeroMass(FramelabError):
    """Operation requires a measure with positive total mass."""


class OrderTooLarge(FramelabError):
    """Requested truncation order exceeds the configured cap."""


class AtomTooClose(FramelabError):
    """Atoms cannot receive disjoint extension intervals with positive margin."""


class ParsevalInfeasible(FramelabError):
    """Requested interval lengths cannot be packed disjointly below the cut."""


class MissingAtomValue(FramelabError):
    """Function value at a measure atom is ambiguous; supply an explicit atom value."""


class NotSeparated(FramelabError):
    """Singular and density supports must be disjoint closed intervals away from 0."""


class TruncationOrder(FramelabError):
    """Analysis truncation exceeds the order the dual system was built with."""


class NotAFrame(FramelabError):
    """Family's frame operator is not boundedly invertible at the working tolerance."""


class SpecParseError(FramelabError):
    """A measure/function spec file is malformed; message carries field diagnostics."""
