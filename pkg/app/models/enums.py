"""Enum definitions shared across the engine."""

from enum import Enum, IntEnum


class Parity(IntEnum):
    """Z2-degree of a homogeneous element."""

    EVEN = 0
    ODD = 1


class LeibnizMode(str, Enum):
    """Which pairs generate Leibniz rows in the derivation solver."""

    ALL = "all"  # every unordered pair of basis vectors
    GENERATORS = "generators"  # pairs with one member in a generating set
    GRADED = "graded"  # propagate along g_{-1}, explicit rows only on its invariants


class DegreeClass(str, Enum):
    """Expected shape of a homogeneous derivation space of the even HO part."""

    INNER = "inner"  # ad of the algebra itself
    INNER_PLUS_GAMMA = "inner+gamma"  # degree 0: ad(HO + F*Gamma)
    P_POWER = "p-power"  # span of (ad d_i)^(p^r)
    ZERO = "zero"


class VerifySuite(str, Enum):
    """Verification suites exposed on the command line."""

    BRACKET = "bracket"
    TH_MORPHISM = "th-morphism"
    GENERATORS = "generators"
    MEMBERSHIP = "membership"
    DER_NEG = "der-neg"
    DER_ZERO = "der-zero"
    DER_POS = "der-pos"
    FULL_DER = "full-der"
    OUTER = "outer"
    CENTER = "center"


class ExportKind(str, Enum):
    """Machine-readable documents the export command writes."""

    STRUCTURE_CONSTANTS = "structure-constants"
    BASIS = "basis"
    DER_BASIS = "der-basis"


class DerivationTarget(str, Enum):
    """Target module for derivation spaces."""

    HO = "ho"
    WITT = "witt"
