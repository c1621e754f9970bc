"""Error types shared across the package.

Every domain error carries a short machine-readable ``code`` (the class name
by default) so the CLI can report it as JSON.
"""

from __future__ import annotations


class SkeletaError(Exception):
    """Base class for domain errors."""

    def __init__(self, message: str = "", **detail):
        super().__init__(message or type(self).__name__)
        self.detail = detail

    @property
    def code(self) -> str:
        return type(self).__name__

    def to_json(self) -> dict:
        out = {"error": self.code, "message": str(self)}
        if self.detail:
            out["detail"] = {k: _jsonable(v) for k, v in self.detail.items()}
        return out


def _jsonable(v):
    if isinstance(v, (str, int, float, bool)) or v is None:
        return v
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    return str(v)


class TagMismatch(SkeletaError):
    """Operands live in different semifields."""


class NotIntegral(SkeletaError):
    """Value is not an element of the integral subsemiring."""


class TooLarge(SkeletaError):
    """Input exceeds a configured enumeration cap."""


class NotJoinPreserving(SkeletaError):
    """Map fails to preserve bottom or joins."""


class NotMember(SkeletaError):
    """Point does not lie in the monoid."""


class MonoidMismatch(SkeletaError):
    """Ideals live in different monoids."""


class NotPointed(SkeletaError):
    """Cone contains a line."""


class RankTooLarge(SkeletaError):
    """Rank exceeds the supported maximum."""


class BaseMismatch(SkeletaError):
    """Presentations have different base semifields."""


class RelationViolated(SkeletaError):
    """Assignment does not satisfy a relation."""


class SortViolated(SkeletaError):
    """Assignment violates a generator sort."""


class UnknownGenerator(SkeletaError):
    """Polynomial mentions an undeclared generator."""


class BoundNotAdmissible(SkeletaError):
    """Bound element is not admissible."""


class ZeroIdeal(SkeletaError):
    """Cannot localize at the empty ideal."""


class NotContracting(SkeletaError):
    """Presentation has a free (non-contracting) generator."""


class TooManyGenerators(SkeletaError):
    """Too many generators to enumerate points."""


class NoVertex(SkeletaError):
    """Polytope has no vertex (empty or contains a line)."""


class GluingNotIso(SkeletaError):
    """Face identification is not an isomorphism."""


class CoverFails(SkeletaError):
    """Charts do not cover the glued space."""


class TooSmall(SkeletaError):
    """Parameter below the supported minimum."""


class InconsistentSections(SkeletaError):
    """Local sections disagree on an overlap."""


class PointOutside(SkeletaError):
    """Point lies outside every chart."""


class NotBounded(SkeletaError):
    """Element is not bounded on the chart."""


class ZeroPolynomial(SkeletaError):
    """Polynomial has no nonzero term."""


class RankUnsupported(SkeletaError):
    """Only rank 2 is supported here."""


class TooFewTerms(SkeletaError):
    """Need at least two terms for a corner locus."""


class ParseError(SkeletaError):
    """Syntax error in a textual input, with a 1-based position."""

    def __init__(self, line: int, col: int, expected: str, got: str = ""):
        msg = f"line {line}, col {col}: expected {expected}"
        if got:
            msg += f", got {got!r}"
        super().__init__(msg, line=line, col=col, expected=expected)
        self.line = line
        self.col = col
        self.expected = expected


class IncompatibleFan(SkeletaError):
    """Two cones of a fan meet outside a common face."""


class NotFullDimensional(SkeletaError):
    """Polytope has empty interior."""
