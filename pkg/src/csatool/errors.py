"""Exception hierarchy for the CSA toolkit."""


class CsaError(Exception):
    """Base class for all toolkit errors."""


class TruncatedFile(CsaError):
    """Binary STL byte count is inconsistent with its triangle count."""


class MalformedAscii(CsaError):
    """ASCII STL token stream violates the solid/facet/vertex grammar."""


class EmptyMesh(CsaError):
    """A mesh source contained zero triangles."""


class DegenerateFace(CsaError):
    """Face has no well-defined supporting plane."""


class NotWatertight(CsaError):
    """Mesh is not closed and consistently wound; volume is undefined."""


class InsufficientContact(CsaError):
    """Too few centroid distances below the cap to fit a threshold."""


class InvalidGeometry(CsaError):
    """Synthetic-pair parameters describe an impossible configuration."""
