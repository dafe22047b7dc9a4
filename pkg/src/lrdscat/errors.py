"""Exception hierarchy shared by all modules."""


class LrdScatError(Exception):
    """Base class for every error raised by the package."""


class QuadratureNonConvergence(LrdScatError):
    pass


class GridTooCoarse(LrdScatError):
    pass


class AliasingError(LrdScatError):
    pass


class InsufficientReplicates(LrdScatError):
    pass


class RankUndetermined(LrdScatError):
    def __init__(self, L):
        super().__init__(f"no Hermite coefficient above tolerance up to order {L}")
        self.L = L


class RankViolation(LrdScatError):
    pass


class NonInvertibleCDF(LrdScatError):
    pass


class ResolutionError(LrdScatError):
    pass


class LengthError(LrdScatError):
    pass


class OutOfExtent(LrdScatError):
    pass


class TailTruncationError(LrdScatError):
    pass


class EvenOrderRequired(LrdScatError):
    pass


class BetaOutOfRange(LrdScatError):
    pass


class SizeLimit(LrdScatError):
    pass


class NotRegular(LrdScatError):
    pass


class CouplingViolation(LrdScatError):
    pass


class ParseError(LrdScatError):
    def __init__(self, row, detail=""):
        msg = f"cannot parse row {row}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)
        self.row = row


class ShapeError(LrdScatError):
    pass


class SampleTooSmall(LrdScatError):
    pass


class ConfigError(LrdScatError):
    """Invalid run configuration; ``key_path`` names the offending entry."""

    def __init__(self, key_path, detail):
        super().__init__(f"{key_path}: {detail}")
        self.key_path = key_path
