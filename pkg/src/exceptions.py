"""
Exceptions du domaine et codes de sortie associés
"""


class SeqCapError(ValueError):
    """Erreur de base du projet (code de sortie 3 : erreur de domaine)"""

    exit_code = 3


class ParseError(SeqCapError):
    """Fichier d'entrée illisible ou non conforme au schéma"""

    exit_code = 1


class ChannelValidationError(SeqCapError):
    """Canal chargé mais non trace-préservant"""

    exit_code = 2


class ComputationError(SeqCapError):
    """Échec numérique (débordement, incohérence interne)"""


class BoundViolationError(ComputationError):
    """Une inégalité exécutable a échoué"""


class NonHermitianError(SeqCapError):
    pass


class NoConvergenceError(ComputationError):
    pass


class ShapeMismatchError(SeqCapError):
    pass


class DimensionMismatchError(SeqCapError):
    pass


class NotEndomorphicError(SeqCapError):
    pass


class NotQubitError(SeqCapError):
    pass


class NotCanonicalizableError(SeqCapError):
    pass


class UnitEigenvalueError(SeqCapError):
    pass


class OutOfRangeError(SeqCapError):
    pass


class KLViolatedError(SeqCapError):
    """Les conditions de Knill–Laflamme ne sont pas satisfaites"""


class NonOrthonormalWordsError(SeqCapError):
    pass


class CutoffTooSmallError(SeqCapError):
    pass


class InvalidGridError(SeqCapError):
    pass


def check_unit_interval(name: str, value: float, low: float = 0.0, high: float = 1.0) -> float:
    """
    Vérifie qu'un paramètre réel est dans [low, high].

    Raises:
        OutOfRangeError: Si la valeur est hors intervalle ou non finie
    """
    value = float(value)
    if not (low <= value <= high):
        raise OutOfRangeError(f"{name} doit être dans [{low}, {high}], reçu {value}")
    return value
