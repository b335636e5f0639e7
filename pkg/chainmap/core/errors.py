"""
Eccezioni di dominio e relativa classificazione per i codici di uscita della CLI
"""
from typing import Any, Optional


class ChainMapError(Exception):
    """Errore base di chainmap"""


class InvalidInputError(ChainMapError, ValueError):
    """Precondizione violata da un input"""


class UsageError(InvalidInputError):
    """Combinazione di flag non valida (codice di uscita 2)"""


class InputDataError(InvalidInputError):
    """File illeggibile o malformato, geometria o palette mancanti (codice di uscita 3)"""


class EnumerationLimitError(InvalidInputError):
    """Troppe omotopie per l'enumerazione esaustiva"""


class ConsistencyError(ChainMapError):
    """Controllo incrociato interno fallito: indica un bug (codice di uscita 4)"""


class OptimizationError(ChainMapError):
    """Ottimizzazione interrotta: loss non finita, limite di iterazioni, stato inatteso"""

    def __init__(self, message: str, iterate: Optional[Any] = None):
        super().__init__(message)
        self.iterate = iterate


EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_CONSISTENCY = 4


def exit_code_for(error: BaseException) -> int:
    """Restituisce il codice di uscita associato a un'eccezione"""
    if isinstance(error, UsageError):
        return EXIT_USAGE
    if isinstance(error, (ConsistencyError, OptimizationError)):
        return EXIT_CONSISTENCY
    return EXIT_INPUT
