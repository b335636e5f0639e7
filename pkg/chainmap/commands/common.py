"""
Helper condivisi dai comandi: percorsi di output, manifest, controllo dei metodi per campo
"""
import logging
import time
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

from chainmap.core.config import settings
from chainmap.core.errors import UsageError
from chainmap.core.models import HomotopyMode, RunManifest
from chainmap.services.exporters import build_manifest
from chainmap.services.homcomplex import MapParameterization

logger = logging.getLogger(__name__)


class RunContext:
    """Stato di una singola invocazione: argv, seme, cartella di output, cronometro"""

    def __init__(self, argv: Sequence[str], seed: int, output_dir: Optional[str] = None):
        self.argv = list(argv)
        self.seed = seed
        self.output_dir = Path(output_dir or settings.data_output_path)
        self.started = time.perf_counter()

    def output(self, explicit: Optional[str], default_name: str) -> Path:
        """Percorso di output: quello esplicito, altrimenti default_name nella cartella di output"""
        return Path(explicit) if explicit else self.output_dir / default_name

    def manifest(self, inputs: Iterable[Optional[str]] = (), field: Optional[str] = None) -> RunManifest:
        return build_manifest(
            self.argv,
            self.seed,
            field=field,
            inputs=[p for p in inputs if p],
            wall_clock_seconds=time.perf_counter() - self.started,
        )


def sibling(path: Path, suffix: str) -> Path:
    """map.json -> map.<suffix>"""
    return path.with_name(f"{path.stem}.{suffix}")


def parse_int_list(value: Optional[str]) -> Optional[List[int]]:
    if value is None:
        return None
    try:
        return [int(v) for v in value.split(",") if v.strip()]
    except ValueError as e:
        raise UsageError(f"Expected a comma separated list of integers, got {value!r}") from e


def to_parameterization_coordinates(p: MapParameterization, reduced: Sequence[Any]) -> List[Any]:
    """
    Coefficienti calcolati sulla base ridotta espressi nella lista di omotopie di p.

    Le omotopie ridotte sono un sottoinsieme di quelle grezze: le altre ricevono 0.
    """
    if p.homotopy_mode == HomotopyMode.REDUCED:
        return list(reduced)
    zero = 0.0 if any(isinstance(x, float) for x in reduced) else p.field.zero()
    full: List[Any] = [zero] * len(p.raw_homotopies)
    for i, value in zip(p.reduced_indices, reduced):
        full[i] = value
    return full


def summary(command: str, outputs: Dict[str, Path], **fields: Any) -> Dict[str, Any]:
    """Riepilogo stampato su stdout"""
    return {"command": command, "outputs": {k: str(v) for k, v in outputs.items()}, **fields}
