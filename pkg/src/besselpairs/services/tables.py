# src/besselpairs/services/tables.py

from typing import Callable, Dict, List, Optional, Sequence

from besselpairs.core.constants import a_nm, beta_nm
from besselpairs.models.schemas import ConstantResult, TableRow
from besselpairs.utils.exceptions import DegenerateModeError, OutOfRegimeError, ParamError
from besselpairs.utils.logger import get_logger
from besselpairs.workers.pool import ordered_map

TABLE_CONSTANTS: Dict[str, Callable[[int, float], ConstantResult]] = {
    "a_nm": a_nm,
    "beta_nm": beta_nm,
}


class TableService:
    """Grid tables of a_{n,m} or beta_{n,m} in lexicographic (n, m) order."""

    def __init__(self, threads: Optional[int] = None):
        self.threads = threads
        self.log = get_logger(__name__)

    def _entry(self, constant: Callable[[int, float], ConstantResult], n: int, m: float) -> Optional[TableRow]:
        try:
            result = constant(n, m)
        except (OutOfRegimeError, DegenerateModeError) as exc:
            self.log.debug("table_point_skipped", n=n, m=m, reason=exc.error_code)
            return None
        return TableRow(n=n, m=m, value=result.value, case=result.case_taken, k_min=result.k_min)

    def build(self, name: str, n_values: Sequence[int], m_values: Sequence[float]) -> List[TableRow]:
        if name not in TABLE_CONSTANTS:
            raise ParamError(f"unknown table {name!r}; expected one of {sorted(TABLE_CONSTANTS)}", "table", name)
        constant = TABLE_CONSTANTS[name]
        points = sorted({(int(n), float(m)) for n in n_values for m in m_values})
        rows = ordered_map(lambda point: self._entry(constant, *point), points, threads=self.threads)
        kept = [row for row in rows if row is not None]
        self.log.info("table_built", table=name, points=len(points), rows=len(kept))
        return kept
