import hashlib
import json
import logging
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd

from ..errors import OutputError


@dataclass
class WriteResult:
    """Result of writing one result file and its sidecar."""
    path: Path
    checksum: str
    rows: int
    sidecar: Optional[Path] = None


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Path):
        return str(value)
    if hasattr(value, 'value') and not isinstance(value, (int, float, str, bool)):
        return value.value
    if isinstance(value, float) and not np.isfinite(value):
        return None
    return value


class ResultWriter:
    """Writes CSV/JSON results atomically (temp file in the target directory, then rename)."""

    FLOAT_FORMAT = '%.9g'

    def __init__(self):
        self.logger = logging.getLogger(__name__)

    def write_csv(self, frame: pd.DataFrame, path: Path,
                  sidecar: Optional[Dict[str, Any]] = None) -> WriteResult:
        """
        Write `frame` to `path` with 9 significant digits and an optional JSON sidecar.

        The sidecar (same stem, `.json`) gets the sha256 of the CSV bytes added.
        The CSV is re-hashed from disk before the sidecar is written; a mismatch
        raises OutputError.
        """
        path = Path(path)
        payload = frame.to_csv(index=False, float_format=self.FLOAT_FORMAT, lineterminator='\n').encode('utf-8')
        checksum = self._atomic_write(payload, path)
        result = WriteResult(path=path, checksum=checksum, rows=len(frame))
        if not self.verify(result):
            raise OutputError(f"Checksum mismatch after writing {path}")

        if sidecar is not None:
            meta = dict(sidecar)
            meta['csv_file'] = path.name
            meta['csv_sha256'] = checksum
            result.sidecar = path.with_suffix('.json')
            self.write_json(meta, result.sidecar)

        self.logger.info(f"Wrote {result.rows} rows to {path}")
        return result

    def write_json(self, data: Dict[str, Any], path: Path) -> str:
        payload = (json.dumps(_jsonable(data), indent=2, sort_keys=True) + '\n').encode('utf-8')
        return self._atomic_write(payload, Path(path))

    def _atomic_write(self, payload: bytes, path: Path) -> str:
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix='.tmp', dir=path.parent)
            try:
                with os.fdopen(fd, 'wb') as handle:
                    handle.write(payload)
                os.replace(tmp_name, path)
            except BaseException:
                if os.path.exists(tmp_name):
                    os.unlink(tmp_name)
                raise
        except OSError as e:
            raise OutputError(f"Could not write {path}: {e}") from e
        return hashlib.sha256(payload).hexdigest()

    @staticmethod
    def checksum(path: Path) -> str:
        try:
            with open(path, 'rb') as f:
                return hashlib.sha256(f.read()).hexdigest()
        except OSError as e:
            raise OutputError(f"Could not read {path}: {e}") from e

    def verify(self, result: WriteResult) -> bool:
        """Re-hash a written file against its recorded checksum."""
        actual = self.checksum(result.path)
        if actual != result.checksum:
            self.logger.error(f"Checksum mismatch for {result.path}")
            return False
        return True
