#!/usr/bin/env python3
"""
CSV result files
"#"-prefixed metadata header followed by one table; floats carry 17 significant digits
"""

import csv
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Union

import numpy as np

from . import __version__


def format_value(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), '.17g')
    return str(value)


def metadata_lines(command: str, config_hash: Optional[str] = None, seed: Optional[int] = None,
                   extra: Optional[Dict[str, Any]] = None) -> List[str]:
    """Header lines; the timestamp line comes last and is the only one that varies between runs"""
    lines = [f"# ultradiff {__version__}", f"# command: {command}"]
    if config_hash is not None:
        lines.append(f"# config_hash: {config_hash}")
    if seed is not None:
        lines.append(f"# seed: {seed}")
    for key, value in (extra or {}).items():
        lines.append(f"# {key}: {format_value(value)}")
    lines.append(f"# generated: {datetime.now(timezone.utc).strftime('%Y-%m-%dT%H:%M:%SZ')}")
    return lines


def write_csv(path: Union[str, Path], columns: Sequence[str], rows: Iterable[Dict[str, Any]],
              command: str, config_hash: Optional[str] = None, seed: Optional[int] = None,
              extra: Optional[Dict[str, Any]] = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', newline='', encoding='utf-8') as f:
        for line in metadata_lines(command, config_hash, seed, extra):
            f.write(line + "\n")
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_value(row.get(column, "")) for column in columns])
    return path


def read_csv(path: Union[str, Path]) -> List[Dict[str, str]]:
    """Rows of a result file, metadata lines skipped"""
    with open(path, 'r', encoding='utf-8') as f:
        body = [line for line in f if not line.startswith("#")]
    return list(csv.DictReader(body))
