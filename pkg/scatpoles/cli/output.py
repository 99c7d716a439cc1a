"""Result and manifest writers. Result files never carry timings.

The output directory is created by the first write, so a failed command leaves nothing behind.
"""

import csv
import json
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence

from scatpoles.utils import format_complex

TABLE_DIGITS = 15


def _parent(path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    with _parent(path).open("w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(["" if value is None else value for value in row])
    return path


def write_json(path: Path, payload: Any) -> Path:
    with _parent(path).open("w") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")
    return path


def pole_table(rows: Sequence[Dict[str, Any]]) -> str:
    """Fixed-width table of poles, one row per pole, kappa printed to 15 significant digits."""
    header = f"{'n':>4}  {'flavor':<7} {'computed pole':<44} {'residual':>10}  {'count':>5}"
    lines = [header, "-" * len(header)]
    for row in rows:
        kappa = format_complex(complex(row["kappa_re"], row["kappa_im"]), TABLE_DIGITS)
        lines.append(f"{row['n']:>4}  {row['flavor']:<7} {kappa:<44} {row['residual']:>10.3e}  {row['count']:>5}")
    return "\n".join(lines) + "\n"


def write_text(path: Path, text: str) -> Path:
    _parent(path).write_text(text)
    return path


def write_manifest(
    output_dir: Path,
    command: str,
    config: Dict[str, Any],
    timings: Dict[str, float],
    outputs: List[Path],
    notes: List[str],
) -> Path:
    path = output_dir / f"{command.replace('-', '_')}_manifest.json"
    return write_json(
        path,
        {
            "command": command,
            "config": config,
            "seed": config.get("seed"),
            "timings": timings,
            "outputs": [p.name for p in outputs],
            "notes": notes,
        },
    )
