from dataclasses import dataclass, field as dataclass_field
from enum import Enum
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

import pandas as pd

logger = logging.getLogger(__name__)


class Status(Enum):
    OK = "ok"
    INCONCLUSIVE = "inconclusive"
    ERROR = "error"

    @property
    def exit_code(self) -> int:
        return {Status.OK: 0, Status.INCONCLUSIVE: 2, Status.ERROR: 1}[self]


@dataclass
class Report:
    """Deterministic outcome of one command: no timestamps, stable row order."""

    command: str
    window: Dict[str, Any] = dataclass_field(default_factory=dict)
    rows: List[Dict[str, Any]] = dataclass_field(default_factory=list)
    certainty: List[str] = dataclass_field(default_factory=list)
    notes: List[str] = dataclass_field(default_factory=list)
    status: Status = Status.OK

    def add_row(self, **values: Any) -> None:
        self.rows.append(values)

    def flag(self, certainty: str) -> None:
        if certainty not in self.certainty:
            self.certainty.append(certainty)

    def note(self, text: str) -> None:
        if text and text not in self.notes:
            self.notes.append(text)

    def mark_inconclusive(self) -> None:
        if self.status == Status.OK:
            self.status = Status.INCONCLUSIVE

    @property
    def exit_code(self) -> int:
        return self.status.exit_code

    def to_dataframe(self) -> pd.DataFrame:
        """Rows as a DataFrame; columns keep first-seen order."""
        columns: List[str] = []
        for row in self.rows:
            columns.extend(k for k in row if k not in columns)
        return pd.DataFrame(self.rows, columns=columns)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "window": self.window,
            "rows": self.rows,
            "certainty": self.certainty,
            "notes": self.notes,
            "status": self.status.value,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False, default=str)

    def to_text(self) -> str:
        lines = [f"# kernellab {self.command}"]
        for key in sorted(self.window):
            value = self.window[key]
            if value not in (None, [], False):
                lines.append(f"{key}: {value}")
        lines.append("")
        df = self.to_dataframe()
        lines.append(df.to_string(index=False) if not df.empty else "(no rows)")
        if self.certainty:
            lines.append("")
            lines.append(f"certainty: {', '.join(self.certainty)}")
        for note in self.notes:
            lines.append(f"note: {note}")
        lines.append(f"status: {self.status.value}")
        return "\n".join(lines) + "\n"

    def render(self, as_json: bool = False) -> str:
        return self.to_json() + "\n" if as_json else self.to_text()

    def save(self, path: Path, as_json: bool = False) -> List[Path]:
        """Write the rendering to ``path``; a ``.csv`` path gets the rows as CSV next to the rendering."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        written = []
        if path.suffix == ".csv":
            self.to_dataframe().to_csv(path, index=False)
            written.append(path)
            path = path.with_suffix(".json" if as_json else ".txt")
        path.write_text(self.render(as_json), encoding="utf-8")
        written.append(path)
        logger.info(f"Report written to {', '.join(str(p) for p in written)}")
        return written


def error_report(command: str, message: str, window: Optional[Dict[str, Any]] = None) -> Report:
    report = Report(command, window or {}, status=Status.ERROR)
    report.note(message)
    return report
