"""Export service for CSV and JSON emission of reports and sweep rows."""

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd

from ..core.config import get_config
from .analysis import BoundReport, NormReport
from .experiments import SweepRow, rows_to_frame

FORMATS = ("csv", "json")


@dataclass
class ExportOptions:
    """Options for data export."""
    format: str = "csv"  # 'csv' or 'json'
    float_format: str = "%.17g"
    json_indent: Optional[int] = 2


@dataclass
class ExportResult:
    """Result of an export operation."""
    success: bool
    output_path: Path
    row_count: int
    file_size: int
    error: Optional[str] = None


def _json_safe(value: Any) -> Any:
    # NaN marks skipped measurements and has no JSON spelling
    if isinstance(value, float) and math.isnan(value):
        return None
    return value


class ExportService:
    """Renders sweep rows and reports as CSV or JSON."""

    def __init__(self, options: Optional[ExportOptions] = None):
        """Initialize export service.

        Args:
            options: Explicit options; defaults come from the output config
        """
        if options is None:
            config = get_config()
            options = ExportOptions(
                format=config.output.format if config.output.format in FORMATS else "csv",
                float_format=config.output.float_format,
                json_indent=config.output.json_indent,
            )
        self.options = options

    def rows_to_csv(self, rows: Sequence[SweepRow]) -> str:
        """CSV with a header row; reals carry 17 significant digits."""
        frame = rows_to_frame(rows)
        return frame.to_csv(
            index=False,
            float_format=self.options.float_format,
            na_rep="nan",
            lineterminator="\n",
        )

    def rows_to_json(self, rows: Sequence[SweepRow]) -> str:
        records: List[Dict[str, Any]] = [
            {key: _json_safe(value) for key, value in row.to_dict().items()} for row in rows
        ]
        return json.dumps(records, indent=self.options.json_indent) + "\n"

    def render_rows(self, rows: Sequence[SweepRow], fmt: Optional[str] = None) -> str:
        fmt = (fmt or self.options.format).lower()
        if fmt == "csv":
            return self.rows_to_csv(rows)
        if fmt == "json":
            return self.rows_to_json(rows)
        raise ValueError(f"Unsupported format: {fmt}")

    def render_record(self, record: Dict[str, Any], fmt: Optional[str] = None) -> str:
        """Render one flat record (a report) as JSON or a one-row CSV."""
        fmt = (fmt or self.options.format).lower()
        if fmt == "json":
            safe = {key: _json_safe(value) for key, value in record.items()}
            return json.dumps(safe, indent=self.options.json_indent) + "\n"
        if fmt == "csv":
            frame = pd.DataFrame([record], columns=list(record))
            return frame.to_csv(
                index=False,
                float_format=self.options.float_format,
                na_rep="nan",
                lineterminator="\n",
            )
        raise ValueError(f"Unsupported format: {fmt}")

    def render_report(self, report: Any, fmt: Optional[str] = None) -> str:
        if not isinstance(report, (BoundReport, NormReport)):
            raise TypeError(f"cannot render {type(report).__name__}")
        return self.render_record(report.to_dict(), fmt)

    def export_rows(
        self,
        rows: Sequence[SweepRow],
        output_path: Path,
        fmt: Optional[str] = None,
    ) -> ExportResult:
        """Write sweep rows to a file.

        Args:
            rows: Sweep rows
            output_path: Output file path
            fmt: 'csv' or 'json' (defaults to the configured format)

        Returns:
            ExportResult object
        """
        try:
            text = self.render_rows(rows, fmt)
            output_path.parent.mkdir(parents=True, exist_ok=True)
            output_path.write_text(text, encoding="utf-8")
        except (OSError, ValueError) as e:
            return ExportResult(
                success=False,
                output_path=output_path,
                row_count=0,
                file_size=0,
                error=str(e),
            )

        return ExportResult(
            success=True,
            output_path=output_path,
            row_count=len(rows),
            file_size=output_path.stat().st_size,
        )
