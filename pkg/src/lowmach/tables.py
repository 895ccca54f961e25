"""Convergence tables: rows of errors plus observed orders between rows."""

from __future__ import annotations

import math
from dataclasses import dataclass, field


def observed_order(err_coarse: float, err_fine: float, h_coarse: float, h_fine: float) -> float:
    """o = ln(E_c / E_f) / ln(h_c / h_f)."""
    if err_coarse <= 0.0 or err_fine <= 0.0:
        return math.nan
    return math.log(err_coarse / err_fine) / math.log(h_coarse / h_fine)


@dataclass
class ConvergenceTable:
    """Per-refinement errors in one or more norms, with observed orders."""

    metadata: dict = field(default_factory=dict)
    rows: list = field(default_factory=list)

    def add_row(self, level, h: float, errors: dict[str, float], extra: dict | None = None) -> None:
        row = {"level": level, "h": float(h)}
        prev = self.rows[-1] if self.rows else None
        for name, err in errors.items():
            row[f"err_{name}"] = float(err)
            if prev is None:
                row[f"ord_{name}"] = math.nan
            else:
                row[f"ord_{name}"] = observed_order(prev[f"err_{name}"], err, prev["h"], h)
        if extra:
            row.update(extra)
        self.rows.append(row)

    @property
    def norms(self) -> list[str]:
        return [k[4:] for k in self.rows[0] if k.startswith("err_")] if self.rows else []

    def column(self, key: str) -> list:
        return [row[key] for row in self.rows]

    def order(self, norm: str, which: int = -1) -> float:
        """Observed order of a norm between a pair of consecutive rows."""
        return self.rows[which][f"ord_{norm}"]

    def error(self, norm: str, which: int = -1) -> float:
        return self.rows[which][f"err_{norm}"]

    def _columns(self, columns=None) -> list[str]:
        if columns is not None:
            return list(columns)
        cols = ["level", "h"]
        for n in self.norms:
            cols += [f"err_{n}", f"ord_{n}"]
        return cols

    def to_csv(self, path, columns=None) -> None:
        import csv

        cols = self._columns(columns)
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(cols)
            for row in self.rows:
                writer.writerow([_format(row.get(c)) for c in cols])

    def to_markdown(self, columns=None) -> str:
        cols = self._columns(columns)
        lines = ["| " + " | ".join(cols) + " |", "|" + "---|" * len(cols)]
        for row in self.rows:
            lines.append("| " + " | ".join(_format(row.get(c)) for c in cols) + " |")
        return "\n".join(lines)


def _format(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isnan(value):
            return ""
        return f"{value:.6g}" if abs(value) < 1e4 else f"{value:.6e}"
    return str(value)
