"""Convergence tables."""

from dataclasses import dataclass, field

import pandas as pd

from wgplate.display import DisplayDataframe
from wgplate.utils import log_ratio_rates

COLUMNS = [
    "level",
    "n",
    "h",
    "ndof",
    "energy_err",
    "h2_err",
    "l2_err",
    "energy_rate",
    "l2_rate",
]


@dataclass(frozen=True)
class LevelResult:
    level: int
    n: int
    h: float
    ndof: int
    energy_err: float
    h2_err: float
    l2_err: float


@dataclass
class ErrorReport:
    """Errors per refinement level with observed rates between levels.

    Rates use ``log(e_i / e_{i+1}) / log(h_i / h_{i+1})`` and are blank on the
    first level.
    """

    levels: list = field(default_factory=list)

    def append(self, result):
        self.levels.append(result)

    def __len__(self):
        return len(self.levels)

    def to_dataframe(self):
        df = pd.DataFrame([vars(r) for r in self.levels], columns=COLUMNS[:7])
        df["energy_rate"] = log_ratio_rates(df["energy_err"], df["h"])
        df["l2_rate"] = log_ratio_rates(df["l2_err"], df["h"])
        return df[COLUMNS]

    def rate(self, column):
        """Observed rate between the two finest levels."""
        return float(self.to_dataframe()[f"{column}_rate"].iloc[-1])

    def to_csv(self, path=None):
        """CSV text with 16 significant digits; written to ``path`` when given."""
        text = DisplayDataframe(self.to_dataframe()).to_csv()
        if path is not None:
            with open(path, "w", newline="") as f:
                f.write(text)
        return text
