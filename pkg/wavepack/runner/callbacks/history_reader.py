import csv
import logging
import os

from wavepack.classify.trainer import HistoryRow
from wavepack.runner.callbacks.history_writer import HISTORY_HEADER
from wavepack.utils.common import is_package_installed

logger = logging.getLogger(__name__)


def load_history(path: str, as_dataframe: bool = False):
    """Read a history.csv (or the history.csv inside a run directory)."""
    if os.path.isdir(path):
        path = os.path.join(path, "history.csv")
    if as_dataframe:
        assert is_package_installed("pandas"), "To use as_dataframe you need to install the 'pandas'. (pip install pandas)"
        import pandas as pd

        return pd.read_csv(path)

    rows = []
    with open(path, "r", encoding="utf-8", newline="") as f:
        r = csv.reader(f)
        header = next(r, None)
        if header != HISTORY_HEADER:
            raise ValueError(f"not a history file (header={header}): {path}")
        for line in r:
            rows.append(HistoryRow(int(line[0]), line[1], float(line[2]), float(line[3])))
    logger.debug(f"loaded {len(rows)} history rows: {path}")
    return rows
