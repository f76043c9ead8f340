"""CSV helpers shared by the curve and report emitters.

Mapping ids may contain commas (shear ids do), so fields go through the
standard csv module: minimal quoting on write, quote-aware parsing on read.
Numeric fields are formatted by the callers; this module never reformats.
"""

from __future__ import annotations

import csv
import io
from typing import Iterable, List


def join_row(fields: Iterable[str]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="").writerow(list(fields))
    return buf.getvalue()


def parse_rows(text: str) -> List[List[str]]:
    return [row for row in csv.reader(text.splitlines()) if row]
