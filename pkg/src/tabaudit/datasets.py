"""Embedded datasets and dataset file I/O.

Three datasets ship with the package:

* ``original`` - the uncorrected shift/incident counts for the three wards
  (JKZ, RKZ1, RKZ2) used in the prosecution's calculation.
* ``derksen`` - the conservative correction of those counts (same border
  totals, allocations checked against the rosters).
* ``shops`` - the two-shop hat-fitting example, the textbook
  Simpson-paradox illustration.

JSON schema (canonical)::

    {"name": str, "row_labels": [str, str], "col_labels": [str, str],
     "strata": [{"label": str, "counts": [[a, b], [c, d]]}]}

CSV alternative: optional header, then one row per stratum with columns
``stratum,a,b,c,d``.

Schema and syntax problems raise :class:`DatasetFormatError` (an input
error); structurally valid files with bad counts raise
:class:`~tabaudit.tables.TableValidationError` (a validation error).
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from .tables import StratifiedTable, Table2x2


class DatasetFormatError(ValueError):
    """Raised when a dataset file or document is malformed."""


class UnknownDatasetError(KeyError):
    """Raised when an embedded dataset name does not exist."""


@dataclass(frozen=True)
class DatasetInfo:
    """Case configuration and reference metadata for an embedded dataset."""

    n_nurses: int
    multiway_reference: float | None   # published multiway correlation; metadata only
    description: str


def _make(name, row_labels, col_labels, strata):
    return StratifiedTable(
        tuple(
            (label, Table2x2(a, b, c, d, row_labels=row_labels, col_labels=col_labels))
            for label, (a, b, c, d) in strata
        ),
        name=name,
    )


EMBEDDED: dict[str, StratifiedTable] = {
    "original": _make(
        "original",
        ("V", "Other"),
        ("Incident", "No incident"),
        [("JKZ", (8, 134, 0, 887)), ("RKZ1", (1, 0, 4, 361)), ("RKZ2", (5, 53, 9, 272))],
    ),
    "derksen": _make(
        "derksen",
        ("V", "Other"),
        ("Incident", "No incident"),
        [("JKZ", (4, 138, 1, 886)), ("RKZ1", (1, 2, 4, 359)), ("RKZ2", (1, 57, 9, 272))],
    ),
    "shops": _make(
        "shops",
        ("Green", "Blue"),
        ("Fit", "No fit"),
        [("Shop1", (5, 1, 8, 2)), ("Shop2", (2, 8, 1, 5))],
    ),
}

DATASET_INFO: dict[str, DatasetInfo] = {
    "original": DatasetInfo(27, 0.337002, "uncorrected ward counts"),
    "derksen": DatasetInfo(27, 0.246024, "corrected ward counts"),
    "shops": DatasetInfo(27, 0.665851, "two-shop Simpson paradox example"),
}

DEFAULT_N_NURSES = 27


def available() -> tuple[str, ...]:
    return tuple(EMBEDDED)


def get(name: str) -> StratifiedTable:
    try:
        return EMBEDDED[name]
    except KeyError:
        known = ", ".join(sorted(EMBEDDED))
        raise UnknownDatasetError(f"unknown dataset {name!r} (embedded: {known})") from None


def n_nurses_for(name: str) -> int:
    info = DATASET_INFO.get(name)
    return info.n_nurses if info else DEFAULT_N_NURSES


def to_json_dict(s: StratifiedTable) -> dict:
    return {
        "name": s.name,
        "row_labels": list(s.row_labels),
        "col_labels": list(s.col_labels),
        "strata": [
            {"label": label, "counts": [[t.a, t.b], [t.c, t.d]]} for label, t in s.strata
        ],
    }


def from_json_dict(doc: Mapping, source: str = "<json>") -> StratifiedTable:
    if not isinstance(doc, Mapping):
        raise DatasetFormatError(f"{source}: dataset document must be an object")
    try:
        name = doc.get("name", "")
        row_labels = tuple(doc["row_labels"])
        col_labels = tuple(doc["col_labels"])
        raw_strata = doc["strata"]
    except KeyError as exc:
        raise DatasetFormatError(f"{source}: missing key {exc.args[0]!r}") from None
    if len(row_labels) != 2 or len(col_labels) != 2:
        raise DatasetFormatError(f"{source}: row_labels and col_labels must each have 2 entries")
    if not isinstance(raw_strata, list) or not raw_strata:
        raise DatasetFormatError(f"{source}: 'strata' must be a non-empty list")
    strata = []
    for i, entry in enumerate(raw_strata):
        try:
            label = entry["label"]
            counts = entry["counts"]
        except (TypeError, KeyError):
            raise DatasetFormatError(
                f"{source}: stratum {i} needs 'label' and 'counts'") from None
        if (
            not isinstance(counts, list)
            or len(counts) != 2
            or any(not isinstance(row, list) or len(row) != 2 for row in counts)
        ):
            raise DatasetFormatError(f"{source}: stratum {label!r} counts must be [[a,b],[c,d]]")
        (a, b), (c, d) = counts
        strata.append(
            (label, Table2x2(a, b, c, d, row_labels=row_labels, col_labels=col_labels))
        )
    return StratifiedTable(tuple(strata), name=str(name))


def load_json(path: str | Path) -> StratifiedTable:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise DatasetFormatError(f"{path}:{exc.lineno}: invalid JSON: {exc.msg}") from None
    return from_json_dict(doc, source=str(path))


def to_csv_text(s: StratifiedTable) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["stratum", "a", "b", "c", "d"])
    for label, t in s.strata:
        writer.writerow([label, t.a, t.b, t.c, t.d])
    return out.getvalue()


def from_csv_text(text: str, name: str = "", source: str = "<csv>") -> StratifiedTable:
    strata = []
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        if lineno == 1 and [c.strip().lower() for c in row] == ["stratum", "a", "b", "c", "d"]:
            continue
        if len(row) != 5:
            raise DatasetFormatError(
                f"{source}:{lineno}: expected 5 columns (stratum,a,b,c,d), got {len(row)}")
        label = row[0].strip()
        try:
            a, b, c, d = (int(cell) for cell in row[1:])
        except ValueError:
            raise DatasetFormatError(
                f"{source}:{lineno}: counts must be integers, got {row[1:]}") from None
        strata.append((label, Table2x2(a, b, c, d)))
    if not strata:
        raise DatasetFormatError(f"{source}: no strata found")
    return StratifiedTable(tuple(strata), name=name)


def load_csv(path: str | Path) -> StratifiedTable:
    path = Path(path)
    return from_csv_text(path.read_text(), name=path.stem, source=str(path))


def load_path(path: str | Path) -> StratifiedTable:
    """Load a dataset file, dispatching on the .json / .csv suffix."""
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix == ".json":
        return load_json(path)
    if suffix == ".csv":
        return load_csv(path)
    raise DatasetFormatError(f"{path}: unsupported dataset suffix {suffix!r} (use .json or .csv)")
