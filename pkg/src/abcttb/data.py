"""Object tables, pair construction and object-wise train/test splits.

Object CSV layout (UTF-8, comma separated)::

    # optional comment lines start with '#'
    name,criterion,<cue_1>,...,<cue_K>
    Alpha,120000,1,0,...

Pair CSV layout, used for generated data::

    outcome,<cue_1>,...,<cue_K>
    1,0,1,-1,...
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np

from .core import PairSet
from .errors import ContractViolation, DegenerateSplit, DuplicateName, EmptyTable, ParseError
from .proposal import make_rng

CITY_FIXTURE = "cities_synthetic.csv"


@dataclass(frozen=True)
class ObjectTable:
    names: tuple
    criterion: np.ndarray
    cues: np.ndarray
    cue_names: tuple

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise DuplicateName("object names must be unique")
        if self.cues.shape != (len(self.names), len(self.cue_names)):
            raise ContractViolation("cue matrix shape does not match names and cue_names")
        if not np.all(np.isfinite(self.criterion)):
            raise ContractViolation("criterion values must be finite")

    def __len__(self) -> int:
        return len(self.names)

    @property
    def k(self) -> int:
        return len(self.cue_names)

    def subset(self, idx) -> "ObjectTable":
        idx = np.asarray(idx, dtype=int)
        return ObjectTable(tuple(self.names[i] for i in idx), self.criterion[idx],
                           self.cues[idx], self.cue_names)


def _data_lines(text: str):
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        yield lineno, line


def parse_objects(text: str) -> ObjectTable:
    rows = [(lineno, next(csv.reader([line]))) for lineno, line in _data_lines(text)]
    if not rows:
        raise EmptyTable("no header row")
    header_line, header = rows[0]
    header = [h.strip() for h in header]
    if len(header) < 3 or header[0] != "name" or header[1] != "criterion":
        raise ParseError("header must be 'name,criterion,<cue>,...'", row=header_line)
    cue_names = tuple(header[2:])
    k = len(cue_names)
    names, crit, cues = [], [], []
    seen = {}
    for lineno, cells in rows[1:]:
        if len(cells) != k + 2:
            raise ParseError(f"expected {k + 2} fields, found {len(cells)}", row=lineno)
        name = cells[0].strip()
        if name in seen:
            raise DuplicateName(f"duplicate object name {name!r} on rows {seen[name]} and {lineno}")
        seen[name] = lineno
        try:
            value = float(cells[1])
        except ValueError:
            raise ParseError(f"non-numeric criterion {cells[1]!r}", row=lineno,
                             column="criterion") from None
        if not math.isfinite(value):
            raise ParseError(f"criterion must be finite, got {cells[1]!r}", row=lineno,
                             column="criterion")
        row = []
        for cname, cell in zip(cue_names, cells[2:]):
            cell = cell.strip()
            if cell not in ("0", "1"):
                raise ParseError(f"cue value must be 0 or 1, got {cell!r}", row=lineno,
                                 column=cname)
            row.append(int(cell))
        names.append(name)
        crit.append(value)
        cues.append(row)
    if not names:
        raise EmptyTable("table has a header but no objects")
    return ObjectTable(tuple(names), np.array(crit, dtype=float),
                       np.array(cues, dtype=np.int8).reshape(len(names), k), cue_names)


def load_objects_csv(path) -> ObjectTable:
    return parse_objects(Path(path).read_text(encoding="utf-8"))


def load_city_fixture() -> ObjectTable:
    """The bundled city-size-schema table (synthetic values, not census data)."""
    text = resources.files("abcttb").joinpath("data").joinpath(CITY_FIXTURE).read_text(encoding="utf-8")
    return parse_objects(text)


def build_pairs(table: ObjectTable, return_ties: bool = False):
    """All unordered pairs ``i < j`` with ``diffs = cues[i] - cues[j]``.

    Pairs with equal criterion values have no defined outcome and are
    dropped; their number is reported through a warning, or returned
    alongside the pairs when ``return_ties`` is set.
    """
    n = len(table)
    if n < 2:
        raise ContractViolation("need at least two objects to form pairs")
    i, j = np.triu_indices(n, k=1)
    ci, cj = table.criterion[i], table.criterion[j]
    keep = ci != cj
    ties = int(np.count_nonzero(~keep))
    if ties and not return_ties:
        warnings.warn(f"dropped {ties} pair(s) with tied criterion values", stacklevel=2)
    i, j = i[keep], j[keep]
    diffs = (table.cues[i].astype(np.int8) - table.cues[j].astype(np.int8))
    outcome = (table.criterion[i] > table.criterion[j]).astype(np.int8)
    pairs = PairSet(diffs.reshape(len(i), table.k), outcome, validate=False)
    return (pairs, ties) if return_ties else pairs


def train_size(fraction: float, n: int) -> int:
    return int(math.floor(fraction * n + 0.5))


def split_objects(table: ObjectTable, fraction: float, rng) -> Tuple[ObjectTable, ObjectTable]:
    """Random object-wise split with ``round(fraction * n)`` training objects.

    Both sides must keep at least two objects so that pairs exist; otherwise
    :class:`DegenerateSplit` is raised.
    """
    if not 0.0 < fraction < 1.0:
        raise ContractViolation(f"fraction must lie in (0, 1), got {fraction}")
    rng = make_rng(rng)
    n = len(table)
    n_train = train_size(fraction, n)
    if n_train < 2 or n - n_train < 2:
        raise DegenerateSplit(
            f"fraction {fraction} of {n} objects gives {n_train} train / "
            f"{n - n_train} test objects; both sides need at least 2")
    perm = rng.permutation(n)
    return table.subset(np.sort(perm[:n_train])), table.subset(np.sort(perm[n_train:]))


def write_pairs_csv(pairs: PairSet, path, cue_names: Optional[List[str]] = None) -> Path:
    path = Path(path)
    cue_names = list(cue_names or [f"c{i + 1}" for i in range(pairs.k)])
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["outcome", *cue_names])
        for y, row in zip(pairs.outcome.tolist(), pairs.diffs.tolist()):
            w.writerow([y, *row])
    return path


def parse_pairs(text: str) -> Tuple[PairSet, tuple]:
    rows = [(lineno, next(csv.reader([line]))) for lineno, line in _data_lines(text)]
    if not rows:
        raise EmptyTable("no header row")
    header_line, header = rows[0]
    if header[0].strip() != "outcome" or len(header) < 2:
        raise ParseError("header must be 'outcome,<cue>,...'", row=header_line)
    cue_names = tuple(h.strip() for h in header[1:])
    diffs, outcome = [], []
    for lineno, cells in rows[1:]:
        if len(cells) != len(header):
            raise ParseError(f"expected {len(header)} fields, found {len(cells)}", row=lineno)
        try:
            vals = [int(c) for c in cells]
        except ValueError:
            raise ParseError("non-integer value", row=lineno) from None
        if vals[0] not in (0, 1):
            raise ParseError("outcome must be 0 or 1", row=lineno, column="outcome")
        for cname, v in zip(cue_names, vals[1:]):
            if v not in (-1, 0, 1):
                raise ParseError("diff must be -1, 0 or 1", row=lineno, column=cname)
        outcome.append(vals[0])
        diffs.append(vals[1:])
    if not outcome:
        raise EmptyTable("no pairs in file")
    return PairSet(diffs, outcome, validate=False), cue_names


def load_pairs(path) -> Tuple[PairSet, tuple]:
    """Read either an object CSV (pairs are built from it) or a pair CSV."""
    text = Path(path).read_text(encoding="utf-8")
    first = next((line for _, line in _data_lines(text)), "")
    if first.split(",")[0].strip() == "outcome":
        return parse_pairs(text)
    table = parse_objects(text)
    return build_pairs(table), table.cue_names
