"""Reader for the Monash `.tsf` time-series collection format.

The format: `#` comment lines, case-insensitive `@` header directives
(`@relation`, `@attribute <name> <type>`, `@frequency`, `@horizon`,
`@missing`, `@equallength`), then `@data` followed by one series per line:

    attr1:attr2:...:v1,v2,...,vn

Attribute values appear in declaration order, the final field is the
comma-separated value list, and `?` marks a missing value. Parsing is
streaming: memory stays proportional to one line plus the accumulated
series, so multi-million-point series load fine.

`write_tsf` is the round-trip companion used by the test suite; it is not
a supported interchange writer.
"""

from __future__ import annotations

import io
import re
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import IO, Iterator, Union

import numpy as np

from tsbench.core import Dataset, Frequency, TimeSeries, default_horizon, frequency_from_string
from tsbench.errors import (
    AttributeCountMismatch,
    MissingDataSection,
    UnknownFrequency,
    UnparsableValue,
)

Source = Union[str, Path, IO[bytes], IO[str]]

_ATTRIBUTE_TYPES = {"string", "date", "numeric"}

_DATE_FORMATS = (
    "%Y-%m-%d %H-%M-%S",
    "%Y-%m-%d %H:%M:%S",
    "%Y-%m-%d",
    "%Y-%m",
    "%Y",
)

# a date attribute split apart by ':' time separators starts like "1979-01-01 00"
_COLON_DATE_HEAD = re.compile(r"^\d{4}-\d{2}-\d{2} \d{1,2}$")
_TWO_DIGITS = re.compile(r"^\d{1,2}$")


@dataclass(frozen=True)
class TsfHeader:
    """Parsed header of a `.tsf` file, prior to the `@data` section."""

    relation: str
    attributes: tuple[tuple[str, str], ...]
    frequency: str
    horizon: int | None
    missing: bool
    equal_length: bool


def parse_header(source: Source) -> TsfHeader:
    """Read just the header directives, stopping at `@data`.

    Cheap inspection for large files; raises MissingDataSection when the
    file has no data section at all.
    """
    relation = ""
    attributes: list[tuple[str, str]] = []
    frequency = ""
    horizon: int | None = None
    missing = False
    equal_length = False
    line_no = 0
    for raw_line in _iter_lines(source):
        line_no += 1
        line = raw_line.rstrip()
        if not line or line.lstrip().startswith("#"):
            continue
        if not line.startswith("@"):
            raise MissingDataSection(f"data line before @data on line {line_no}")
        parts = line.split(None, 1)
        directive = parts[0].lower()
        rest = parts[1].strip() if len(parts) > 1 else ""
        if directive == "@relation":
            relation = rest
        elif directive == "@attribute":
            attr = rest.split()
            if len(attr) != 2 or attr[1].lower() not in _ATTRIBUTE_TYPES:
                raise UnparsableValue(line_no, 0, f"bad attribute declaration on line {line_no}: {rest!r}")
            attributes.append((attr[0], attr[1].lower()))
        elif directive == "@frequency":
            frequency = rest
        elif directive == "@horizon":
            try:
                horizon = int(rest)
            except ValueError:
                raise UnparsableValue(line_no, 0, f"bad horizon {rest!r} on line {line_no}") from None
        elif directive == "@missing":
            missing = _parse_bool(rest, line_no)
        elif directive == "@equallength":
            equal_length = _parse_bool(rest, line_no)
        elif directive == "@data":
            return TsfHeader(relation, tuple(attributes), frequency, horizon, missing, equal_length)
    raise MissingDataSection("no @data section found")


def _iter_lines(source: Source) -> Iterator[str]:
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8", newline=None) as fh:
            yield from fh
    elif isinstance(source, io.TextIOBase):
        yield from source
    else:  # binary stream
        yield from io.TextIOWrapper(source, encoding="utf-8")


def _parse_bool(raw: str, line_no: int) -> bool:
    val = raw.strip().lower()
    if val == "true":
        return True
    if val == "false":
        return False
    raise UnparsableValue(line_no, 0, f"expected true/false on line {line_no}, got {raw!r}")


def _parse_timestamp(raw: str, line_no: int, column: int) -> datetime:
    for fmt in _DATE_FORMATS:
        try:
            return datetime.strptime(raw, fmt)
        except ValueError:
            continue
    raise UnparsableValue(line_no, column, f"unparsable timestamp {raw!r} on line {line_no}")


def _split_data_line(line: str, attributes: tuple[tuple[str, str], ...], line_no: int) -> list[str]:
    """Split a data line into one field per attribute plus the value list.

    Date attributes may themselves contain ':' time separators; those are
    re-merged so the field count matches the declaration.
    """
    parts = line.split(":")
    n_fields = len(attributes) + 1
    if len(parts) == n_fields:
        return parts
    if len(parts) < n_fields:
        raise AttributeCountMismatch(line_no)
    fields: list[str] = []
    i = 0
    for name, typ in attributes:
        if i >= len(parts):
            raise AttributeCountMismatch(line_no)
        extra = len(parts) - i - (len(attributes) - len(fields)) - 1
        if (
            typ == "date"
            and extra >= 2
            and _COLON_DATE_HEAD.match(parts[i])
            and _TWO_DIGITS.match(parts[i + 1])
            and _TWO_DIGITS.match(parts[i + 2])
        ):
            fields.append(":".join(parts[i : i + 3]))
            i += 3
        else:
            fields.append(parts[i])
            i += 1
    if len(parts) - i != 1:
        raise AttributeCountMismatch(line_no)
    fields.append(parts[i])
    return fields


def _parse_series_values(raw: str, line_no: int) -> np.ndarray:
    tokens = raw.split(",")
    if tokens == [""]:
        raise UnparsableValue(line_no, 0, f"empty series on line {line_no}")
    out = np.empty(len(tokens), dtype=float)
    for col, tok in enumerate(tokens):
        tok = tok.strip()
        if tok == "?":
            out[col] = np.nan
            continue
        try:
            out[col] = float(tok)
        except ValueError:
            raise UnparsableValue(line_no, col, f"unparsable value {tok!r} on line {line_no}, column {col}") from None
        if np.isinf(out[col]) or (np.isnan(out[col]) and tok != "?"):
            raise UnparsableValue(line_no, col, f"non-finite value {tok!r} on line {line_no}, column {col}")
    return out


def parse_tsf(source: Source, *, name: str | None = None) -> Dataset:
    """Parse a `.tsf` file (path or stream) into a Dataset.

    When `@horizon` is absent the horizon falls back to the bundled
    per-dataset table, then the per-frequency default; the source is
    recorded on ``Dataset.horizon_source``.
    """
    if name is None and isinstance(source, (str, Path)):
        name = Path(source).stem

    relation: str | None = None
    attributes: list[tuple[str, str]] = []
    frequency: Frequency | None = None
    horizon: int | None = None
    missing = False
    equal_length = False
    in_data = False
    series: list[TimeSeries] = []

    line_no = 0
    for raw_line in _iter_lines(source):
        line_no += 1
        line = raw_line.rstrip()
        if not line or line.lstrip().startswith("#"):
            continue
        if not in_data and line.startswith("@"):
            parts = line.split(None, 1)
            directive = parts[0].lower()
            rest = parts[1].strip() if len(parts) > 1 else ""
            if directive == "@relation":
                relation = rest or relation
            elif directive == "@attribute":
                attr = rest.split()
                if len(attr) != 2 or attr[1].lower() not in _ATTRIBUTE_TYPES:
                    raise UnparsableValue(line_no, 0, f"bad attribute declaration on line {line_no}: {rest!r}")
                attributes.append((attr[0], attr[1].lower()))
            elif directive == "@frequency":
                frequency = frequency_from_string(rest)
            elif directive == "@horizon":
                try:
                    horizon = int(rest)
                except ValueError:
                    raise UnparsableValue(line_no, 0, f"bad horizon {rest!r} on line {line_no}") from None
            elif directive == "@missing":
                missing = _parse_bool(rest, line_no)
            elif directive == "@equallength":
                equal_length = _parse_bool(rest, line_no)
            elif directive == "@data":
                in_data = True
            # unknown directives are ignored for forward compatibility
            continue
        if not in_data:
            raise MissingDataSection(f"data line before @data on line {line_no}")
        if frequency is None:
            raise UnknownFrequency("file declares no @frequency before @data")
        fields = _split_data_line(line, tuple(attributes), line_no)
        series_name = f"series_{len(series)}"
        start: datetime | None = None
        for (attr_name, attr_type), value in zip(attributes, fields):
            if attr_type == "string" and series_name.startswith("series_"):
                series_name = value
            elif attr_type == "date" and start is None:
                start = _parse_timestamp(value, line_no, 0)
        values = _parse_series_values(fields[-1], line_no)
        series.append(TimeSeries(series_name, start, values, frequency))

    if not in_data:
        raise MissingDataSection("no @data section found")
    if frequency is None:
        raise UnknownFrequency("file declares no @frequency")

    dataset_name = name or relation or "dataset"
    horizon_source = "file"
    if horizon is None:
        try:
            horizon = default_horizon(dataset_name, strict=True)
            horizon_source = "table"
        except Exception:
            horizon = default_horizon(dataset_name, frequency)
            horizon_source = "frequency_fallback"

    return Dataset(
        name=dataset_name,
        series=tuple(series),
        frequency=frequency,
        horizon=horizon,
        contains_missing=missing,
        equal_length=equal_length,
        horizon_source=horizon_source,
    )


def _format_value(x: float) -> str:
    if np.isnan(x):
        return "?"
    if float(x).is_integer() and abs(x) < 1e15:
        return str(int(x))
    return repr(float(x))


def write_tsf(dataset: Dataset, target: Union[str, Path, IO[str]]) -> None:
    """Serialize a Dataset back to `.tsf` text (round-trip test utility)."""
    own = isinstance(target, (str, Path))
    fh: IO[str] = open(target, "w", encoding="utf-8") if own else target  # type: ignore[assignment]
    try:
        fh.write(f"@relation {dataset.name}\n")
        fh.write("@attribute series_name string\n")
        has_start = any(ts.start is not None for ts in dataset.series)
        if has_start:
            fh.write("@attribute start_timestamp date\n")
        fh.write(f"@frequency {dataset.frequency.value}\n")
        fh.write(f"@horizon {dataset.horizon}\n")
        fh.write(f"@missing {str(dataset.contains_missing).lower()}\n")
        fh.write(f"@equallength {str(dataset.equal_length).lower()}\n")
        fh.write("@data\n")
        for ts in dataset.series:
            fields = [ts.name]
            if has_start:
                stamp = ts.start or datetime(1900, 1, 1)
                fields.append(stamp.strftime("%Y-%m-%d %H-%M-%S"))
            fields.append(",".join(_format_value(v) for v in ts.values))
            fh.write(":".join(fields) + "\n")
    finally:
        if own:
            fh.close()
