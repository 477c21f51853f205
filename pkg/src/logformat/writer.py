# writer.py
# ----------------------------------------------------------------
# taint log writer: versioned header, one tab-separated record
# per line, percent-escaped values
# ----------------------------------------------------------------
# adriana r.f. (@adrmisty)
# oct-2026

from __future__ import annotations

from typing import IO, Iterable
from urllib.parse import quote

from src import config
from src.errors import LogFormatError
from src.logformat.events import LogEvent

# everything else outside the unreserved set is escaped, including % TAB LF CR , =
SAFE_CHARS = "/@:$!*'()+;&?#[]"
LIST_SUFFIX = "[]"


def escape(value: str) -> str:
    return quote(value, safe=SAFE_CHARS)


def header_line(timestamp: int = 0) -> str:
    return f"{config.LOG_MAGIC}\t{config.LOG_VERSION}\ttimestamp={int(timestamp)}\n"


def format_event(event: LogEvent) -> str:
    parts = [str(event.seq), str(event.pid), event.kind.value]
    for name, value in event.fields:
        if isinstance(value, tuple):
            if "" in value:
                raise LogFormatError(f"seq {event.seq}: list field '{name}' has an empty element")
            parts.append(f"{name}{LIST_SUFFIX}=" + ",".join(escape(v) for v in value))
        else:
            parts.append(f"{name}={escape(value)}")
    return "\t".join(parts) + "\n"


def iter_lines(events: Iterable[LogEvent], timestamp: int = 0):
    yield header_line(timestamp)
    for event in events:
        yield format_event(event)


def write_log(events: Iterable[LogEvent], timestamp: int = 0) -> bytes:
    """Serializes an event stream. An empty stream gives the header line alone."""
    return "".join(iter_lines(events, timestamp)).encode("utf-8")


def dump_log(events: Iterable[LogEvent], stream: IO[bytes], timestamp: int = 0) -> int:
    """Streams records to a binary file object; returns the number of records written."""
    count = -1
    for count, line in enumerate(iter_lines(events, timestamp)):
        stream.write(line.encode("utf-8"))
    return count
