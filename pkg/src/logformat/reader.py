# reader.py
# ----------------------------------------------------------------
# streaming taint log reader: header/version check, positioned
# record errors, pid focus filtering, unknown kinds skipped
# ----------------------------------------------------------------
# adriana r.f. (@adrmisty)
# oct-2026

from __future__ import annotations

import io
import logging
from typing import IO, Iterable, Iterator, Optional, Set, Union
from urllib.parse import unquote

from src import config
from src.errors import LogFormatError, VersionError
from src.logformat.events import EventKind, LogEvent
from src.logformat.metadata import AppMetadata
from src.logformat.writer import LIST_SUFFIX

log = logging.getLogger(__name__)

KNOWN_KINDS = {kind.value: kind for kind in EventKind}

LogSource = Union[bytes, str, IO[bytes], Iterable[bytes]]


def _lines(source: LogSource) -> Iterable[bytes]:
    if isinstance(source, str):
        source = source.encode("utf-8")
    if isinstance(source, (bytes, bytearray)):
        return io.BytesIO(source)
    return source


class LogReader:
    """
    Single-pass reader over a log. Iterating yields the focused events in order;
    `skipped` counts records of unknown kind, `timestamp` is set once the header is read.
    """

    def __init__(self, source: LogSource, focus_pids: Optional[Set[int]] = None):
        self.source = source
        self.focus_pids = set(focus_pids) if focus_pids is not None else None
        self.timestamp: Optional[int] = None
        self.skipped = 0
        self.total = 0

    def __iter__(self) -> Iterator[LogEvent]:
        lineno = 0
        last_seq = None
        for lineno, raw in enumerate(_lines(self.source), start=1):
            if not raw.endswith(b"\n"):
                raise LogFormatError("truncated record (no line terminator)", lineno)
            try:
                line = raw[:-1].decode("utf-8")
            except UnicodeDecodeError as e:
                raise LogFormatError(f"record is not UTF-8 ({e.reason})", lineno) from None

            if lineno == 1:
                self._header(line)
                continue

            event = self._record(line, lineno)
            if event is None:
                continue
            if last_seq is not None and event.seq <= last_seq:
                raise LogFormatError(f"sequence number {event.seq} does not increase", lineno)
            last_seq = event.seq
            self.total += 1
            if self.focus_pids is None or event.pid in self.focus_pids:
                yield event

        if lineno == 0:
            raise LogFormatError("empty log (missing header)", 1)
        if self.skipped:
            log.warning("skipped %d record(s) of unknown kind", self.skipped)

    def _header(self, line: str):
        parts = line.split("\t")
        if len(parts) != 3 or parts[0] != config.LOG_MAGIC or not parts[2].startswith("timestamp="):
            raise LogFormatError(f"bad header, expected '{config.LOG_MAGIC}<TAB>version<TAB>timestamp=N'", 1)
        if parts[1] != str(config.LOG_VERSION):
            raise VersionError(f"unsupported log version {parts[1]!r} (supported: {config.LOG_VERSION})", 1)
        try:
            self.timestamp = int(parts[2][len("timestamp="):])
        except ValueError:
            raise LogFormatError("header timestamp is not an integer", 1) from None

    def _record(self, line: str, lineno: int) -> Optional[LogEvent]:
        parts = line.split("\t")
        if len(parts) < 3:
            raise LogFormatError("record needs seq, pid and kind", lineno)
        try:
            seq, pid = int(parts[0]), int(parts[1])
        except ValueError:
            raise LogFormatError("seq and pid must be integers", lineno) from None

        kind = KNOWN_KINDS.get(parts[2])
        if kind is None:
            self.skipped += 1
            log.debug("line %d: unknown record kind %r", lineno, parts[2])
            return None

        fields = []
        for part in parts[3:]:
            name, sep, value = part.partition("=")
            if not sep or not name:
                raise LogFormatError(f"malformed field {part!r}", lineno)
            if name.endswith(LIST_SUFFIX):
                items = tuple(unquote(v) for v in value.split(",")) if value else ()
                if "" in items:
                    raise LogFormatError(f"list field '{name}' has an empty element", lineno)
                fields.append((name[:-len(LIST_SUFFIX)], items))
            else:
                fields.append((name, unquote(value)))
        return LogEvent(seq, pid, kind, tuple(fields))


def parse_log(source: LogSource, meta: Optional[AppMetadata] = None,
              focus_pids: Optional[Set[int]] = None) -> Iterator[LogEvent]:
    """
    Streams the events of a log. Without an explicit focus, events of processes
    that are not described by `meta` are dropped; without either, nothing is dropped.
    """
    if focus_pids is None and meta is not None:
        focus_pids = meta.pids()
    return iter(LogReader(source, focus_pids))
