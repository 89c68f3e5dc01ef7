"""Base repository with generic load/save operations.

Concrete repositories declare the formats they understand and implement
``_parse_<fmt>`` / ``_serialize_<fmt>`` for each. Parsing works on bytes so
the CLI (files) and the HTTP front end (request bodies) share one code path.
"""

from __future__ import annotations

import logging
from collections.abc import Iterator
from pathlib import Path
from typing import ClassVar, Generic, TypeVar

from mlskel.domain.exceptions import ParseError, UnsupportedFormatError

logger = logging.getLogger(__name__)

T = TypeVar("T")


class BaseRepository(Generic[T]):
    """Generic file repository dispatching on format name or file extension.

    Subclasses set ``formats`` (format name -> accepted extensions).
    """

    formats: ClassVar[dict[str, tuple[str, ...]]] = {}
    writable: ClassVar[tuple[str, ...]] = ()

    def detect_format(self, path: str | Path, fmt: str | None = None) -> str:
        """Resolve an explicit format or infer it from the extension."""
        if fmt:
            fmt = fmt.lower().lstrip(".")
            if fmt not in self.formats:
                raise UnsupportedFormatError(fmt, list(self.formats))
            return fmt
        suffix = Path(path).suffix.lower().lstrip(".")
        for name, extensions in self.formats.items():
            if suffix in extensions:
                return name
        raise UnsupportedFormatError(suffix or str(path), list(self.formats))

    def load(self, path: str | Path, fmt: str | None = None) -> T:
        """Read and parse a file."""
        fmt = self.detect_format(path, fmt)
        try:
            data = Path(path).read_bytes()
        except OSError as e:
            raise ParseError(f"Cannot read file: {e.strerror}", str(path)) from e
        result = self.parse(data, fmt, source=str(path))
        logger.debug("Loaded %s file=%s", fmt, path)
        return result

    def parse(self, data: bytes | str, fmt: str, source: str | None = None) -> T:
        """Parse in-memory content in the given format."""
        fmt = self.detect_format(source or "", fmt)
        if isinstance(data, str):
            data = data.encode("utf-8")
        return getattr(self, f"_parse_{fmt}")(data, source)

    def save(self, obj: T, path: str | Path, fmt: str | None = None) -> Path:
        """Serialise ``obj`` and write it, creating parent directories."""
        fmt = self.detect_format(path, fmt)
        if fmt not in self.writable:
            raise UnsupportedFormatError(f"{fmt} (write)", list(self.writable))
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(self.serialize(obj, fmt))
        logger.info("Wrote %s file=%s", fmt, path)
        return path

    def serialize(self, obj: T, fmt: str) -> bytes:
        if fmt not in self.writable:
            raise UnsupportedFormatError(f"{fmt} (write)", list(self.writable))
        return getattr(self, f"_serialize_{fmt}")(obj)

    # ------------------------------------------------------------------
    # Text helpers
    # ------------------------------------------------------------------
    @staticmethod
    def _iter_records(data: bytes, comment: str = "#") -> Iterator[tuple[int, list[str]]]:
        """Yield ``(line number, tokens)`` for every non-blank, non-comment line."""
        text = data.decode("utf-8", errors="replace")
        for line_no, line in enumerate(text.splitlines(), start=1):
            stripped = line.split(comment, 1)[0].strip() if comment else line.strip()
            if stripped:
                yield line_no, stripped.split()

    @staticmethod
    def _to_int(token: str, source: str | None, line: int) -> int:
        try:
            return int(token)
        except ValueError:
            raise ParseError(f"Expected an integer, got '{token}'", source, line=line) from None

    @staticmethod
    def _to_float(token: str, source: str | None, line: int) -> float:
        try:
            return float(token)
        except ValueError:
            raise ParseError(f"Expected a number, got '{token}'", source, line=line) from None

    @staticmethod
    def _format_float(value: float) -> str:
        # repr round-trips a float64 exactly
        return repr(float(value))
