"""Shared PLY header and body reader (ascii and binary little endian)."""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

from mlskel.domain.exceptions import ParseError, UnsupportedFormatError

PLY_TYPES = {
    "char": "b", "int8": "b",
    "uchar": "B", "uint8": "B",
    "short": "h", "int16": "h",
    "ushort": "H", "uint16": "H",
    "int": "i", "int32": "i",
    "uint": "I", "uint32": "I",
    "float": "f", "float32": "f",
    "double": "d", "float64": "d",
}
SUPPORTED_ENCODINGS = ["ascii", "binary_little_endian"]


@dataclass
class PlyProperty:
    name: str
    code: str
    count_code: str | None = None

    @property
    def is_list(self) -> bool:
        return self.count_code is not None


@dataclass
class PlyElement:
    name: str
    count: int
    properties: list[PlyProperty] = field(default_factory=list)

    def property_names(self) -> list[str]:
        return [p.name for p in self.properties]


@dataclass
class PlyHeader:
    encoding: str
    elements: list[PlyElement]
    body_offset: int
    body_line: int

    def element(self, name: str) -> PlyElement | None:
        for element in self.elements:
            if element.name == name:
                return element
        return None


def parse_header(data: bytes, source: str | None = None) -> PlyHeader:
    """Parse everything up to and including ``end_header``."""
    if not data.startswith(b"ply"):
        raise ParseError("Missing 'ply' magic", source, line=1, offset=0)

    encoding = None
    elements: list[PlyElement] = []
    offset = 0
    line_no = 0
    while True:
        end = data.find(b"\n", offset)
        if end == -1:
            raise ParseError("Header is not terminated by 'end_header'", source, line=line_no + 1)
        raw = data[offset:end].decode("ascii", errors="replace").strip()
        offset = end + 1
        line_no += 1
        tokens = raw.split()
        if not tokens or tokens[0] in ("ply", "comment", "obj_info"):
            continue
        keyword = tokens[0]
        if keyword == "end_header":
            break
        if keyword == "format":
            if len(tokens) < 2:
                raise ParseError("Malformed format line", source, line=line_no)
            encoding = tokens[1]
            if encoding not in SUPPORTED_ENCODINGS:
                raise UnsupportedFormatError(f"ply {encoding}", SUPPORTED_ENCODINGS)
        elif keyword == "element":
            if len(tokens) != 3:
                raise ParseError("Malformed element line", source, line=line_no)
            try:
                count = int(tokens[2])
            except ValueError:
                raise ParseError(f"Element count '{tokens[2]}' is not an integer", source, line=line_no) from None
            elements.append(PlyElement(tokens[1], count))
        elif keyword == "property":
            if not elements:
                raise ParseError("Property declared before any element", source, line=line_no)
            elements[-1].properties.append(_parse_property(tokens, source, line_no))
        else:
            raise ParseError(f"Unknown header keyword '{keyword}'", source, line=line_no)

    if encoding is None:
        raise ParseError("Header has no format line", source, line=line_no)
    return PlyHeader(encoding=encoding, elements=elements, body_offset=offset, body_line=line_no)


def read_body(data: bytes, header: PlyHeader, source: str | None = None) -> dict[str, list[list]]:
    """Return the rows of every element; a row holds one value per property (lists stay lists)."""
    if header.encoding == "ascii":
        return _read_ascii(data, header, source)
    return _read_binary(data, header, source)


def read_ply(data: bytes, source: str | None = None) -> tuple[PlyHeader, dict[str, list[list]]]:
    header = parse_header(data, source)
    return header, read_body(data, header, source)


def column(rows: list[list], element: PlyElement, name: str, source: str | None = None) -> np.ndarray:
    """One scalar property of an element as a float64 array."""
    names = element.property_names()
    if name not in names:
        raise ParseError(f"Element '{element.name}' has no property '{name}'", source)
    idx = names.index(name)
    return np.asarray([row[idx] for row in rows], dtype=np.float64)


# ---------------------------------------------------------------------------
# Internal helpers
# ---------------------------------------------------------------------------
def _parse_property(tokens: list[str], source, line_no: int) -> PlyProperty:
    if len(tokens) == 5 and tokens[1] == "list":
        count_code = PLY_TYPES.get(tokens[2])
        code = PLY_TYPES.get(tokens[3])
        if count_code is None or code is None:
            raise ParseError(f"Unknown list type '{tokens[2]} {tokens[3]}'", source, line=line_no)
        return PlyProperty(tokens[4], code, count_code)
    if len(tokens) == 3:
        code = PLY_TYPES.get(tokens[1])
        if code is None:
            raise ParseError(f"Unknown property type '{tokens[1]}'", source, line=line_no)
        return PlyProperty(tokens[2], code)
    raise ParseError("Malformed property line", source, line=line_no)


def _convert(token: str, code: str, source, line_no: int):
    try:
        return float(token) if code in "fd" else int(token)
    except ValueError:
        raise ParseError(f"Bad value '{token}'", source, line=line_no) from None


def _read_ascii(data: bytes, header: PlyHeader, source) -> dict[str, list[list]]:
    lines = data[header.body_offset:].decode("ascii", errors="replace").splitlines()
    cursor = 0
    out: dict[str, list[list]] = {}
    for element in header.elements:
        rows = []
        for _ in range(element.count):
            while cursor < len(lines) and not lines[cursor].strip():
                cursor += 1
            line_no = header.body_line + cursor + 1
            if cursor >= len(lines):
                raise ParseError(f"Unexpected end of file in element '{element.name}'", source, line=line_no)
            tokens = lines[cursor].split()
            cursor += 1
            row, pos = [], 0
            for prop in element.properties:
                if pos >= len(tokens):
                    raise ParseError(f"Too few values for '{element.name}'", source, line=line_no)
                if prop.is_list:
                    count = _convert(tokens[pos], prop.count_code, source, line_no)
                    items = tokens[pos + 1:pos + 1 + count]
                    if len(items) != count:
                        raise ParseError(f"List '{prop.name}' is truncated", source, line=line_no)
                    row.append([_convert(t, prop.code, source, line_no) for t in items])
                    pos += 1 + count
                else:
                    row.append(_convert(tokens[pos], prop.code, source, line_no))
                    pos += 1
            rows.append(row)
        out[element.name] = rows
    return out


def _read_binary(data: bytes, header: PlyHeader, source) -> dict[str, list[list]]:
    offset = header.body_offset
    out: dict[str, list[list]] = {}
    for element in header.elements:
        if element.properties and not any(p.is_list for p in element.properties):
            dtype = np.dtype([(f"f{i}", "<" + p.code) for i, p in enumerate(element.properties)])
            size = dtype.itemsize * element.count
            if offset + size > len(data):
                raise ParseError(f"Unexpected end of data in element '{element.name}'", source, offset=offset)
            block = np.frombuffer(data, dtype=dtype, count=element.count, offset=offset)
            out[element.name] = [list(row) for row in block.tolist()]
            offset += size
            continue

        rows = []
        try:
            for _ in range(element.count):
                row = []
                for prop in element.properties:
                    if prop.is_list:
                        (count,) = struct.unpack_from("<" + prop.count_code, data, offset)
                        offset += struct.calcsize(prop.count_code)
                        fmt = f"<{count}{prop.code}"
                        row.append(list(struct.unpack_from(fmt, data, offset)))
                        offset += struct.calcsize(fmt)
                    else:
                        (value,) = struct.unpack_from("<" + prop.code, data, offset)
                        offset += struct.calcsize(prop.code)
                        row.append(value)
                rows.append(row)
        except struct.error:
            raise ParseError(f"Unexpected end of data in element '{element.name}'", source, offset=offset) from None
        out[element.name] = rows
    return out
