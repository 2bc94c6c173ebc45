"""Versioned key=value payload encoding for the service API.

Payloads are UTF-8 text.  Line one is ``#corpus-tutor v1 kind=<kind>``;
every following line is ``path=value`` where the path is dot-separated and
numeric segments index lists (``rows.0.label=Way0``).  Values are raw
strings up to the end of the line; None encodes as ``-``; booleans as
``0``/``1``.  Keys are emitted sorted, so equal payloads are byte-equal.
"""

from __future__ import annotations

from typing import Any, Union

MAGIC = "#corpus-tutor v1"

Node = Union[dict, list, str]


def _flatten(prefix: str, value: Any, out: list[tuple[str, str]]) -> None:
    if isinstance(value, dict):
        for key in value:
            sub = f"{prefix}.{key}" if prefix else str(key)
            _flatten(sub, value[key], out)
    elif isinstance(value, (list, tuple)):
        for i, item in enumerate(value):
            _flatten(f"{prefix}.{i}" if prefix else str(i), item, out)
    else:
        if value is None:
            text = "-"
        elif isinstance(value, bool):
            text = "1" if value else "0"
        else:
            text = str(value)
        if "\n" in text:
            raise ValueError(f"payload value for {prefix!r} contains a newline")
        out.append((prefix, text))


def encode(kind: str, data: dict) -> str:
    pairs: list[tuple[str, str]] = []
    _flatten("", data, pairs)
    pairs.sort()
    lines = [f"{MAGIC} kind={kind}"]
    lines.extend(f"{key}={value}" for key, value in pairs)
    return "\n".join(lines) + "\n"


def _insert(root: dict, path: list[str], value: str) -> None:
    node = root
    for i, segment in enumerate(path[:-1]):
        node = node.setdefault(segment, {})
        if not isinstance(node, dict):
            raise ValueError(f"path conflict at {'.'.join(path[: i + 1])}")
    node[path[-1]] = value


def _listify(node: Node) -> Node:
    """Turn {0: ..., 1: ...} dicts into lists, recursively."""
    if not isinstance(node, dict):
        return node
    converted = {key: _listify(value) for key, value in node.items()}
    keys = list(converted)
    if keys and all(k.isdigit() for k in keys):
        ordered = sorted(keys, key=int)
        if [int(k) for k in ordered] == list(range(len(ordered))):
            return [converted[k] for k in ordered]
    return converted


def decode(text: str) -> tuple[str, Node]:
    """Parse a payload into (kind, nested dicts/lists of strings)."""
    lines = text.splitlines()
    if not lines or not lines[0].startswith(MAGIC + " kind="):
        raise ValueError("not a corpus-tutor payload")
    kind = lines[0][len(MAGIC + " kind=") :]
    root: dict = {}
    for raw in lines[1:]:
        if not raw:
            continue
        key, sep, value = raw.partition("=")
        if not sep:
            raise ValueError(f"bad payload line {raw!r}")
        _insert(root, key.split("."), value)
    return kind, _listify(root)
