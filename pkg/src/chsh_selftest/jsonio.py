"""JSON emission with explicit control over float precision.

The stdlib encoder always prints floats with repr; strategy files pin a
17-significant-digit decimal form (which round-trips doubles exactly)
and reports use 12 significant digits, so we emit the text ourselves.
Parsing uses the stdlib.
"""

from __future__ import annotations

import json


def _emit(obj, digits: int, indent: int, level: int, out: list) -> None:
    pad = " " * (indent * level)
    pad_in = " " * (indent * (level + 1))
    if isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif obj is None:
        out.append("null")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        if obj != obj or obj in (float("inf"), float("-inf")):
            raise ValueError(f"non-finite float {obj!r} in document")
        out.append(format(obj, f".{digits}g"))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        # short numeric lists stay on one line for readability
        flat = all(isinstance(x, (int, float, bool)) or x is None for x in obj)
        if flat:
            out.append("[")
            for i, x in enumerate(obj):
                if i:
                    out.append(", ")
                _emit(x, digits, indent, level, out)
            out.append("]")
        else:
            out.append("[\n")
            for i, x in enumerate(obj):
                out.append(pad_in)
                _emit(x, digits, indent, level + 1, out)
                out.append(",\n" if i + 1 < len(obj) else "\n")
            out.append(pad + "]")
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        items = list(obj.items())
        for i, (key, val) in enumerate(items):
            if not isinstance(key, str):
                raise TypeError(f"non-string key {key!r}")
            out.append(pad_in + json.dumps(key) + ": ")
            _emit(val, digits, indent, level + 1, out)
            out.append(",\n" if i + 1 < len(items) else "\n")
        out.append(pad + "}")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, float_digits: int = 17, indent: int = 2) -> str:
    """Serialize ``obj`` to JSON text with fixed float precision."""
    out: list = []
    _emit(obj, float_digits, indent, 0, out)
    out.append("\n")
    return "".join(out)


def loads(text: str):
    return json.loads(text)
