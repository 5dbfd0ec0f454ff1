"""Canonical JSON and markdown rendering of reports."""
from __future__ import annotations

import json
from typing import Any


def canonical_json(data: Any) -> str:
    """Sorted keys, fixed indentation, trailing newline; equal inputs give equal bytes."""
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _is_table(value) -> bool:
    return (isinstance(value, list) and value and all(isinstance(r, list) for r in value)
            and all(not isinstance(x, (dict, list)) for r in value for x in r))


def _scalar(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if v is None:
        return "–"
    if isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v):
        return ", ".join(map(str, v)) if v else "∅"
    return str(v)


def _render(key: str, value, depth: int, out: list[str]) -> None:
    if isinstance(value, dict):
        out.append(f"{'#' * min(depth, 6)} {key}")
        out.append("")
        simple = {k: v for k, v in value.items() if not isinstance(v, (dict, list)) or
                  (isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v))}
        for k in sorted(simple):
            out.append(f"- **{k}**: {_scalar(simple[k])}")
        if simple:
            out.append("")
        for k in sorted(set(value) - set(simple)):
            if depth >= 5:
                out.append(f"`{k}`:")
                out.append("")
                out.append("```json")
                out.append(canonical_json(value[k]).rstrip())
                out.append("```")
                out.append("")
            else:
                _render(k, value[k], depth + 1, out)
    elif _is_table(value):
        out.append(f"{'#' * min(depth, 6)} {key}")
        out.append("")
        width = max(len(r) for r in value)
        out.append("| " + " | ".join(str(i) for i in range(width)) + " |")
        out.append("|" + "---|" * width)
        for row in value:
            out.append("| " + " | ".join(_scalar(x) for x in row) + " |")
        out.append("")
    elif isinstance(value, list):
        out.append(f"{'#' * min(depth, 6)} {key}")
        out.append("")
        for i, item in enumerate(value):
            if isinstance(item, dict):
                _render(f"{key} [{i}]", item, depth + 1, out)
            else:
                out.append(f"- {_scalar(item)}")
        out.append("")
    else:
        out.append(f"- **{key}**: {_scalar(value)}")


def render_markdown(data: dict, title: str = "report") -> str:
    """Markdown view of a JSON report; tables for matrices, sections for nested objects."""
    out: list[str] = []
    _render(title, data, 1, out)
    return "\n".join(out).rstrip() + "\n"


def render(data: dict, fmt: str = "json", title: str = "report") -> str:
    if fmt == "md":
        return render_markdown(data, title)
    return canonical_json(data)
