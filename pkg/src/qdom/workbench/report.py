"""Rendering ``(key, value)`` records as CI-friendly lines or a human table."""

from __future__ import annotations

__all__ = ["emit_report", "failures", "exit_status"]

FORMATS = ("human", "records")


def failures(records) -> list[tuple[str, str]]:
    return [(k, v) for k, v in records if v == "FAIL"]


def exit_status(records) -> int:
    """0 when no record reads ``FAIL``; informational values never count."""
    return 1 if failures(records) else 0


def emit_report(records, fmt: str = "records") -> str:
    """Sort by key and render; ``records`` output is byte-stable for equal input."""
    if fmt not in FORMATS:
        raise ValueError(f"unknown report format {fmt!r}")
    rows = sorted(records)
    if fmt == "records":
        return "".join(f"{k}={v}\n" for k, v in rows)
    width = max((len(k) for k, _ in rows), default=0)
    lines = [f"{k.ljust(width)}  {v}" for k, v in rows]
    checks = sum(1 for _, v in rows if v in ("PASS", "FAIL"))
    failed = len(failures(rows))
    lines.append("")
    lines.append(f"{checks} checks, {failed} failed" if checks else "no checks")
    return "\n".join(lines) + "\n"
