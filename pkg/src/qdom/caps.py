"""Resource caps for the exhaustive searches."""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

from .errors import QdomError


@dataclass(frozen=True)
class Caps:
    objects: int = 6          # objects of user-supplied / gallery base categories
    quantale: int = 6         # elements of user-supplied quantales
    columns: int = 20_000     # results of any single functor/module enumeration
    downsets: int = 1 << 16   # down-sets visited by totally_below

    @classmethod
    def from_env(cls, env=None) -> "Caps":
        """Defaults overridden by ``QDOM_CAPS="columns=50000,objects=7"``."""
        env = os.environ if env is None else env
        spec = env.get("QDOM_CAPS", "").strip()
        return cls().override_from_string(spec) if spec else cls()

    def override_from_string(self, spec: str) -> "Caps":
        names = {f.name for f in fields(self)}
        changes = {}
        for item in spec.split(","):
            item = item.strip()
            if not item:
                continue
            key, sep, value = item.partition("=")
            key = key.strip()
            if not sep or key not in names:
                raise QdomError(f"bad cap setting {item!r}; known caps: {sorted(names)}")
            try:
                changes[key] = int(value)
            except ValueError:
                raise QdomError(f"cap {key} needs an integer, got {value!r}") from None
        return replace(self, **changes)


DEFAULT_CAPS = Caps()
