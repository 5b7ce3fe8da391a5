"""
Gate vocabularies standing in for individual SDKs.

A dialect is loaded from a JSON manifest ``{"name": ..., "gates": [...]}``.
Four manifests ship next to this module: avalon, borealis, cascade, dovetail.
Extra manifest directories can be listed in ``QXPILE_DIALECT_PATH``
(``os.pathsep``-separated) or passed explicitly as search paths.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable

from ..ir import KINDS, GateKind

from .rules import RewriteRule, RuleDatabase, TemplateGate, builtin_rules  # noqa: F401

__all__ = [
    "HUB_BASIS",
    "Dialect",
    "ManifestError",
    "load_dialect",
    "load_dialect_file",
    "builtin_dialects",
    "find_dialect",
    "supports",
    "RewriteRule",
    "RuleDatabase",
    "TemplateGate",
    "builtin_rules",
]

ENV_VAR = "QXPILE_DIALECT_PATH"
BUILTIN_NAMES = ("avalon", "borealis", "cascade", "dovetail")

HUB_BASIS = frozenset(KINDS[n] for n in ("rx", "ry", "rz", "cx"))


class ManifestError(ValueError):
    """Bad dialect manifest. ``kind`` is ``unknown_gate``, ``missing_hub_basis`` or ``malformed``."""

    def __init__(self, kind: str, message: str):
        super().__init__(f"{kind}: {message}")
        self.kind = kind


@dataclass(frozen=True)
class Dialect:
    name: str
    supported: frozenset[GateKind]

    def __contains__(self, kind) -> bool:
        if isinstance(kind, str):
            kind = KINDS.get(kind)
        return kind in self.supported

    def __repr__(self) -> str:
        return f"Dialect({self.name!r}, {len(self.supported)} kinds)"

    @property
    def kind_names(self) -> list[str]:
        """Supported kinds in canonical vocabulary order."""
        return [k.name for k in KINDS.values() if k in self.supported]


def supports(d: Dialect, k: GateKind | str) -> bool:
    return k in d


def load_dialect(manifest_text: str) -> Dialect:
    try:
        data = json.loads(manifest_text)
    except json.JSONDecodeError as e:
        raise ManifestError("malformed", f"invalid JSON: {e}") from None
    if not isinstance(data, dict):
        raise ManifestError("malformed", "manifest must be a JSON object")
    name, gates = data.get("name"), data.get("gates")
    if not isinstance(name, str) or not name:
        raise ManifestError("malformed", "'name' must be a non-empty string")
    if not isinstance(gates, list) or not all(isinstance(g, str) for g in gates):
        raise ManifestError("malformed", "'gates' must be a list of strings")
    unknown = [g for g in gates if g not in KINDS]
    if unknown:
        raise ManifestError("unknown_gate", f"{name}: unknown gate kind(s) {unknown}")
    supported = frozenset(KINDS[g] for g in gates)
    missing = sorted(k.name for k in HUB_BASIS - supported)
    if missing:
        raise ManifestError("missing_hub_basis", f"{name}: lacks {missing}")
    return Dialect(name, supported)


def load_dialect_file(path: str | os.PathLike) -> Dialect:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ManifestError("malformed", f"cannot read {path}: {e}") from None
    return load_dialect(text)


@lru_cache(maxsize=None)
def _load_builtin(name: str) -> Dialect:
    return load_dialect(resources.files(__name__).joinpath(f"{name}.json").read_text(encoding="utf-8"))


def builtin_dialects() -> dict[str, Dialect]:
    return {name: _load_builtin(name) for name in BUILTIN_NAMES}


def _search_dirs(extra: Iterable[str | os.PathLike] = ()) -> list[Path]:
    dirs = [Path(p) for p in extra]
    env = os.environ.get(ENV_VAR, "")
    dirs += [Path(p) for p in env.split(os.pathsep) if p]
    return dirs


def find_dialect(name_or_path: str, search_paths: Iterable[str | os.PathLike] = ()) -> Dialect:
    """Resolve a dialect by manifest path, by ``<name>.json`` in the search paths, or by builtin name.

    Search paths take precedence over builtins so a user manifest can shadow one.
    """
    p = Path(name_or_path)
    if p.suffix == ".json" and p.is_file():
        return load_dialect_file(p)
    for d in _search_dirs(search_paths):
        candidate = d / f"{name_or_path}.json"
        if candidate.is_file():
            return load_dialect_file(candidate)
    builtins = builtin_dialects()
    if name_or_path in builtins:
        return builtins[name_or_path]
    raise ManifestError("malformed", f"no dialect named {name_or_path!r}")
