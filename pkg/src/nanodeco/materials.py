"""Material records and the material database.

Files are TOML with one table per material::

    [pyrolytic-graphite]
    chi_v = -4.5e-4
    epsilon = 12.0
    density = 2200.0
    note = "out-of-plane susceptibility"

A superconductor-like entry may set ``epsilon_infinite = true`` instead of a
numeric ``epsilon``; its electric Clausius-Mossotti factor is then exactly 1.
"""

from __future__ import annotations

import json
import logging
import math
import os
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover - exercised on 3.10 only
    import tomli as tomllib

from .errors import NotFound, ParseError, ValidationError

__all__ = [
    "Material",
    "MaterialDb",
    "builtin_db",
    "load_materials",
    "default_db",
    "ENV_VAR",
    "DIAMOND_DENSITY",
]

logger = logging.getLogger(__name__)

ENV_VAR = "DECO_MATERIALS_PATH"
DIAMOND_DENSITY = 3513.0  # kg/m^3
_KEYS = {"chi_v", "epsilon", "epsilon_infinite", "density", "note"}
_BARE_KEY = re.compile(r"^[A-Za-z0-9_-]+$")


@dataclass(frozen=True)
class Material:
    """Static, real material constants of a homogeneous sphere.

    ``chi_v`` is the volume magnetic susceptibility (mu = mu0 (1 + chi_v)),
    ``epsilon`` the relative dielectric constant, ``density`` in kg/m^3.
    """

    name: str
    chi_v: float
    epsilon: float = 1.0
    density: float | None = None
    epsilon_infinite: bool = False
    note: str = ""

    def __post_init__(self):
        if not isinstance(self.name, str) or not self.name.strip():
            raise ValidationError("material name must be a non-empty string", "name")
        for fname in ("chi_v", "epsilon"):
            v = getattr(self, fname)
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ValidationError(f"{self.name}: {fname} must be a finite number, got {v!r}", fname)
            object.__setattr__(self, fname, float(v))
        if self.chi_v == -3.0:
            raise ValidationError(f"{self.name}: chi_v = -3 is the Clausius-Mossotti pole", "chi_v")
        if not self.epsilon_infinite and self.epsilon == -2.0:
            raise ValidationError(f"{self.name}: epsilon = -2 is the Clausius-Mossotti pole", "epsilon")
        if self.density is not None:
            d = self.density
            if isinstance(d, bool) or not isinstance(d, (int, float)) or not (math.isfinite(d) and d > 0):
                raise ValidationError(f"{self.name}: density must be positive, got {d!r}", "density")
            object.__setattr__(self, "density", float(d))
        object.__setattr__(self, "epsilon_infinite", bool(self.epsilon_infinite))

    @property
    def magnetic_factor(self) -> float:
        """chi_v / (3 + chi_v)."""
        return self.chi_v / (3.0 + self.chi_v)

    @property
    def electric_factor(self) -> float:
        """(eps - 1)/(eps + 2); exactly 1 for ``epsilon_infinite``."""
        if self.epsilon_infinite:
            return 1.0
        return (self.epsilon - 1.0) / (self.epsilon + 2.0)

    def to_table(self) -> dict:
        out: dict = {"chi_v": self.chi_v}
        if self.epsilon_infinite:
            out["epsilon_infinite"] = True
        else:
            out["epsilon"] = self.epsilon
        if self.density is not None:
            out["density"] = self.density
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class MaterialDb:
    """Case-insensitive name -> Material mapping with a provenance note per entry."""

    _entries: dict[str, Material] = field(default_factory=dict)
    _provenance: dict[str, str] = field(default_factory=dict)

    @staticmethod
    def _key(name: str) -> str:
        return name.strip().lower()

    def add(self, mat: Material, provenance: str = "") -> None:
        key = self._key(mat.name)
        self._entries[key] = mat
        self._provenance[key] = provenance

    def get(self, name: str) -> Material:
        try:
            return self._entries[self._key(name)]
        except KeyError:
            raise NotFound(f"unknown material {name!r}; known: {', '.join(self.names())}") from None

    __getitem__ = get

    def provenance(self, name: str) -> str:
        self.get(name)
        return self._provenance[self._key(name)]

    def names(self) -> list[str]:
        return sorted(m.name for m in self._entries.values())

    def __contains__(self, name) -> bool:
        return isinstance(name, str) and self._key(name) in self._entries

    def __iter__(self):
        return iter(sorted(self._entries.values(), key=lambda m: m.name.lower()))

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MaterialDb):
            return NotImplemented
        return self._entries == other._entries

    def copy(self) -> MaterialDb:
        return MaterialDb(dict(self._entries), dict(self._provenance))

    def to_toml(self) -> str:
        """Serialize every entry as TOML tables (loadable by :func:`load_materials`)."""
        chunks = []
        for mat in self:
            name = mat.name if _BARE_KEY.match(mat.name) else json.dumps(mat.name)
            lines = [f"[{name}]"]
            for k, v in mat.to_table().items():
                if isinstance(v, bool):
                    lines.append(f"{k} = {'true' if v else 'false'}")
                elif isinstance(v, float):
                    lines.append(f"{k} = {v!r}")
                else:
                    lines.append(f"{k} = {json.dumps(v, ensure_ascii=False)}")
            chunks.append("\n".join(lines))
        return "\n\n".join(chunks) + "\n"


def builtin_db() -> MaterialDb:
    """Diamond, an ideal superconductor and vacuum."""
    db = MaterialDb()
    db.add(
        Material(
            "diamond",
            chi_v=-2.2e-5,
            epsilon=5.7,
            density=DIAMOND_DENSITY,
            note="density is the standard bulk value",
        ),
        "builtin",
    )
    db.add(
        Material(
            "superconductor",
            chi_v=-1.0,
            epsilon_infinite=True,
            note="perfect diamagnet; eps >> 1 so (eps-1)/(eps+2) = 1",
        ),
        "builtin",
    )
    db.add(Material("vacuum", chi_v=0.0, epsilon=1.0, note="no response"), "builtin")
    return db


def _decode_line(exc: Exception) -> int | None:
    line = getattr(exc, "lineno", None)
    if line is None:
        m = re.search(r"line (\d+)", str(exc))
        line = int(m.group(1)) if m else None
    return line


def _table_line(text: str, name: str) -> int | None:
    for i, raw in enumerate(text.splitlines(), start=1):
        s = raw.strip()
        if s.startswith("[") and s.strip("[] \"'") == name:
            return i
    return None


def parse_materials(text: str, source: str = "<string>") -> MaterialDb:
    """Parse TOML material tables into a fresh database (no builtins)."""
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ParseError(f"{source}: {exc}", _decode_line(exc)) from exc
    db = MaterialDb()
    for name, table in doc.items():
        line = _table_line(text, name)
        where = f"{source}" + (f":{line}" if line else "")
        if not isinstance(table, dict):
            raise ParseError(f"{source}: top-level key {name!r} is not a material table", line)
        unknown = set(table) - _KEYS
        if unknown:
            raise ValidationError(f"{where}: {name}: unknown keys {sorted(unknown)}", sorted(unknown)[0])
        if "chi_v" not in table:
            raise ValidationError(f"{where}: {name}: missing chi_v", "chi_v")
        inf = table.get("epsilon_infinite", False)
        if not isinstance(inf, bool):
            raise ValidationError(f"{where}: {name}: epsilon_infinite must be a boolean", "epsilon_infinite")
        if "epsilon" not in table and not inf:
            raise ValidationError(f"{where}: {name}: missing epsilon", "epsilon")
        if name in db:
            raise ValidationError(f"{where}: duplicate material name {name!r} (case-insensitive)", "name")
        try:
            mat = Material(
                name,
                chi_v=table["chi_v"],
                epsilon=table.get("epsilon", 1.0),
                density=table.get("density"),
                epsilon_infinite=inf,
                note=str(table.get("note", "")),
            )
        except ValidationError as exc:
            raise ValidationError(f"{where}: {exc}", exc.field) from None
        db.add(mat, source)
    return db


def load_materials(path, base: MaterialDb | None = None) -> MaterialDb:
    """Load a material file and merge it over ``base`` (builtins by default).

    Entries from the file replace same-named ones (case-insensitive) with an
    INFO log line.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    loaded = parse_materials(text, str(path))
    db = (base if base is not None else builtin_db()).copy()
    for mat in loaded:
        if mat.name in db:
            logger.info("material %r from %s overrides existing entry", mat.name, path)
        db.add(mat, str(path))
    return db


def default_db(extra_path=None) -> MaterialDb:
    """Builtins, then every file listed in ``$DECO_MATERIALS_PATH``, then ``extra_path``."""
    db = builtin_db()
    env = os.environ.get(ENV_VAR, "")
    for p in filter(None, env.split(os.pathsep)):
        db = load_materials(p, db)
    if extra_path:
        db = load_materials(extra_path, db)
    return db
