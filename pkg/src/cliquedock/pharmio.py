"""Structure-file and pharmacophore-spec input.

Reads atom coordinates from fixed-column PDB text and pharmacophore
definitions from a small JSON format, and resolves them into typed,
positioned pharmacophore points (centroids for multi-atom features such
as aromatic rings).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import IO, Iterable, Sequence

import numpy as np

PHARMACOPHORE_KINDS = ("HD", "HA", "HP", "AR")
ROLES = ("ligand", "protein")

# 0-indexed column slices of the PDB ATOM/HETATM record (serial is
# columns 7-11 in the 1-indexed PDB sense, coordinates 31-54).
_SERIAL_COLS = slice(6, 11)
_X_COLS = slice(30, 38)
_Y_COLS = slice(38, 46)
_Z_COLS = slice(46, 54)
_NAME_COLS = slice(12, 16)


class PharmIOError(ValueError):
    """Malformed structure file or pharmacophore spec."""


@dataclass(frozen=True)
class AtomRecord:
    serial: int
    name: str
    position: np.ndarray  # shape (3,), Angstroms
    record_kind: str  # "ATOM" or "HETATM"


@dataclass(frozen=True)
class SpecPoint:
    """One entry of a pharmacophore spec: either an atom-serial list
    (resolved to the centroid) or an explicit coordinate."""

    label: str
    kind: str
    atoms: tuple[int, ...] | None = None
    coords: tuple[float, float, float] | None = None


@dataclass(frozen=True)
class PharmacophoreSpec:
    role: str
    points: tuple[SpecPoint, ...]


@dataclass(frozen=True)
class PharmacophorePoint:
    label: str
    kind: str
    position: np.ndarray  # shape (3,), Angstroms
    role: str


def _parse_field(raw: str, caster, line_no: int, cols: slice, what: str):
    text = raw.strip()
    try:
        return caster(text)
    except ValueError:
        raise PharmIOError(
            f"line {line_no}: malformed {what} field {text!r} "
            f"(columns {cols.start + 1}-{cols.stop})"
        ) from None


def parse_pdb_atoms(text: str | Iterable[str] | IO[str]) -> list[AtomRecord]:
    """Extract ATOM/HETATM records from PDB-format text.

    Only the serial number, atom name and x/y/z coordinates are read;
    every other line and column is ignored.  Raises PharmIOError on a
    malformed numeric field (naming the line and column range) or on a
    duplicate serial.
    """
    if isinstance(text, str):
        lines: Iterable[str] = text.splitlines()
    elif hasattr(text, "read"):
        lines = text.read().splitlines()
    else:
        lines = text

    atoms: list[AtomRecord] = []
    seen: set[int] = set()
    for line_no, line in enumerate(lines, start=1):
        if not (line.startswith("ATOM") or line.startswith("HETATM")):
            continue
        kind = "ATOM" if line.startswith("ATOM") else "HETATM"
        serial = _parse_field(line[_SERIAL_COLS], int, line_no, _SERIAL_COLS, "serial")
        x = _parse_field(line[_X_COLS], float, line_no, _X_COLS, "x coordinate")
        y = _parse_field(line[_Y_COLS], float, line_no, _Y_COLS, "y coordinate")
        z = _parse_field(line[_Z_COLS], float, line_no, _Z_COLS, "z coordinate")
        if serial in seen:
            raise PharmIOError(f"line {line_no}: duplicate atom serial {serial}")
        if not np.all(np.isfinite([x, y, z])):
            raise PharmIOError(f"line {line_no}: non-finite coordinate")
        seen.add(serial)
        pos = np.array([x, y, z], dtype=np.float64)
        pos.setflags(write=False)
        atoms.append(AtomRecord(serial, line[_NAME_COLS].strip(), pos, kind))
    return atoms


def parse_pharmacophore_spec(text: str | IO[str]) -> PharmacophoreSpec:
    """Parse the JSON pharmacophore-spec document.

    Format::

        {"role": "ligand"|"protein",
         "points": [{"label": str, "kind": "HD"|"HA"|"HP"|"AR",
                     "atoms": [serial, ...]}            # centroid of atoms
                    | {"label": ..., "kind": ..., "coords": [x, y, z]}]}
    """
    if hasattr(text, "read"):
        text = text.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PharmIOError(f"invalid JSON in pharmacophore spec: {exc}") from None

    role = doc.get("role")
    if role not in ROLES:
        raise PharmIOError(f"role must be one of {ROLES}, got {role!r}")

    points: list[SpecPoint] = []
    labels: set[str] = set()
    for entry in doc.get("points", []):
        label = entry.get("label")
        if not label or not isinstance(label, str):
            raise PharmIOError(f"point missing a string label: {entry!r}")
        if label in labels:
            raise PharmIOError(f"duplicate point label {label!r}")
        labels.add(label)
        kind = entry.get("kind")
        if kind not in PHARMACOPHORE_KINDS:
            raise PharmIOError(
                f"point {label!r}: unknown kind {kind!r}; "
                f"valid kinds are {', '.join(PHARMACOPHORE_KINDS)}"
            )
        has_atoms = "atoms" in entry
        has_coords = "coords" in entry
        if has_atoms == has_coords:
            raise PharmIOError(
                f"point {label!r} must have exactly one of 'atoms' or 'coords'"
            )
        if has_atoms:
            serials = tuple(int(s) for s in entry["atoms"])
            if not serials:
                raise PharmIOError(f"point {label!r}: empty atom-serial list")
            points.append(SpecPoint(label, kind, atoms=serials))
        else:
            coords = entry["coords"]
            if len(coords) != 3:
                raise PharmIOError(f"point {label!r}: coords must have 3 components")
            points.append(SpecPoint(label, kind, coords=tuple(float(c) for c in coords)))
    return PharmacophoreSpec(role=role, points=tuple(points))


def serialize_pharmacophore_spec(spec: PharmacophoreSpec) -> str:
    """Inverse of parse_pharmacophore_spec (round-trips exactly)."""
    points = []
    for p in spec.points:
        entry: dict = {"label": p.label, "kind": p.kind}
        if p.atoms is not None:
            entry["atoms"] = list(p.atoms)
        else:
            entry["coords"] = list(p.coords)
        points.append(entry)
    return json.dumps({"role": spec.role, "points": points}, indent=2)


def resolve_points(
    spec: PharmacophoreSpec, atoms: Sequence[AtomRecord]
) -> list[PharmacophorePoint]:
    """Turn a spec into positioned points against a parsed structure.

    Serial-list points become the unweighted centroid of the referenced
    atoms; explicit-coordinate points pass through unchanged (so fully
    synthetic inputs need no structure file at all).
    """
    by_serial = {a.serial: a for a in atoms}
    out: list[PharmacophorePoint] = []
    for p in spec.points:
        if p.coords is not None:
            pos = np.array(p.coords, dtype=np.float64)
        else:
            missing = [s for s in p.atoms if s not in by_serial]
            if missing:
                raise PharmIOError(
                    f"point {p.label!r} references missing atom serial {missing[0]}"
                )
            pos = np.mean([by_serial[s].position for s in p.atoms], axis=0)
        pos.setflags(write=False)
        out.append(PharmacophorePoint(p.label, p.kind, pos, spec.role))
    return out
