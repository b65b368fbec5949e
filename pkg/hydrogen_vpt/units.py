"""
Conversions between natural atomic units and physical units.

Natural units set hbar = e^2 = k_B = c = M = 1. Energies are then measured in
2 Ryd, temperatures in 2 Ryd / k_B, lengths in Bohr radii and magnetic fields
in the atomic field strength B0. The constants carry the four significant
digits quoted for them; no higher precision is claimed.
"""

from __future__ import annotations

import math
import re
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

from .errors import DomainError

Kind = Literal["energy", "temperature", "length", "field"]


class UnitConstants(BaseModel):
    model_config = ConfigDict(frozen=True)

    energy_unit_eV: float = Field(default=27.21, gt=0)
    temperature_unit_K: float = Field(default=3.16e5, gt=0)
    length_unit_cm: float = Field(default=0.53e-8, gt=0)
    field_unit_T: float = Field(default=2.35e5, gt=0)

    @property
    def field_unit_G(self) -> float:
        return self.field_unit_T * 1e4


UNITS = UnitConstants()


class PhysicalQuantity(BaseModel):
    model_config = ConfigDict(frozen=True)

    value: float
    unit: str

    def __str__(self) -> str:
        return f"{self.value:.6g} {self.unit}"


# (kind, unit label) -> size of one natural unit in that physical unit
def _scale_table(constants: UnitConstants) -> dict[tuple[str, str], float]:
    return {
        ("energy", "eV"): constants.energy_unit_eV,
        ("temperature", "K"): constants.temperature_unit_K,
        ("length", "cm"): constants.length_unit_cm,
        ("field", "T"): constants.field_unit_T,
        ("field", "G"): constants.field_unit_G,
    }


_DEFAULT_UNIT = {"energy": "eV", "temperature": "K", "length": "cm", "field": "T"}
_KIND_BY_SUFFIX = {"eV": "energy", "K": "temperature", "cm": "length", "T": "field", "G": "field"}


def _scale(kind: str, unit: str | None, constants: UnitConstants) -> tuple[float, str]:
    if kind not in _DEFAULT_UNIT:
        raise DomainError.unknown_kind(kind, _DEFAULT_UNIT)
    unit = unit or _DEFAULT_UNIT[kind]
    table = _scale_table(constants)
    if (kind, unit) not in table:
        allowed = [u for (k, u) in table if k == kind]
        raise DomainError.invalid_argument("unit", f"'{unit}' is not a {kind} unit; use one of {allowed}")
    return table[(kind, unit)], unit


def natural_to_physical(
    value: float,
    kind: str,
    unit: str | None = None,
    constants: UnitConstants = UNITS,
) -> PhysicalQuantity:
    """Express a natural-unit ``value`` of the given ``kind`` in physical units.

    Fields default to Tesla; pass ``unit="G"`` for Gauss.
    """
    scale, unit = _scale(kind, unit, constants)
    return PhysicalQuantity(value=value * scale, unit=unit)


def physical_to_natural(
    value: float | PhysicalQuantity,
    kind: str,
    unit: str | None = None,
    constants: UnitConstants = UNITS,
) -> float:
    """Inverse of :func:`natural_to_physical`."""
    if isinstance(value, PhysicalQuantity):
        value, unit = value.value, value.unit
    if not math.isfinite(value):
        raise DomainError.invalid_argument("value", "must be finite", value)
    scale, _ = _scale(kind, unit, constants)
    return value / scale


_QUANTITY_RE = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(eV|K|cm|T|G)?\s*$")


def parse_quantity(text: str, kind: str | None = None, constants: UnitConstants = UNITS) -> float:
    """
    Parse a number with an optional unit suffix into natural units.

    ``"2.35e14G"`` gives 1e5, ``"0.5"`` is taken to be natural units already.
    When ``kind`` is given the suffix must belong to it.
    """
    match = _QUANTITY_RE.match(text)
    if match is None:
        raise DomainError.invalid_argument("quantity", f"cannot parse '{text}'")
    number, suffix = float(match.group(1)), match.group(2)
    if suffix is None:
        return number
    suffix_kind = _KIND_BY_SUFFIX[suffix]
    if kind is not None and suffix_kind != kind:
        raise DomainError.invalid_argument("quantity", f"unit '{suffix}' is a {suffix_kind} unit, expected {kind}")
    return physical_to_natural(number, suffix_kind, suffix, constants)
