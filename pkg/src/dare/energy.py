"""First-order radio energy model.

Transmission of ``k`` bits over ``d`` feet costs
``E_TXelec*k + E_amp(n)*k*d**n``; reception costs ``E_RXelec*k``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

import numpy as np

from .core import Node


class UnknownExponentError(KeyError):
    """The requested path-loss exponent has no amplifier constant."""


def _default_amp_table():
    return {3.38: 1.97e-9, 5.9: 7.99e-9}


@dataclass(frozen=True)
class RadioParams:
    """Radio constants in J/bit; ``amp_table`` maps exponent to E_amp(n)."""

    e_tx_elec: float = 16.7e-9
    e_rx_elec: float = 36.1e-9
    amp_table: Mapping[float, float] = field(default_factory=_default_amp_table)
    default_n: float = 3.38

    def __post_init__(self):
        if self.e_tx_elec <= 0 or self.e_rx_elec <= 0:
            raise ValueError("circuitry energies must be strictly positive")
        if any(v <= 0 for v in self.amp_table.values()):
            raise ValueError("amplifier energies must be strictly positive")
        if self.default_n not in self.amp_table:
            raise UnknownExponentError(self.default_n)

    def amp(self, n: Optional[float] = None) -> float:
        n = self.default_n if n is None else n
        try:
            return self.amp_table[n]
        except KeyError:
            raise UnknownExponentError(n) from None


@dataclass(frozen=True)
class EnergyReport:
    """One debit actually applied to a finite-energy node."""

    node: int
    round: int
    tx_energy: float = 0.0
    rx_energy: float = 0.0

    @property
    def total(self) -> float:
        return self.tx_energy + self.rx_energy


def _negative(x) -> bool:
    if isinstance(x, (int, float)):
        return x < 0
    return bool(np.any(np.asarray(x) < 0))


def tx_energy(params: RadioParams, k, d, n: Optional[float] = None):
    """Energy to send ``k`` bits over distance ``d``.

    ``d`` may be a scalar or a numpy array of distances.
    """
    e_amp = params.amp(n)
    n = params.default_n if n is None else n
    if _negative(k) or _negative(d):
        raise ValueError("bit count and distance must be non-negative")
    return params.e_tx_elec * k + e_amp * k * d**n


def rx_energy(params: RadioParams, k):
    if _negative(k):
        raise ValueError("bit count must be non-negative")
    return params.e_rx_elec * k


def debit(node: Node, amount: float) -> Node:
    """Charge ``amount`` joules to ``node`` in place and return it.

    Unlimited nodes are untouched. A node that cannot cover the amount is
    marked dead and keeps its remaining energy.
    """
    if amount < 0:
        raise ValueError(f"debit amount must be non-negative, got {amount}")
    if node.unlimited or not node.alive:
        return node
    if node.energy >= amount:
        node.energy -= amount
    else:
        node.alive = False
    return node
