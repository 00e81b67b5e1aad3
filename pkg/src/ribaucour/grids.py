"""Rectangular chart domains and sample grids."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["Domain"]


@dataclass(frozen=True)
class Domain:
    """Axis-aligned rectangle [u0, u1] x [v0, v1] in the chart plane."""

    u0: float
    u1: float
    v0: float
    v1: float

    def __post_init__(self):
        if not (self.u1 > self.u0 and self.v1 > self.v0):
            raise ValueError(f"empty domain {self}")

    def spacing(self, nu: int, nv: int) -> tuple[float, float]:
        return (self.u1 - self.u0) / (nu - 1), (self.v1 - self.v0) / (nv - 1)

    def mesh(self, nu: int, nv: int):
        """Return (U, V, Z) sample arrays of shape (nu, nv), row-major in u:
        ``U[i, j] = u_i``, ``Z = U + iV``."""
        if nu < 2 or nv < 2:
            raise ValueError("need at least 2 samples per direction")
        u = np.linspace(self.u0, self.u1, nu)
        v = np.linspace(self.v0, self.v1, nv)
        U, V = np.meshgrid(u, v, indexing="ij")
        return U, V, U + 1j * V

    @staticmethod
    def parse(text: str) -> "Domain":
        """Parse 'u0:u1:v0:v1'."""
        parts = text.split(":")
        if len(parts) != 4:
            raise ValueError(f"domain must be u0:u1:v0:v1, got {text!r}")
        return Domain(*(float(p) for p in parts))
