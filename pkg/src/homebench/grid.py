"""Integer lattice geometry.

All positions live on a 0.05 m lattice and are stored as integer cell
coordinates (gx, gz); meters appear only at serialization boundaries.
Heading 0 faces +z and grows clockwise, so the direction vector of a heading
h is (sin h, cos h).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

CELL = 0.05

# N(+z), E(+x), S(-z), W(-x) -- indexed by quarter-turn count from heading 0
CARDINAL_VECTORS: tuple[tuple[int, int], ...] = ((0, 1), (1, 0), (0, -1), (-1, 0))

HEADINGS = tuple(range(0, 360, 30))
PITCHES = (-60, -30, 0, 30, 60)


def meters(g: int) -> float:
    return round(g * CELL, 2)


def to_cells(x: float) -> int:
    g = round(x / CELL)
    if abs(g * CELL - x) > 1e-9:
        raise ValueError(f"{x} is not a multiple of the {CELL} m lattice")
    return g


def snap_cardinal(deg: int) -> tuple[int, int]:
    """Unit lattice step along the cardinal direction nearest to `deg`.

    Headings are multiples of 30, so the nearest cardinal is never ambiguous.
    """
    return CARDINAL_VECTORS[int((deg % 360) / 90 + 0.5) % 4]


def heading_vector(deg: int) -> tuple[float, float]:
    rad = math.radians(deg)
    return (math.sin(rad), math.cos(rad))


def cell_distance(a: tuple[int, int], b: tuple[int, int]) -> float:
    """Euclidean distance in meters between two lattice points."""
    return math.hypot(a[0] - b[0], a[1] - b[1]) * CELL


def nearest_heading(dx: int, dz: int) -> int:
    """The 30-degree heading closest to the direction of (dx, dz)."""
    ang = math.degrees(math.atan2(dx, dz)) % 360
    return round(ang / 30) * 30 % 360


@dataclass(frozen=True)
class Pose:
    gx: int
    gz: int
    heading: int = 0
    pitch: int = 0

    def __post_init__(self):
        if self.heading not in HEADINGS:
            raise ValueError(f"heading {self.heading} not a multiple of 30 in [0,330]")
        if self.pitch not in PITCHES:
            raise ValueError(f"pitch {self.pitch} not a multiple of 30 in [-60,60]")

    @property
    def x(self) -> float:
        return meters(self.gx)

    @property
    def z(self) -> float:
        return meters(self.gz)

    @property
    def cell(self) -> tuple[int, int]:
        return (self.gx, self.gz)

    @classmethod
    def at(cls, x: float, z: float, heading: int = 0, pitch: int = 0) -> "Pose":
        return cls(to_cells(x), to_cells(z), heading, pitch)

    def moved(self, dgx: int, dgz: int) -> "Pose":
        return Pose(self.gx + dgx, self.gz + dgz, self.heading, self.pitch)

    def rotated(self, degrees: int) -> "Pose":
        return Pose(self.gx, self.gz, (self.heading + degrees) % 360, self.pitch)

    def tilted(self, degrees: int) -> "Pose":
        return Pose(self.gx, self.gz, self.heading, self.pitch + degrees)

    def to_dict(self) -> dict:
        return {"x": self.x, "z": self.z, "heading": self.heading, "pitch": self.pitch}

    @classmethod
    def from_dict(cls, d: dict) -> "Pose":
        return cls.at(d["x"], d["z"], d["heading"], d["pitch"])
