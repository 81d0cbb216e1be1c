from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class GridSpec:
    """Deterministic 1-D evaluation grid."""

    start: float
    end: float
    count: int
    spacing: str = "linear"

    def __post_init__(self):
        if self.count < 1:
            raise DomainError("grid count must be positive")
        if self.spacing not in ("linear", "log"):
            raise DomainError(f"unknown grid spacing {self.spacing!r}")
        if self.count > 1 and not self.end > self.start:
            raise DomainError("grid end must exceed start")
        if self.spacing == "log" and self.start <= 0:
            raise DomainError("log grid needs a positive start")

    def points(self) -> np.ndarray:
        if self.count == 1:
            return np.array([float(self.start)])
        if self.spacing == "log":
            return np.geomspace(self.start, self.end, self.count)
        return np.linspace(self.start, self.end, self.count)

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        """Parse ``start:end:count[:log|linear]``."""
        parts = text.split(":")
        if len(parts) not in (3, 4):
            raise DomainError(f"grid must look like start:end:count[:log], got {text!r}")
        try:
            start, end, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError as exc:
            raise DomainError(f"bad grid {text!r}: {exc}") from None
        spacing = parts[3] if len(parts) == 4 else "linear"
        return cls(start, end, count, spacing)

    def to_dict(self) -> dict:
        return {"start": self.start, "end": self.end, "count": self.count, "spacing": self.spacing}
