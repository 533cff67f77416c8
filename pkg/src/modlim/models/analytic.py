import math

from pydantic import BaseModel, ConfigDict, model_validator

from modlim.core.errors import DegenerateQuadruple, InvalidQuadruple

# angles closer than this on the circle count as coincident
ANGLE_TOL = 1e-12


class HalfPlaneTriple(BaseModel):
    """Three real boundary points w1 < w2 < w3 of the upper half-plane; the fourth is oo."""

    model_config = ConfigDict(frozen=True)

    w1: float
    w2: float
    w3: float

    @model_validator(mode="after")
    def _check_order(self) -> "HalfPlaneTriple":
        ws = (self.w1, self.w2, self.w3)
        if not all(math.isfinite(w) for w in ws):
            raise DegenerateQuadruple(f"triple {ws} must be finite")
        if not self.w1 < self.w2 < self.w3:
            raise DegenerateQuadruple(f"triple needs w1 < w2 < w3, got {ws}")
        return self


class CircleQuadruple(BaseModel):
    """Four points of the unit circle given by their angles in radians, counterclockwise."""

    model_config = ConfigDict(frozen=True)

    a: float
    b: float
    c: float
    d: float

    @model_validator(mode="after")
    def _check_order(self) -> "CircleQuadruple":
        offsets = [
            (t - self.a) % (2 * math.pi) for t in (self.b, self.c, self.d)
        ]
        gaps = [offsets[0], offsets[1] - offsets[0], offsets[2] - offsets[1]]
        gaps.append(2 * math.pi - offsets[2])
        if min(abs(g) for g in gaps) <= ANGLE_TOL:
            raise DegenerateQuadruple(
                f"points of ({self.a}, {self.b}, {self.c}, {self.d}) coincide"
            )
        if not offsets[0] < offsets[1] < offsets[2]:
            raise InvalidQuadruple(
                f"angles ({self.a}, {self.b}, {self.c}, {self.d}) are not in "
                "counterclockwise order"
            )
        return self

    def points(self) -> tuple:
        return tuple(complex(math.cos(t), math.sin(t)) for t in (self.a, self.b, self.c, self.d))


class LiouvilleMass(BaseModel):
    """Liouville measure of a box of geodesic endpoints (log of a cross ratio)."""

    model_config = ConfigDict(frozen=True)

    value: float
