"""Run configuration schema shared by every command."""

from pathlib import Path

from pydantic import BaseModel, Field, field_validator, model_validator

from app.core.config import settings
from app.models.field import is_prime
from app.models.superalgebra import AlgebraParams


class RunConfig(BaseModel):
    """Schema for the global command-line options, validated before any computation."""

    n: int = 3
    p: int = 5
    t: tuple[int, ...] = (1, 1, 1)
    seed: int = Field(default_factory=lambda: settings.DEFAULT_SEED)
    out: Path | None = None
    verbosity: int = 0

    @field_validator("t", mode="before")
    @classmethod
    def parse_t(cls, value: object) -> object:
        """Accept the comma-separated form used on the command line."""
        if isinstance(value, str):
            try:
                return tuple(int(part) for part in value.split(",") if part.strip())
            except ValueError as exc:
                raise ValueError("t must be comma-separated integers, e.g. 1,1,1") from exc
        return value

    @field_validator("p")
    @classmethod
    def check_p(cls, value: int) -> int:
        if not is_prime(value) or value <= 3:
            raise ValueError("p must be an odd prime > 3")
        return value

    @field_validator("n")
    @classmethod
    def check_n(cls, value: int) -> int:
        if value < 3:
            raise ValueError("n must be at least 3")
        return value

    @model_validator(mode="after")
    def check_t(self) -> "RunConfig":
        if len(self.t) != self.n:
            raise ValueError(f"t must have exactly n={self.n} entries")
        if any(ti < 1 for ti in self.t):
            raise ValueError("every t_i must be a positive integer")
        return self

    def params(self) -> AlgebraParams:
        return AlgebraParams.create(self.n, self.p, self.t)
