import os

from pydantic import BaseModel, Field, field_validator

from vm.machine import QUIET_FRACTION
from vm.oracle import Oracle, parse_oracle

DEFAULT_BUDGET = 10_000
DEFAULT_SEED = 20240611
BUDGET_ENV = "LIMITBENCH_BUDGET"


def default_budget() -> int:
    """환경 변수(.env 포함) LIMITBENCH_BUDGET, 없으면 DEFAULT_BUDGET"""
    return int(os.getenv(BUDGET_ENV, DEFAULT_BUDGET))


class RunConfig(BaseModel):
    budget: int = Field(default_factory=default_budget, gt=0, description="step budget per run")
    prefix: int = Field(default=8, gt=0, description="number of output cells to print")
    precision: int = Field(default=6, ge=0, description="k in the 2^-k output precision")
    oracle: str = Field(default="whitelist:universe.json", description="step:N or whitelist:FILE")
    seed: int = Field(default=DEFAULT_SEED, ge=0, description="seed of randomized corpora")
    quiet_fraction: float = Field(default=QUIET_FRACTION, gt=0, le=1, description="quiet window share of the budget")

    @field_validator("oracle")
    @classmethod
    def _check_oracle(cls, value: str) -> str:
        mode, _, arg = value.partition(":")
        if not (mode == "step" and arg.isdigit()) and not (mode == "whitelist" and arg):
            raise ValueError(f"oracle must be step:N or whitelist:FILE, not {value!r}")
        return value

    def build_oracle(self) -> Oracle:
        return parse_oracle(self.oracle)
