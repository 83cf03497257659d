from enum import Enum
from typing import List, Union

from pydantic import BaseSettings, Field, root_validator, validator

from os_aio_pod.utils import module_from_string
from os_vilenkin.command import Command
from os_vilenkin.padic import is_prime

ENV_PREFIX = "OS_VILENKIN_"

MAX_POINTS = 10 ** 6


class CommandConfig(BaseSettings):
    name: str
    cls: Union[module_from_string(Command), None] = None

    class Config:
        env_prefix = ENV_PREFIX
        extra = "allow"


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


class GroupKind(str, Enum):
    ZP = "zp"
    HEIS = "heis"


class PhiMode(str, Enum):
    TRANSLATE = "translate"
    SIGMA = "sigma"
    SWAP = "swap"
    SHUFFLE = "shuffle"


class RunConfig(BaseSettings):

    COMMANDS: List[CommandConfig] = []
    command: str = None
    p: int = 2
    r: int = Field(1, ge=0)
    n: int = Field(1, ge=0)
    d: int = Field(1, ge=1)
    m: int = Field(0, ge=0)
    x: int = 0
    y: int = 0
    z: int = 0
    bound: int = Field(3, ge=0)
    levels: int = Field(2, ge=0)
    s: float = 1.0
    c: int = Field(1, ge=0)
    m0: int = Field(0, ge=0)
    max_n: int = Field(16, ge=1)
    k_max: int = Field(6, ge=0)
    trials: int = Field(10, ge=1)
    seed: int = Field(0, ge=0)
    group = GroupKind.ZP
    mode = PhiMode.TRANSLATE
    format = OutputFormat.JSON
    tolerance: float = 1e-9
    time_limit: Union[None, float] = None
    workers: int = Field(4, ge=1)
    timing: bool = True

    @validator("p", always=True)
    def check_prime(cls, v):
        if not is_prime(v):
            raise ValueError("p must be prime ≥ 2")
        return v

    @validator("tolerance", "s", always=True)
    def check_positive(cls, v):
        if v is not None and v <= 0.0:
            raise ValueError("value must greater than 0.0")
        return v

    @validator("time_limit", always=True)
    def check_timeout(cls, v):
        if v is not None:
            if v < 0.0:
                raise ValueError("value must greater than 0.0")
        return v

    @root_validator(skip_on_failure=True)
    def check_size(cls, values):
        p = values["p"]
        for name in ("r", "n", "bound", "levels"):
            if p ** values[name] > MAX_POINTS:
                raise ValueError(f"p^{name} = {p}^{values[name]} exceeds {MAX_POINTS}")
        if p ** (values["levels"] + values["r"]) > MAX_POINTS:
            raise ValueError(f"p^(levels + r) exceeds {MAX_POINTS}")
        return values

    class Config:
        env_prefix = ENV_PREFIX
        extra = "allow"
        validate_all = True
