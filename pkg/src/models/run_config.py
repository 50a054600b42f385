"""
Pydantic documents for command configuration and sweep grids
"""

import json
from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

NormalizationName = Literal["none", "row-row", "col-col", "row-col", "col-row"]
WeightModeName = Literal["constant", "degree"]


class CommandConfig(BaseModel):
    """
    Settings shared by every subcommand.

    A JSON file with these keys can be passed as --config; explicit command
    line flags override the file.
    """
    model_config = ConfigDict(extra="forbid")

    dataset: Path
    dedupe: bool = False
    one_based: bool = False
    out: Optional[Path] = None

    @field_validator("dataset")
    @classmethod
    def dataset_must_exist(cls, value: Path) -> Path:
        if not value.is_file():
            raise ValueError(f"dataset file {value} does not exist")
        return value

    @classmethod
    def from_sources(cls, config_file: Optional[Path], overrides: dict) -> 'CommandConfig':
        """
        Merge a JSON config file with command line overrides.

        Args:
            config_file: Optional path to a JSON document
            overrides: Flag values; None entries are ignored

        Returns:
            Validated configuration of the calling class
        """
        data = {}
        if config_file is not None:
            data.update(json.loads(Path(config_file).read_text(encoding="utf-8")))
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**data)


class HomophilyConfig(CommandConfig):
    """Settings of the homophily command"""


class SynthConfig(CommandConfig):
    """Settings of the synth command"""
    out: Path
    rank: int = Field(ge=2)
    p: float = Field(ge=0, le=1)
    seed: int = Field(default=0, ge=0)
    graph_out: Optional[Path] = None
    sidecar: Optional[Path] = None


class RunConfig(CommandConfig):
    """Everything one train invocation needs"""
    protocol: Optional[str] = None
    splits: int = Field(default=10, ge=1)
    seed: int = Field(default=0, ge=0)
    layers: int = Field(default=2, ge=1)
    hidden: int = Field(default=64, ge=1)
    lr: float = Field(default=0.01, gt=0)
    weight_decay: float = Field(default=0.0005, ge=0)
    dropout: float = Field(default=0.5, ge=0, lt=1)
    epochs: int = Field(default=500, ge=1)
    pv_weight: float = Field(default=1.0, gt=0)
    pv_weight_mode: WeightModeName = "constant"
    norm: NormalizationName = "row-row"
    placement: str = "auto"
    hops: int = Field(default=1, ge=1)
    float32: bool = False

    @field_validator("placement")
    @classmethod
    def placement_shape(cls, value: str) -> str:
        text = value.strip().lower()
        if text in ("none", "auto"):
            return text
        parts = text.split(",")
        if len(parts) != 2 or not all(p.strip().isdigit() for p in parts):
            raise ValueError("placement must be 'none', 'auto' or 'f,r'")
        return ",".join(p.strip() for p in parts)


class SweepConfig(RunConfig):
    """Train settings plus the grid file and trial budget of a sweep"""
    grid: Optional[Path] = None
    max_trials: Optional[int] = Field(default=None, ge=1)
    sweep_splits: int = Field(default=2, ge=1)


class SweepGrid(BaseModel):
    """Candidate values for the grid sweep; defaults cover the usual search ranges"""
    model_config = ConfigDict(extra="forbid")

    lr: list[float] = [0.1, 0.02, 0.01, 0.001, 0.0001]
    weight_decay: list[float] = [0.0, 0.005, 0.0005, 0.00005]
    dropout: list[float] = [0.0, 0.5, 0.7, 0.9]
    hidden: list[int] = [64, 128, 256, 512]
    layers: list[int] = [1, 2]
    pv_weight: list[float] = [1.0, 10.0, 100.0, 0.1, 0.001, 0.0001]
    pv_weight_mode: list[WeightModeName] = ["constant", "degree"]
    norm: list[NormalizationName] = ["row-row"]
    placement: list[str] = ["auto"]

    @field_validator("*")
    @classmethod
    def non_empty(cls, value: list) -> list:
        if not value:
            raise ValueError("every grid axis needs at least one candidate")
        return value

    @classmethod
    def from_file(cls, path: Optional[Path]) -> 'SweepGrid':
        if path is None:
            return cls()
        return cls(**json.loads(Path(path).read_text(encoding="utf-8")))

    def axes(self) -> dict[str, list]:
        """Grid axes in a fixed order"""
        return {name: list(getattr(self, name)) for name in type(self).model_fields}
