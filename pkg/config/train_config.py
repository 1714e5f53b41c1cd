"""
Training and sampling hyperparameters.
Config files are flat `key = value` text; keys must match TrainConfig fields.
"""
from pathlib import Path
from typing import Any, Dict, Literal, Optional

from dotenv import dotenv_values
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from utils.exceptions import ConfigError


class TrainConfig(BaseModel):
    """Hyperparameters for GHINE / AHINE training."""

    model_config = ConfigDict(extra='forbid')

    batch_size: int = Field(32, ge=1, description="Mini-batch size b")
    eta_embed: float = Field(0.025, ge=0, description="Learning rate for the embedding table")
    eta_dnn: float = Field(0.001, ge=0, description="Learning rate for relation transform weights")
    neg: int = Field(5, ge=1, description="Negative samples per positive")
    max_chain_length: int = Field(3, ge=1, description="Max chain length c")
    max_iterations: int = Field(200, ge=0, description="Max epochs per training phase")
    convergence_tol: float = Field(1e-4, ge=0, description="Relative epoch-loss change that counts as converged")
    seed: int = Field(0, description="Random seed")
    dim: int = Field(30, ge=1, description="Embedding dimension d")
    hidden: int = Field(200, ge=1, description="Hidden width h of each relation transform")
    pretrain_epochs: int = Field(50, ge=0, description="GHINE pretraining epochs before chain training")
    hidden_layers: int = Field(2, ge=0, description="Hidden layers per relation transform (0 = single affine layer)")
    noise: Literal['unigram', 'uniform'] = Field('unigram', description="Negative sampling noise distribution")
    typed_negatives: bool = Field(False, description="Draw negatives from the node type of the positive target")
    phase2_single_edges: bool = Field(True, description="Keep length-1 samples in chain training")
    max_grad_norm: Optional[float] = Field(None, gt=0, description="Clip the global gradient norm per step")
    triple_count: int = Field(0, ge=0, description="GHINE edge triples to draw (0 = one per edge)")
    checkpoint_every: int = Field(1, ge=0, description="Epochs between checkpoints (0 = never)")
    dtype: Literal['float32', 'float64'] = Field('float32', description="Parameter precision")


class SamplerConfig(BaseModel):
    """Parameters for walk and chain sample generation."""

    model_config = ConfigDict(extra='forbid')

    walks_per_node: int = Field(100, ge=1, description="Walks started per node w")
    max_walk_length: int = Field(50, ge=2, description="Max nodes per walk l")
    max_chain_length: int = Field(3, ge=1, description="Max chain length c")
    min_count: int = Field(5, ge=0, description="Endpoint frequency lower bound")
    seed: int = Field(0, description="Random seed")


def read_config_file(path: Path | str) -> Dict[str, str]:
    """
    Read a flat `key = value` config file.

    Args:
        path: Config file path

    Returns:
        Raw key/value strings

    Raises:
        ConfigError: If the file is missing or names an unknown key
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"Config file not found: {path}")

    values = dotenv_values(path)
    unknown = sorted(set(values) - set(TrainConfig.model_fields))
    if unknown:
        raise ConfigError(f"{path}: unknown config key(s): {', '.join(unknown)}")
    return {key: value for key, value in values.items() if value is not None}


def build_train_config(
    config_file: Optional[Path | str] = None,
    overrides: Optional[Dict[str, Any]] = None
) -> TrainConfig:
    """
    Merge defaults, an optional config file and flag overrides (flags win).

    Args:
        config_file: Optional `key = value` file
        overrides: Values from command-line flags; None entries are ignored

    Returns:
        Validated TrainConfig
    """
    merged: Dict[str, Any] = {}
    if config_file is not None:
        merged.update(read_config_file(config_file))
    if overrides:
        merged.update({k: v for k, v in overrides.items() if v is not None})

    try:
        return TrainConfig.model_validate(merged)
    except ValidationError as e:
        problems = '; '.join(
            f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors()
        )
        source = f"{config_file}: " if config_file is not None else ''
        raise ConfigError(f"{source}invalid training config ({problems})") from e
