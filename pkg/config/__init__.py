"""Config package initialization."""
from .settings import settings, Settings
from .constants import *
from .train_config import TrainConfig, SamplerConfig, build_train_config, read_config_file

__all__ = ['settings', 'Settings', 'TrainConfig', 'SamplerConfig', 'build_train_config', 'read_config_file']
