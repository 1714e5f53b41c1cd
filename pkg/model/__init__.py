"""Model package initialization."""
from .transform import RelationTransform, TransformCache, TransformGradient
from .chain import ChainComposer, ChainEvaluator, ForwardTape, enumerate_signatures
from .embedding import (
    EmbeddingTable, load_binary, load_embeddings, load_text, save_binary, save_embeddings, save_text
)
from .negative import NegSampler
from .hine_model import Gradients, HineModel, sigmoid, softplus
from .optimizer import sgd_step
from .checkpoint import load_checkpoint, load_transforms, save_checkpoint, save_transforms

__all__ = [
    'RelationTransform', 'TransformCache', 'TransformGradient',
    'ChainComposer', 'ChainEvaluator', 'ForwardTape', 'enumerate_signatures',
    'EmbeddingTable', 'load_binary', 'load_embeddings', 'load_text', 'save_binary',
    'save_embeddings', 'save_text',
    'NegSampler',
    'Gradients', 'HineModel', 'sigmoid', 'softplus',
    'sgd_step',
    'load_checkpoint', 'load_transforms', 'save_checkpoint', 'save_transforms',
]
