"""
Plain SGD with split learning rates for the embedding table and transforms.
"""
from typing import List, Optional, Tuple

import numpy as np

from model.hine_model import Gradients, HineModel
from utils.exceptions import NumericalError


def sgd_step(
    model: HineModel,
    grads: Gradients,
    eta_embed: float,
    eta_dnn: float,
    max_grad_norm: Optional[float] = None
) -> float:
    """
    Apply one update in place.

    New values are computed and checked first; nothing is written if any
    updated entry is non-finite.

    Args:
        model: Model to update
        grads: Gradients from model.backward
        eta_embed: Learning rate for touched Φ rows
        eta_dnn: Learning rate for transform parameters
        max_grad_norm: Optional global-norm clip

    Returns:
        Gradient norm before clipping (0.0 when not computed)

    Raises:
        NumericalError: Names the first parameter block that would become non-finite
    """
    norm = 0.0
    scale = 1.0
    if max_grad_norm is not None:
        norm = grads.global_norm()
        if norm > max_grad_norm:
            scale = max_grad_norm / norm

    phi = model.phi
    new_rows = phi[grads.rows] - (eta_embed * scale) * grads.embedding
    if not np.all(np.isfinite(new_rows)):
        raise NumericalError("non-finite parameter after update", block='embedding')

    staged: List[Tuple[np.ndarray, np.ndarray]] = []
    for e in sorted(grads.transforms):
        transform = model.transforms[e]
        grad = grads.transforms[e]
        for index, (w, b) in enumerate(zip(transform.weights, transform.biases)):
            new_w = w - (eta_dnn * scale) * grad.weights[index]
            new_b = b - (eta_dnn * scale) * grad.biases[index]
            for label, value in ((f"W{index + 1}", new_w), (f"b{index + 1}", new_b)):
                if not np.all(np.isfinite(value)):
                    raise NumericalError(
                        "non-finite parameter after update",
                        block=f"transform[{model.edge_type_name(e)}].{label}",
                    )
            staged.append((w, new_w))
            staged.append((b, new_b))

    phi[grads.rows] = new_rows
    for target, value in staged:
        target[...] = value
    model.version += 1
    return norm
