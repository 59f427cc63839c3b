"""
Cosine similarity kernels.

All arithmetic is float64 regardless of the storage precision. Zero-norm vectors
have similarity 0 with every vector; a warning is logged instead of failing.
"""
import logging
from typing import Sequence, Union

import numpy as np

from ..core.models import EmbeddingVector
from ..errors import DimensionMismatch

logger = logging.getLogger("motor.similarity")

VectorLike = Union[EmbeddingVector, np.ndarray, Sequence[float]]


def _values(vector: VectorLike) -> np.ndarray:
    if isinstance(vector, EmbeddingVector):
        return vector.values
    return np.asarray(vector, dtype=np.float64)


def cosine_similarity(a: VectorLike, b: VectorLike) -> float:
    """
    Cosine similarity of two vectors, clamped to [-1, 1].

    Raises:
        DimensionMismatch: If the vectors differ in length
    """
    x = _values(a)
    y = _values(b)
    if x.shape != y.shape:
        raise DimensionMismatch(x.shape[0], y.shape[0], "cosine operand")
    norm_x = float(np.sqrt(np.dot(x, x)))
    norm_y = float(np.sqrt(np.dot(y, y)))
    if norm_x == 0.0 or norm_y == 0.0:
        logger.warning("zero-norm vector in cosine similarity; treating similarity as 0")
        return 0.0
    value = float(np.dot(x, y)) / (norm_x * norm_y)
    return min(1.0, max(-1.0, value))


def _stack(vectors: Sequence[VectorLike], side: str) -> np.ndarray:
    arrays = [_values(v) for v in vectors]
    dim = arrays[0].shape[0]
    for array in arrays:
        if array.shape != (dim,):
            raise DimensionMismatch(dim, array.shape[0], f"{side} operand")
    return np.vstack(arrays)


def _normalize_rows(matrix: np.ndarray) -> np.ndarray:
    norms = np.sqrt(np.einsum("ij,ij->i", matrix, matrix))
    zero = norms == 0.0
    if np.any(zero):
        logger.warning(f"{int(zero.sum())} zero-norm vector(s) in similarity matrix; rows set to 0")
        norms = np.where(zero, 1.0, norms)
    return matrix / norms[:, None]


def similarity_matrix(A: Sequence[VectorLike], B: Sequence[VectorLike]) -> np.ndarray:
    """
    Pairwise cosine similarities, shape ``len(A) x len(B)``.

    An empty operand yields an empty matrix of the matching shape.

    Raises:
        DimensionMismatch: If vectors within or across the operands differ in length
    """
    if len(A) == 0 or len(B) == 0:
        return np.zeros((len(A), len(B)), dtype=np.float64)
    left = _normalize_rows(_stack(A, "left"))
    right = _normalize_rows(_stack(B, "right"))
    if left.shape[1] != right.shape[1]:
        raise DimensionMismatch(left.shape[1], right.shape[1], "similarity matrix operand")
    return np.clip(left @ right.T, -1.0, 1.0)
