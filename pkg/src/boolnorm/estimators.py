"""scikit-learn style transformers over batches of truth tables.

Each row of ``X`` is a truth table of length ``2**m`` with 0/1 entries.
Nothing is learned; ``fit`` only validates and records ``n_vars_``.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .core import fwht, mobius
from .exceptions import DimensionError, FormatError
from .normality import batch_r_degree, half_dim


def check_truth_tables(X) -> tuple[np.ndarray, int]:
    """Validate a 2-d 0/1 array with a power-of-two row length."""
    X = check_array(X, dtype=None, ensure_2d=True)
    n = X.shape[1]
    if n & (n - 1):
        raise DimensionError(f"row length {n} is not a power of two")
    if not np.isin(X, (0, 1)).all():
        raise FormatError("truth tables must contain only 0 and 1")
    return np.ascontiguousarray(X, dtype=np.uint8), n.bit_length() - 1


class _TableTransformer(TransformerMixin, BaseEstimator):
    def fit(self, X, y=None):
        _, self.n_vars_ = check_truth_tables(X)
        return self

    def _validate(self, X) -> np.ndarray:
        check_is_fitted(self, "n_vars_")
        X, m = check_truth_tables(X)
        if m != self.n_vars_:
            raise DimensionError(f"fitted on m={self.n_vars_}, got m={m}")
        return X


class WalshTransformer(_TableTransformer):
    """Rows of Walsh coefficients."""

    def transform(self, X):
        return fwht(1 - 2 * self._validate(X).astype(np.int64))


class ANFTransformer(_TableTransformer):
    """Rows of ANF coefficients (Möbius transform)."""

    def transform(self, X):
        return mobius(self._validate(X))


class RelativeDegreeTransformer(_TableTransformer):
    """Column of ``deg_r`` values; ``r=None`` means ``ceil(m/2)``."""

    def __init__(self, r: int | None = None):
        self.r = r

    def fit(self, X, y=None):
        super().fit(X, y)
        r = half_dim(self.n_vars_) if self.r is None else self.r
        if not 0 <= r <= self.n_vars_:
            raise DimensionError(f"r={r} out of range for m={self.n_vars_}")
        self.r_ = r
        return self

    def transform(self, X):
        return batch_r_degree(self._validate(X), self.r_)[:, None]


__all__ = ["ANFTransformer", "RelativeDegreeTransformer", "WalshTransformer", "check_truth_tables"]
