"""Scalar statistics shared by the metric and sampling layers."""

import numpy as np

from .errors import ZeroVarianceError


def pearson(x, y) -> float:
    """Pearson correlation of two equally sized arrays, flattened."""
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    xd = x - x.mean()
    yd = y - y.mean()
    xn = float(np.sqrt((xd * xd).sum()))
    yn = float(np.sqrt((yd * yd).sum()))
    if xn == 0.0 or yn == 0.0:
        raise ZeroVarianceError("constant input has no correlation")
    return float((xd * yd).sum() / (xn * yn))
