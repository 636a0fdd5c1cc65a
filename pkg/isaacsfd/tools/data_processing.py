import numpy as np

from isaacsfd.base import DegenerateFit


def fit_rate(pairs):
    """
    Least-squares slope of ``log(error)`` against ``log(h)``.

    Parameters
    ----------
    pairs : iterable of (h, error)
        At least three pairs with positive errors.

    Returns
    -------
    rate : float
    fit_residual : float
        Largest absolute deviation of ``log(error)`` from the fitted line.

    Raises
    ------
    DegenerateFit
        If fewer than three pairs are given, or an error is not positive.
    """
    pairs = np.asarray(list(pairs), dtype=float)
    if pairs.ndim != 2 or pairs.shape[0] < 3:
        raise DegenerateFit("At least three (h, error) pairs are needed to fit a rate")
    h, error = pairs[:, 0], pairs[:, 1]
    if np.any(h <= 0) or np.any(error <= 0):
        raise DegenerateFit("Rates can only be fitted to positive h and errors")
    if np.unique(h).shape[0] < 2:
        raise DegenerateFit("All h values coincide")
    x, y = np.log(h), np.log(error)
    slope, intercept = np.polyfit(x, y, 1)
    return float(slope), float(np.max(np.abs(y - (slope * x + intercept))))


def is_dyadic_chain(h_list, rtol=1e-9):
    """True when every ``h`` is a power-of-two multiple of the smallest one."""
    h_list = np.asarray(h_list, dtype=float)
    ratios = h_list / h_list.min()
    nearest = np.round(ratios)
    if not np.allclose(ratios, nearest, rtol=rtol, atol=0.0):
        return False
    return all(int(r) & (int(r) - 1) == 0 for r in nearest)
