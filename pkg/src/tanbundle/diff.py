"""Fourth-order central finite differences."""
import numpy as np

FIRST_STEP = 1e-4
SECOND_STEP = 1e-3

_WEIGHTS = ((2, -1.0), (1, 8.0), (-1, -8.0), (-2, 1.0))


def gradient(f, x, h=FIRST_STEP):
    """Partial derivatives of an array-valued ``f`` at ``x``.

    Returns an array of shape ``(len(x),) + f(x).shape`` whose leading index is
    the differentiation direction.
    """
    x = np.asarray(x, dtype=float)
    rows = []
    for i in range(x.size):
        acc = None
        for shift, wgt in _WEIGHTS:
            xs = x.copy()
            xs[i] += shift * h
            val = wgt * np.asarray(f(xs), dtype=float)
            acc = val if acc is None else acc + val
        rows.append(acc / (12.0 * h))
    return np.stack(rows)


def stencil_reach(h):
    return 2.0 * h
