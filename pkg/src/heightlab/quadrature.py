"""Globally adaptive Gauss-Kronrod (7, 15) quadrature on a finite interval."""
from __future__ import annotations

import heapq
import math

from .errors import NoConvergence

_XGK = (0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
        0.207784955007898467600689403773245, 0.000000000000000000000000000000000)
_WGK = (0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
        0.204432940075298892414161999234649, 0.209482141084727828012999174891714)
# Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5 and the centre
_WG = (0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
       0.381830050505118944950369775488975, 0.417959183673469387755102040816327)

MAX_INTERVALS = 2 ** 16


def gk15(f, a: float, b: float) -> tuple[float, float]:
    """Kronrod estimate on [a, b] and |Kronrod - Gauss| as its error."""
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    fc = f(c)
    kron = _WGK[7] * fc
    gauss = _WG[3] * fc
    for j in range(7):
        dx = h * _XGK[j]
        s = f(c - dx) + f(c + dx)
        kron += _WGK[j] * s
        if j % 2 == 1:
            gauss += _WG[j // 2] * s
    return kron * h, abs((kron - gauss) * h)


def integrate(f, a: float, b: float, rtol: float = 1e-9, atol: float | None = None,
              max_intervals: int = MAX_INTERVALS) -> tuple[float, float, int]:
    """Integrate f over [a, b].

    Bisects the interval with the largest error estimate until the summed
    estimate drops below ``max(atol, rtol * |I|)``; ``atol`` defaults to
    ``rtol``.  Returns (value, error estimate, number of intervals).
    """
    if atol is None:
        atol = rtol
    value, err = gk15(f, a, b)
    heap = [(-err, a, b, value)]
    total_err, total_val = err, value
    while total_err > max(atol, rtol * abs(total_val)):
        if len(heap) >= max_intervals:
            raise NoConvergence(f"no convergence with {len(heap)} subintervals "
                                f"(error estimate {total_err:.3g})")
        neg_err, lo, hi, old = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        v1, e1 = gk15(f, lo, mid)
        v2, e2 = gk15(f, mid, hi)
        heapq.heappush(heap, (-e1, lo, mid, v1))
        heapq.heappush(heap, (-e2, mid, hi, v2))
        total_err = max(0.0, total_err + neg_err + e1 + e2)
        total_val += v1 + v2 - old
    pieces = sorted(heap, key=lambda item: item[1])
    return math.fsum(item[3] for item in pieces), total_err, len(heap)
