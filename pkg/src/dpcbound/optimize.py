"""Golden-section search for unimodal scalar functions."""

from __future__ import annotations

import math

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_min(f, lo: float, hi: float, tol: float = 1e-10, max_iter: int = 500):
    """Minimise a unimodal ``f`` on ``[lo, hi]``; returns ``(x, f(x))``.

    Stops once the bracket is narrower than ``tol``. The endpoints are also
    scored so a monotone ``f`` returns the better boundary.
    """
    a, b = float(lo), float(hi)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    best = min(((f(x), x), (f(lo), lo), (f(hi), hi)))
    return best[1], best[0]


def golden_section_max(f, lo: float, hi: float, tol: float = 1e-10, max_iter: int = 500):
    x, fx = golden_section_min(lambda t: -f(t), lo, hi, tol, max_iter)
    return x, -fx
