"""Genuine-map oracles shared by the test modules.

Everything here iterates the piecewise map (or its single-valued inverse,
b > 0) directly, with bisection on monotone pieces; nothing touches the
formal line/affine machinery whose outputs the tests check.
"""

from __future__ import annotations

import lozilab as L


def close(u, v, tol):
    return max(abs(u[0] - v[0]), abs(u[1] - v[1])) <= tol


def all_words(length):
    for bits in range(2 ** length):
        yield tuple(+1 if bits >> i & 1 else -1 for i in range(length))


def genuine_iterate(p, v, steps):
    for _ in range(steps):
        v = L.apply_map(p, v)
    return v


def fold_oracle(p, word, y0, x_lo, x_hi, n_scan=4000):
    """Fold abscissa of the (len(word)+1)-step image of the segment {y=y0}.

    Bisects the initial x whose genuine orbit follows `word` and lands on
    the switching line, then returns the x-coordinate of the next image.
    """

    def walk(x):
        v = (x, y0)
        for s in word:
            if (v[0] >= 0.0) != (s > 0):
                return None
            v = L.apply_map(p, v)
        return v[0]

    xs = [x_lo + (x_hi - x_lo) * i / n_scan for i in range(n_scan + 1)]
    vals = [(x, walk(x)) for x in xs]
    vals = [(x, f) for x, f in vals if f is not None]
    step = 1.5 * (x_hi - x_lo) / n_scan
    for (x0, f0), (x1, f1) in zip(vals, vals[1:]):
        if x1 - x0 > step or (f0 < 0.0) == (f1 < 0.0):
            continue
        for _ in range(80):
            xm = 0.5 * (x0 + x1)
            fm = walk(xm)
            if fm is None:
                break
            if (fm < 0.0) == (f0 < 0.0):
                x0, f0 = xm, fm
            else:
                x1, f1 = xm, fm
        xc = 0.5 * (x0 + x1)
        image = genuine_iterate(p, (xc, y0), len(word) + 1)
        return xc, image[0]
    return None


def stable_polyline_crossing(p, m, near, n_scan=8000):
    """x-axis crossing of the m-step backward image of the primary stable
    segment of the right fixed point, chosen nearest to `near`.

    Uses only the genuine single-valued inverse (b > 0).
    """
    mult = L.multipliers(p)
    zeta = L.fixed_points(p)[1][0]
    v1 = (1.0 + mult.lam / p.b) * zeta
    v2 = (1.0 - (mult.lam / p.b) ** 2) * zeta
    e0, e1 = (0.0, v1), (v1, v2)

    def back(t):
        v = (e0[0] + t * (e1[0] - e0[0]), e0[1] + t * (e1[1] - e0[1]))
        for _ in range(m):
            v = L.apply_inverse(p, v)
        return v

    best = None
    prev_t, prev = 0.0, back(0.0)
    for i in range(1, n_scan + 1):
        t = i / n_scan
        cur = back(t)
        if (prev[1] < 0.0) != (cur[1] < 0.0):
            t0, t1, y0 = prev_t, t, prev[1]
            for _ in range(60):
                tm = 0.5 * (t0 + t1)
                ym = back(tm)[1]
                if (ym < 0.0) == (y0 < 0.0):
                    t0, y0 = tm, ym
                else:
                    t1 = tm
            x = back(0.5 * (t0 + t1))[0]
            if best is None or abs(x - near) < abs(best - near):
                best = x
        prev_t, prev = t, cur
    return best


def tent_orbit_crossing(p, word, x_lo=0.0, x_hi=1.0, n_scan=4000):
    """The point on the x-axis whose genuine orbit follows `word` and lands
    on the switching line at the final step (any b >= 0)."""
    result = fold_oracle(p, word, 0.0, x_lo, x_hi, n_scan=n_scan)
    return None if result is None else result[0]
