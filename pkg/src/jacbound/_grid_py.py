"""Pure-Python lattice maximizer (fallback for the compiled ``_grid`` module).

Both backends implement the same contract:

    grid_max(pair, coef, scale, total) -> (best_m, best_value, n_points, n_poles)

enumerating every m in Z>=0^k with sum(m) <= total, setting x_i = scale*m_i and
maximizing

    F(x) = prod x_i / prod (1 - x_i + coef_i * x_{pair_i})^2.

Points whose denominator factor drops below POLE_EPS are skipped.  Ties keep
the first point in lexicographic order, so results are deterministic.
"""

POLE_EPS = 1e-9


def grid_max(pair, coef, scale, total):
    k = len(pair)
    m = [0] * k
    x = [0.0] * k
    best_m = list(m)
    best = -1.0
    n_points = 0
    n_poles = 0
    s = 0
    while True:
        n_points += 1
        num = 1.0
        den = 1.0
        pole = False
        for i in range(k):
            num *= x[i]
            fac = 1.0 - x[i] + coef[i] * x[pair[i]]
            if fac < POLE_EPS:
                pole = True
                break
            den *= fac * fac
        if pole:
            n_poles += 1
        else:
            v = num / den
            if v > best:
                best = v
                best_m = list(m)
        # advance the odometer over {m : sum(m) <= total}
        i = k - 1
        m[i] += 1
        x[i] = scale * m[i]
        s += 1
        while s > total:
            s -= m[i]
            m[i] = 0
            x[i] = 0.0
            i -= 1
            if i < 0:
                return best_m, best, n_points, n_poles
            m[i] += 1
            x[i] = scale * m[i]
            s += 1
