"""Random metric generators shared by the test modules."""

import itertools

import numpy as np

from walkergeom.metric import walker_from_abc, walker_from_theta

VARS = "uvxy"


def monomials(deg):
    return [m for m in itertools.product(range(deg + 1), repeat=4) if sum(m) <= deg]


def rand_poly(rng, deg=3, density=1.0, coeff=1.0):
    """Polynomial text with coefficients uniform in [-coeff, coeff]."""
    terms = []
    for m in monomials(deg):
        if rng.random() > density:
            continue
        c = rng.uniform(-coeff, coeff)
        f = "*".join(f"{v}^{k}" if k > 1 else v for v, k in zip(VARS, m) if k) or "1"
        terms.append(f"({c!r})*{f}")
    return " + ".join(terms) or "0"


def rand_walker(rng, deg=3, coeff=1.0):
    return walker_from_abc(*(rand_poly(rng, deg, coeff=coeff) for _ in range(3)))


def rand_theta_metric(rng, deg=5, density=0.3):
    return walker_from_theta(rand_poly(rng, deg, density))


def rand_point(rng, half=1.0):
    return tuple(rng.uniform(-half, half, 4))


def rel_err(x, ref):
    x, ref = np.asarray(x, float), np.asarray(ref, float)
    return float(np.max(np.abs(x - ref))) / max(1.0, float(np.max(np.abs(ref))))
