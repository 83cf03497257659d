import logging
import math

import numpy as np

from os_vilenkin.exceptions import DomainError

logger = logging.getLogger(__name__)


def _orthonormal(vectors, tol):
    """Orthonormal columns spanning the given column vectors."""
    norms = np.linalg.norm(vectors, axis=0)
    keep = norms > tol
    if not np.any(keep):
        return vectors[:, :0]
    u, s, _ = np.linalg.svd(vectors[:, keep] / norms[keep], full_matrices=False)
    rank = int(np.sum(s > tol * max(1.0, s[0])))
    return u[:, :rank]


def gk_growth(generators, k_max, tol=1e-9):
    """[dim V_0, ..., dim V_k_max] with V_k = sum_{j <= k} V^j and V^0 = span{1}.

    The zero subspace stays zero for every k.
    """
    if not generators:
        return [0] * (k_max + 1)
    p = generators[0].p
    if any(g.p != p for g in generators):
        raise DomainError("generators over different primes")
    level = max(g.level for g in generators)
    columns = np.stack([g.promote(level).to_array() for g in generators], axis=1)
    base = _orthonormal(columns, tol)
    if base.shape[1] == 0:
        return [0] * (k_max + 1)
    size = p ** level
    power = np.ones((size, 1), dtype=np.complex128) / math.sqrt(size)
    total = power
    dims = [1]
    for _ in range(k_max):
        products = np.concatenate(
            [power[:, [i]] * base for i in range(power.shape[1])], axis=1
        )
        power = _orthonormal(products, tol)
        total = _orthonormal(np.concatenate([total, power], axis=1), tol)
        dims.append(total.shape[1])
    logger.debug(f"Growth over level {level}: {dims}")
    return dims


def gk_ratios(dims):
    """log dim V_k / log k for k ≥ 2, the finite-scale GK exponent."""
    return [
        math.log(d) / math.log(k) if d else 0.0 for k, d in enumerate(dims) if k >= 2
    ]


def is_eventually_constant(dims):
    """True when the sequence has stopped growing at its last step."""
    return len(dims) < 2 or dims[-1] == dims[-2]
