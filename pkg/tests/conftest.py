"""Shared builders for randomized geometry instances.

Everything is driven by an explicit numpy Generator so each test controls its
own seed; nothing here touches global RNG state.
"""

import numpy as np

from rigidity.curvature import FundamentalData
from rigidity.symmat import random_tuple


def make_minimal(n, p, c, rng, scale=0.6):
    """Traceless random forms: a minimal-submanifold datum."""
    forms = random_tuple(n, p, rng, scale=scale, traceless=True)
    return FundamentalData(n=n, p=p, c=c, forms=forms)


def make_pseudo_umbilical(n, p, c, H, rng, scale=0.6):
    """Umbilical mean member H*I in slot 0 plus p-1 random traceless members."""
    if p < 2:
        raise ValueError("need p >= 2 for a pseudo-umbilical instance")
    rest = random_tuple(n, p - 1, rng, scale=scale, traceless=True)
    mean = H * np.eye(n)
    forms = np.concatenate([mean[None], rest])
    return FundamentalData(n=n, p=p, c=c, forms=forms, mean_index=0)


def make_general(n, p, c, rng, scale=0.6):
    """Unconstrained random forms (no frame convention)."""
    forms = random_tuple(n, p, rng, scale=scale)
    return FundamentalData(n=n, p=p, c=c, forms=forms)


def random_orthogonal(dim, rng):
    """Haar-ish orthogonal matrix via QR with the R-diagonal sign fix."""
    q, r = np.linalg.qr(rng.normal(size=(dim, dim)))
    return q * np.sign(np.diag(r))
