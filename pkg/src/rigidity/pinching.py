"""Pinching thresholds of the classical rigidity theorems, and verdicts.

Each theorem says: if every sectional curvature of the submanifold exceeds a
threshold determined by (n, p, c, H), the submanifold is one of a short list
of models.  threshold_* return the constants; verdict() compares them against
the certified K_min bracket of a FundamentalData instance and reports strict /
boundary / fails / indeterminate together with the model label the boundary
data matches.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import ddvv
from .curvature import Bracket, FundamentalData, invariants, kmin_bracket
from .symmat import commutes, sgn

THEOREMS = ("yau", "itoh", "thm1", "thm2", "generalized")
LABELS = ("TotallyGeodesic", "ProductOfSpheres", "Veronese", "UmbilicalSphere",
          "Undetermined")


class HypothesisError(ValueError):
    """The data violates a structural hypothesis of the requested theorem."""


@dataclass(frozen=True)
class PinchVerdict:
    theorem: str
    threshold: float
    kmin_bracket: Bracket
    status: str            # strict | boundary | fails | indeterminate
    label: str
    notes: tuple[str, ...]


# -- thresholds ---------------------------------------------------------------
# Each is a single integer division (plus a sign / ambient factor) so the
# floats agree bit-for-bit with the correctly rounded rational value.

def threshold_thm1(p: int) -> float:
    """Minimal in a unit sphere: K > sgn(p-1) p / (2(p+1)) forces the models."""
    if p < 1:
        raise ValueError(f"need p >= 1, got {p}")
    return sgn(p - 1) * p / (2 * (p + 1))


def threshold_yau(p: int) -> float:
    """The earlier minimal-case constant (p-1)/(2p-1); weaker for p >= 3."""
    if p < 1:
        raise ValueError(f"need p >= 1, got {p}")
    return (p - 1) / (2 * p - 1)


def threshold_itoh(n: int) -> float:
    """Dimension-based minimal constant n/(2(n+1)) (totally geodesic or Veronese)."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    return n / (2 * (n + 1))


def threshold_thm2(p: int, c: float, H: float) -> float:
    """Nonzero parallel mean curvature: sgn(p-2) (p-1)/(2p) * (c + H^2)."""
    if p < 1:
        raise ValueError(f"need p >= 1, got {p}")
    amb = c + H * H
    if amb <= 0:
        raise ValueError(f"need c + H^2 > 0, got {amb}")
    return sgn(p - 2) * (p - 1) / (2 * p) * amb


def k_mn(m: int, n: int) -> int:
    """k(m, n) = min(sgn(m-1) m, n): effective codimension count."""
    if m < 0 or n < 1:
        raise ValueError(f"need m >= 0 and n >= 1, got m={m}, n={n}")
    return min(sgn(m - 1) * m, n)


def threshold_generalized(p: int, n: int, c: float, H: float) -> float:
    """Combined constant k/(2(k+1)) * ambient with k = k(p, n) (minimal,
    ambient c) or k(p-1, n) (nonzero parallel mean, ambient c + H^2)."""
    if p < 1:
        raise ValueError(f"need p >= 1, got {p}")
    amb = c + H * H
    if amb <= 0:
        raise ValueError(f"need c + H^2 > 0, got {amb}")
    k = k_mn(p, n) if H == 0 else k_mn(p - 1, n)
    return k * amb / (2 * (k + 1))


# -- structural predicates ----------------------------------------------------

def _is_minimal(data: FundamentalData, tol: float) -> bool:
    scale = max(1.0, float(np.max(np.abs(data.forms))) * data.n)
    return bool(np.max(np.abs(data.traces)) <= tol * scale)


def _is_pseudo_umbilical(data: FundamentalData, tol: float) -> bool:
    if data.mean_index is None:
        return False
    hm = data.forms[data.mean_index]
    scalar = (np.trace(hm) / data.n) * np.eye(data.n)
    return bool(np.max(np.abs(hm - scalar)) <= tol * max(1.0, float(np.max(np.abs(hm)))))


def _mean_commutes(data: FundamentalData, tol: float) -> bool:
    if data.mean_index is None:
        return False
    hm = data.forms[data.mean_index]
    return all(commutes(hm, data.forms[i], tol) for i in data.non_mean_indices())


def _two_eigenvalue_product(form: np.ndarray, ambient: float, tol: float) -> bool:
    """diag(lam I_k, mu I_(n-k)) pattern with lam * mu = -ambient."""
    vals = np.linalg.eigvalsh(form)
    scale = max(1.0, float(np.max(np.abs(vals))))
    lo, hi = vals[0], vals[-1]
    if hi - lo <= tol * scale:
        return False  # umbilical, not a two-block pattern
    near_lo = np.abs(vals - lo) <= tol * scale
    near_hi = np.abs(vals - hi) <= tol * scale
    if not np.all(near_lo | near_hi):
        return False
    return abs(lo * hi + ambient) <= tol * max(1.0, abs(ambient))


# -- verdicts -----------------------------------------------------------------

_SEVERITY = {"strict": 0, "boundary": 0, "fails": 1, "indeterminate": 2}


def _classify(bracket: Bracket, threshold: float, tol: float) -> str:
    if bracket.lo > threshold + tol:
        return "strict"
    if bracket.hi < threshold - tol:
        return "fails"
    if bracket.hi - bracket.lo <= 2 * tol:
        return "boundary"  # collapsed bracket sitting on the threshold
    return "indeterminate"


def verdict(data: FundamentalData, which: str, tol: float = 1e-8,
            budget: int = 64, seed=0) -> PinchVerdict:
    """Compare the certified K_min bracket of `data` against one theorem.

    Raises HypothesisError when the data violates the theorem's structural
    hypotheses (minimality, unit ambient curvature, nonzero parallel mean).
    Verdicts are deterministic per seed and invariant under admissible frame
    changes of the data.
    """
    if which not in THEOREMS:
        raise ValueError(f"unknown theorem {which!r}, expected one of {THEOREMS}")
    inv = invariants(data)
    minimal = _is_minimal(data, tol)
    soft = 1e-6  # structural predicate tolerance, looser than the verdict gate

    if which in ("yau", "itoh", "thm1"):
        if not minimal:
            raise HypothesisError(
                f"{which} requires minimal data: some tr(H_a) is nonzero beyond tolerance")
        if abs(data.c - 1.0) > 1e-9:
            raise HypothesisError(f"{which} is stated in a unit sphere, got c = {data.c}")
        restriction = tuple(range(data.p))
        s_ref = inv.S
        ambient = data.c
        threshold = {"yau": lambda: threshold_yau(data.p),
                     "itoh": lambda: threshold_itoh(data.n),
                     "thm1": lambda: threshold_thm1(data.p)}[which]()
        mean_case = False
    elif which == "thm2":
        if data.mean_index is None:
            raise HypothesisError("thm2 requires a mean-aligned frame (mean_index set)")
        if inv.H <= 1e-12 * max(1.0, float(np.max(np.abs(data.forms)))):
            raise HypothesisError("thm2 requires nonzero parallel mean curvature, got H ~ 0")
        threshold = threshold_thm2(data.p, data.c, inv.H)  # validates c + H^2 > 0
        restriction = data.non_mean_indices()
        s_ref = inv.S_I
        ambient = data.c + inv.H**2
        mean_case = True
    else:  # generalized
        if data.mean_index is None:
            if not minimal:
                raise HypothesisError(
                    "generalized (minimal branch) requires traceless data or a "
                    "mean-aligned frame")
            threshold = threshold_generalized(data.p, data.n, data.c, 0.0)
            restriction = tuple(range(data.p))
            s_ref = inv.S
            ambient = data.c
            mean_case = False
        else:
            if inv.H <= 1e-12 * max(1.0, float(np.max(np.abs(data.forms)))):
                raise HypothesisError(
                    "generalized (mean branch) requires nonzero mean curvature")
            threshold = threshold_generalized(data.p, data.n, data.c, inv.H)
            restriction = data.non_mean_indices()
            s_ref = inv.S_I
            ambient = data.c + inv.H**2
            mean_case = True

    bracket = kmin_bracket(data, budget=budget, seed=seed)
    status = _classify(bracket, threshold, tol)

    sub = data.forms[list(restriction)]
    ratio = ddvv.evaluate(sub).ratio if len(restriction) else 0.0
    ddvv_equality = ratio >= 1.0 - 1e-6
    collapsed = bracket.hi - bracket.lo <= soft * max(1.0, abs(bracket.hi))

    notes = []
    if minimal:
        notes.append("minimal")
    if data.mean_index is not None:
        notes.append("mean-aligned frame")
        if _is_pseudo_umbilical(data, soft):
            notes.append("pseudo-umbilical")
        if _mean_commutes(data, soft):
            notes.append("mean-commuting")
    if ddvv_equality:
        notes.append("ddvv-equality")
    fingerprint = (mean_case and s_ref is not None
                   and abs(s_ref - (2 * data.n / 3) * ambient) <= soft * max(1.0, ambient))
    if fingerprint and ddvv_equality:
        notes.append("S_I matches the Veronese value (2n/3)(c + H^2)")
    if which == "thm2" and data.p <= 2:
        notes.append("codimension p <= 2: threshold degenerates; the sharper "
                     "low-codimension classifications apply")

    label = "Undetermined"
    s_scale = max(1.0, float(np.sum(data.forms**2)))
    if s_ref is not None and s_ref <= tol * s_scale:
        label = "UmbilicalSphere" if mean_case else "TotallyGeodesic"
    elif status == "boundary":
        if (data.n == 2 and len(restriction) == 2 and ddvv_equality and collapsed):
            label = "Veronese"
        elif len(restriction) == 1 and _two_eigenvalue_product(sub[0], ambient, soft):
            label = "ProductOfSpheres"

    return PinchVerdict(theorem=which, threshold=float(threshold),
                        kmin_bracket=bracket, status=status, label=label,
                        notes=tuple(notes))


def severity(status: str) -> int:
    """Exit-code contribution of one verdict status (worst-of for batches)."""
    return _SEVERITY[status]
