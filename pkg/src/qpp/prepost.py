"""Selection-based reasoning: forced values and the ABL probability.

A projector's value can be forced by the preselected state alone (the
outcome is certain in advance), or by the postselected state alone (the
outcome can be inferred backward with certainty).  forced_values()
collects both kinds.  abl_probability() gives the probability of finding
value 1 for an intermediate ideal measurement of a single projector,
conditioned on both selections.
"""

from __future__ import annotations

from . import hilbert
from .hilbert import TOL_CHECK
from .scenario import PREDICTION, RETRODICTION, ForcedValue, PrePostScenario

import numpy as np

__all__ = [
    "SelectionInconsistencyError",
    "ABLUndefinedError",
    "selection_probability",
    "forced_values",
    "abl_probability",
]


class SelectionInconsistencyError(ValueError):
    """Prediction and retrodiction force different values on one projector."""


class ABLUndefinedError(ValueError):
    """Both conditional branches vanish; the ABL ratio is 0/0."""


def selection_probability(s: PrePostScenario) -> float:
    """|<post|pre>|^2, the success probability of the postselection."""
    return abs(hilbert.inner(s.post, s.pre)) ** 2


def forced_values(s: PrePostScenario, tol: float = TOL_CHECK) -> tuple[ForcedValue, ...]:
    """Values fixed by either selection, sorted by label.

    A projector with the preselected state as an eigenvector gets its
    eigenvalue by prediction; failing that, an eigenvector relation with
    the postselected state forces the value by retrodiction.  When both
    selections force values they must agree, otherwise the scenario has
    no consistent intermediate history.
    """
    out: list[ForcedValue] = []
    for p in sorted(s.projectors, key=lambda lp: lp.label):
        vp = hilbert.certain_value(p.operator, s.pre, tol)
        vr = hilbert.certain_value(p.operator, s.post, tol)
        if vp is not None and vr is not None and vp != vr:
            raise SelectionInconsistencyError(
                f"projector {p.label!r}: prediction gives {vp} but retrodiction gives {vr}"
            )
        if vp is not None:
            out.append(ForcedValue(p.label, vp, PREDICTION))
        elif vr is not None:
            out.append(ForcedValue(p.label, vr, RETRODICTION))
    return tuple(out)


def abl_probability(s: PrePostScenario, label: str, tol: float = TOL_CHECK) -> float:
    """Probability of outcome 1 for an intermediate measurement of one projector.

    Computed as N1 / (N1 + N0) with N1 = |<post|P|pre>|^2 and
    N0 = |<post|(I - P)|pre>|^2.

    Raises:
        ValueError: unknown label.
        ABLUndefinedError: N1 + N0 below tol; the conditional
            probability is not defined.
    """
    pm = s.projector_map()
    if label not in pm:
        raise ValueError(f"unknown projector label {label!r}")
    op = pm[label].operator
    amp1 = complex(np.vdot(s.post.amps, hilbert.apply(op, s.pre)))
    amp_total = hilbert.inner(s.post, s.pre)
    n1 = abs(amp1) ** 2
    n0 = abs(amp_total - amp1) ** 2
    if n1 + n0 < tol:
        raise ABLUndefinedError(
            f"projector {label!r}: both branches vanish (N1 + N0 = {n1 + n0:.3e})"
        )
    return n1 / (n1 + n0)
