"""Shared test constructions."""

import numpy as np

from qpp import Context, LabeledProjector, PrePostScenario, StateVector

# The 18-vector Kochen-Specker set in dimension 4: nine orthogonal bases,
# each vector appearing in exactly two of them.  Exactly-one-per-context
# over nine contexts would assign an odd total, but double membership
# makes every total even, so no noncontextual assignment exists even
# though nothing is forced and unit propagation cannot get started.
_KS18_VECTORS = {
    "u01": (0, 0, 0, 1),
    "u02": (0, 0, 1, 0),
    "u03": (1, 1, 0, 0),
    "u04": (1, -1, 0, 0),
    "u05": (0, 1, 0, 0),
    "u06": (1, 0, 1, 0),
    "u07": (1, 0, -1, 0),
    "u08": (1, -1, 1, -1),
    "u09": (1, -1, -1, 1),
    "u10": (0, 0, 1, 1),
    "u11": (1, 1, 1, 1),
    "u12": (0, 1, 0, -1),
    "u13": (1, 0, 0, 1),
    "u14": (1, 0, 0, -1),
    "u15": (0, 1, -1, 0),
    "u16": (1, 1, -1, 1),
    "u17": (1, 1, 1, -1),
    "u18": (-1, 1, 1, 1),
}

_KS18_CONTEXTS = (
    ("u01", "u02", "u03", "u04"),
    ("u01", "u05", "u06", "u07"),
    ("u08", "u09", "u03", "u10"),
    ("u08", "u11", "u07", "u12"),
    ("u02", "u05", "u13", "u14"),
    ("u09", "u11", "u14", "u15"),
    ("u16", "u17", "u04", "u10"),
    ("u16", "u18", "u06", "u12"),
    ("u17", "u18", "u13", "u15"),
)


def ks18_scenario():
    """A fully valid scenario that is UNSAT with an empty forced set."""

    def normalized(entries):
        v = np.array(entries, dtype=np.complex128)
        return StateVector(v / np.linalg.norm(v))

    projectors = tuple(
        LabeledProjector(lab, normalized(vec)) for lab, vec in sorted(_KS18_VECTORS.items())
    )
    # generic selections: not orthogonal or parallel to any of the vectors
    pre = normalized((1, 2, 3, 5))
    post = normalized((5, 3, 2, -1))
    return PrePostScenario(
        dim=4,
        pre=pre,
        post=post,
        projectors=projectors,
        contexts=tuple(Context(members) for members in _KS18_CONTEXTS),
        metadata={"name": "ks18"},
    )
