"""
The shipped tangle corpus: small diagrams the verification suite runs on.

Closed diagrams use plat form (cups, a braid word, caps).  Reidemeister
pairs come in matched entries so invariance checks can iterate over
(before, after) diagrams of the same boundary type.
"""

from __future__ import annotations

from .tanglecx import TangleDiagram, parse_diagram

CORPUS: dict[str, str] = {
    # Closed diagrams.
    "unknot_0": "tangle 0 0\ncup 1\ncap 1\n",
    "unknot_1": "tangle 0 0\ncup 1\nxA 1\ncap 1\n",
    "unknot_1b": "tangle 0 0\ncup 1\nxB 1\ncap 1\n",
    "unknot_2": "tangle 0 0\ncup 1\nxA 1\nxB 1\ncap 1\n",
    "hopf": "tangle 0 0\ncup 1\ncup 1\nxA 2\nxA 2\ncap 1\ncap 1\n",
    "trefoil": "tangle 0 0\ncup 1\ncup 1\nxA 2\nxA 2\nxA 2\ncap 1\ncap 1\n",
    # Identity braids.
    "identity_1": "tangle 1 1\n",
    "identity_2": "tangle 2 2\n",
    "identity_3": "tangle 3 3\n",
    "identity_4": "tangle 4 4\n",
    # Two-strand braid powers.
    "sigma1": "tangle 2 2\nxA 1\n",
    "sigma1_2": "tangle 2 2\nxA 1\nxA 1\n",
    "sigma1_3": "tangle 2 2\nxA 1\nxA 1\nxA 1\n",
    "sigma1_inv": "tangle 2 2\nxB 1\n",
    # Flat cap-cup tangles.
    "capcup": "tangle 2 2\ncap 1\ncup 1\n",
    "cup": "tangle 0 2\ncup 1\n",
    "cap": "tangle 2 0\ncap 1\n",
    # A strand with a disjoint circle (for removing-an-unknot checks).
    "identity_1_circle": "tangle 1 1\ncup 2\ncap 2\n",
    # Reidemeister pairs.
    "r1_twist": "tangle 1 1\ncup 2\nxA 2\ncap 1\n",
    "r1_twist_2strand": "tangle 2 2\ncup 2\nxA 2\ncap 1\n",
    "r2_pair": "tangle 2 2\nxA 1\nxB 1\n",
    "r3_left": "tangle 3 3\nxA 1\nxA 2\nxA 1\n",
    "r3_right": "tangle 3 3\nxA 2\nxA 1\nxA 2\n",
}

REIDEMEISTER_PAIRS: list[tuple[str, str, str]] = [
    ("RI", "r1_twist", "identity_1"),
    ("RI", "r1_twist_2strand", "identity_2"),
    ("RII", "r2_pair", "identity_2"),
    ("RIII", "r3_left", "r3_right"),
]

CLOSURE_INVARIANCE_PAIRS: list[tuple[str, str, str]] = [
    ("RI", "r1_twist", "identity_1"),
    ("RI", "r1_twist_2strand", "identity_2"),
    ("RII", "r2_pair", "identity_2"),
]


def corpus_names() -> list[str]:
    return sorted(CORPUS)


def corpus_tangle(name: str) -> TangleDiagram:
    if name not in CORPUS:
        raise KeyError(f"no corpus entry named {name!r}")
    return parse_diagram(CORPUS[name])
