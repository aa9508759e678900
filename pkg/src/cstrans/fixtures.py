"""The built-in fixture set used by the CLI's ``--fixtures standard``.

Point masses, the plus/minus dipole, Möbius involutions at a handful of
base points, a few polynomial self-maps, and the squaring map.  Shipped in
the same shape as external fixture files so acceptance runs need no files
on disk.
"""

from __future__ import annotations

import math

STANDARD_MEASURES: list[list[dict]] = [
    # index 0: unit point mass at 1
    [{"angle": 0.0, "re": 1.0, "im": 0.0}],
    # index 1: unit point mass at i
    [{"angle": math.pi / 2, "re": 1.0, "im": 0.0}],
    # index 2: dipole delta_1 - delta_{-1}
    [{"angle": 0.0, "re": 1.0, "im": 0.0}, {"angle": math.pi, "re": -1.0, "im": 0.0}],
    # index 3: balanced pair (1/2, 1/2)
    [{"angle": 0.0, "re": 0.5, "im": 0.0}, {"angle": math.pi, "re": 0.5, "im": 0.0}],
    # index 4: delta_1 + delta_{-1}
    [{"angle": 0.0, "re": 1.0, "im": 0.0}, {"angle": math.pi, "re": 1.0, "im": 0.0}],
]

STANDARD_SELF_MAPS: list[dict] = [
    {"kind": "mobius", "a": [0.0, 0.0]},        # 0
    {"kind": "mobius", "a": [0.25, 0.0]},       # 1
    {"kind": "mobius", "a": [0.5, 0.0]},        # 2
    {"kind": "mobius", "a": [0.75, 0.0]},       # 3
    {"kind": "polynomial", "coeffs": [[0.0, 0.0], [1.0, 0.0]]},               # 4: identity
    {"kind": "polynomial", "coeffs": [[0.0, 0.0], [0.5, 0.0]]},               # 5: z/2
    {"kind": "polynomial", "coeffs": [[0.25, 0.0], [0.0, 0.0], [0.5, 0.0]]},  # 6
    {"kind": "polynomial", "coeffs": [[0.0, 0.0], [0.0, 0.0], [1.0, 0.0]]},   # 7: z^2
    # 8: the base-point factor of map 6, a composed map fixing 0
    {
        "kind": "composed",
        "outer_a": [0.25, 0.0],
        "inner": {"kind": "polynomial", "coeffs": [[0.25, 0.0], [0.0, 0.0], [0.5, 0.0]]},
    },
]

_STANDARD_CASES: dict[str, list[dict]] = {
    "verify-bound": [{"measure": 0, "self_map": j} for j in range(len(STANDARD_SELF_MAPS))]
    + [{"measure": 3, "self_map": 6}, {"measure": 2, "self_map": 2}],
    "verify-lemma2": [{"measure": 0, "a": [a, 0.0]} for a in (0.0, 0.25, 0.5, 0.75)]
    + [{"measure": 2, "a": [0.5, 0.0]}],
    # base-point-fixing maps only: identity, z/2, z^2, and a factored psi
    "verify-lemma1": [{"measure": 0, "self_map": j} for j in (4, 5, 7, 8)],
    "factorize": [{"self_map": j} for j in range(len(STANDARD_SELF_MAPS))],
    "kernel-compare": [
        {"a": [0.5, 0.0], "h": [[1.0, 0.0]], "zeta_angle": 0.0, "r": 0.9},
        {"a": [0.5, 0.0], "h": [[0.0, 0.0], [1.0, 0.0]], "zeta_angle": math.pi, "r": 0.99},
        {"a": [0.25, 0.0], "h": [[0.5, 0.0], [0.25, 0.25], [0.0, -0.25]], "zeta_angle": 1.0, "r": 0.5},
        {"a": [0.0, 0.6], "h": [[0.25, 0.0], [0.5, 0.0]], "zeta_angle": 2.5, "r": 0.9},
    ],
    "norm-estimate": [{"measure": j} for j in range(len(STANDARD_MEASURES))],
    "sharpness-scan": [
        {"a_values": [round(0.1 * k, 1) for k in range(10)], "degree_cap": 6}
    ],
}


def standard_fixtures() -> dict:
    """A deep copy of the standard fixture document."""
    import copy

    return copy.deepcopy(
        {
            "measures": STANDARD_MEASURES,
            "self_maps": STANDARD_SELF_MAPS,
            "cases": _STANDARD_CASES,
        }
    )
