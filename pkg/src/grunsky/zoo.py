"""Named configurations: a battery of certified riggings, Moebius test
transforms, and pre-Schwarzian families used by the checks and the CLI."""

from __future__ import annotations

import numpy as np

from .maps import (
    KINDS,
    ConformalMapModel as F,
    MobiusTransform,
    PreSchwarzianFamily,
    Rigging,
    validate_rigging,
)
from .operator import series_order


def catalog() -> str:
    """Plain-text table of the available map kinds."""
    rows = [("kind", "parameter", "constraint", "map")]
    rows += [(k, *v[:2], v[2]) for k, v in KINDS.items()]
    widths = [max(len(r[c]) for r in rows) for c in range(4)]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows]
    return "\n".join(lines)


def battery() -> dict[str, Rigging]:
    """Certified riggings with n = 1..4 mixing every closed-form kind."""
    w = np.exp(2j * np.pi / 3)
    configs = {
        "single_quadratic": [F.quadratic(0.3)],
        "single_joukowski": [F.joukowski_ellipse(0.5 + 0.2j, 1 - 1j)],
        "affine_pair": [F.affine_disk(1, 0), F.affine_disk(1, 3)],
        "quadratic_affine": [F.quadratic(0.1, 0), F.affine_disk(1, 4)],
        "mixed_pair": [F.quadratic(0.25j, 0), F.joukowski_ellipse(0.4, 2.6 + 0.8j)],
        "tight_pair": [F.quadratic(0.45, 0), F.quadratic(-0.45, 3.2)],
        "affine_triple": [F.affine_disk(0.4, 0), F.affine_disk(0.4, 1), F.affine_disk(0.4, -1)],
        "mixed_triple": [F.quadratic(0.2, 0), F.joukowski_ellipse(0.3j, 3),
                         F.affine_disk(0.7, -2.5j)],
        "rotated_triple": [F.quadratic(0.3 * w**k, 1.9 * w**k) for k in range(3)],
        "zoo_quad": [F.quadratic(0.2, 0), F.quadratic(-0.1j, 3),
                     F.joukowski_ellipse(0.4, -3), F.affine_disk(0.8, 3j)],
        "ring_quad": [F.affine_disk(0.6, 2 * 1j**k) if k % 2 else F.quadratic(0.15 * 1j**k, 2 * 1j**k)
                      for k in range(4)],
    }
    return {name: validate_rigging(maps) for name, maps in configs.items()}


def default_transforms(rigging: Rigging) -> dict[str, MobiusTransform]:
    """Five transforms admissible for ``rigging``: a dilation, a translation,
    an inversion and two general transforms, all with poles well outside
    every image."""
    theta = 2 * np.pi * np.arange(256) / 256
    reach = max(float(np.max(np.abs(m(np.exp(1j * theta))))) for m in rigging.maps)
    far = (reach + 1.5) * np.exp(0.7j)
    far2 = (reach + 2.5) * np.exp(-2.1j)
    return {
        "dilation": MobiusTransform.dilation(2 + 1j),
        "translation": MobiusTransform.translation(1 - 2j),
        "inversion": MobiusTransform(0, 1, 1, -far),
        "general": MobiusTransform(1, 2j, 1, -far2),
        "rotation_inversion": MobiusTransform(0, 1j, 1, -far) @ MobiusTransform(np.exp(0.3j), 0.5, 0, 1),
    }


def families(N: int) -> list[tuple[str, Rigging, int, PreSchwarzianFamily]]:
    """Three pre-Schwarzian lines through battery riggings, as
    ``(name, rigging, index, family)``."""
    order = series_order(N)
    pair = validate_rigging([F.quadratic(0.2, 0), F.joukowski_ellipse(0.3 + 0.1j, 2.8 + 0.5j)])
    triple = validate_rigging([F.quadratic(0.2, 0), F.joukowski_ellipse(0.3j, 3),
                               F.affine_disk(0.7, -2.5j)])
    return [
        ("quadratic_direction_z", pair, 0,
         PreSchwarzianFamily.from_map(pair.maps[0], [0, 1], 0, order)),
        ("joukowski_constant_and_scale", pair, 1,
         PreSchwarzianFamily.from_map(pair.maps[1], [0.5], 0.3, order)),
        ("affine_in_triple", triple, 2,
         PreSchwarzianFamily.from_map(triple.maps[2], [0, 0, 0.8j], 0.2j, order)),
    ]
