"""Named flag manifolds used throughout the checks."""

from __future__ import annotations

from .flagstruct import FlagManifold, flag_from_label

# name -> (Cartan label, black nodes)
CATALOG: dict[str, tuple[str, tuple[int, ...]]] = {
    "CP1": ("A1", (1,)),
    "CP2": ("A2", (1,)),
    "SU3/T": ("A2", (1, 2)),
    "Gr(2,4)": ("A3", (2,)),
    "Sp(2)/U(2)": ("C2", (1,)),
    "SO(5)/SO(2)xSO(3)": ("B2", (1,)),
    "SO(7)/SO(2)xSO(5)": ("B3", (1,)),
}


def catalog_flag(name: str) -> FlagManifold:
    label, black = CATALOG[name]
    return flag_from_label(label, black)


def catalog_flags() -> dict[str, FlagManifold]:
    return {name: catalog_flag(name) for name in CATALOG}


def is_projective(flag: FlagManifold) -> bool:
    """``CP^d``: type A with only the first node black."""
    return flag.alg.family == "A" and flag.black_positions == (1,)
