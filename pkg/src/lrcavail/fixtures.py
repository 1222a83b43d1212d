"""Ready-made codes for the worked instances.

``example1_code``    the hand-written (7, 3, 2, 2) binary code
``code17``           split RS parities, (N=11, k=9, r=3, t=2), AG(2,3) groups, GF(16)
``code30``           split RS parities, (N=20, k=15, r=3, t=2), Kirkman groups, GF(32)
``code11``           Gabidulin, all-symbol, (N=6, k=4, r=2, t=2), AG(2,2) groups, GF(2^7)
"""

from __future__ import annotations

import functools

import numpy as np

from .designs import (
    MembershipMatrix,
    build_affine_design,
    build_kirkman15,
    design_to_membership,
)
from .gf import FieldSpec, gf2
from .lrc import LrcCode, construction1, construction2
from .mds import GeneratorMatrix, gabidulin, systematic_rs

EXAMPLE1_GROUPS = {
    0: ((3,), (1, 4)),
    1: ((0, 4), (2, 5)),
    2: ((1, 5), (0, 6)),
}

# 3 x 4 membership matrix of the (7, 3, 2, 2) example: local groups
# {1,4}, {1,2,5}, {2,3,6}, {1,3,7} restricted to the systematic symbols.
EXAMPLE1_R = np.array([
    [1, 1, 0, 1],
    [0, 1, 1, 0],
    [0, 0, 1, 1],
])


def example1_membership() -> MembershipMatrix:
    return MembershipMatrix.from_dense(EXAMPLE1_R, r=2)


def example1_code() -> LrcCode:
    """c = (m1, m2, m3, m1, m1+m2, m2+m3, m1+m3) over GF(2)."""
    G = np.array([
        [1, 0, 0, 1, 1, 0, 1],
        [0, 1, 0, 0, 1, 1, 0],
        [0, 0, 1, 0, 0, 1, 1],
    ])
    return LrcCode(
        kind="example1", k=3, r=2, t=2,
        generator=GeneratorMatrix(FieldSpec(2), G),
        systematic=(0, 1, 2), global_parity=(),
        local1=((3, 4, 5, 6),), local2=(),
        groups=dict(EXAMPLE1_GROUPS),
        local_supports={3: (0,), 4: (0, 1), 5: (1, 2), 6: (0, 2)},
        membership=example1_membership(),
    )


@functools.lru_cache(maxsize=None)
def code17() -> LrcCode:
    R = design_to_membership(build_affine_design(3), 2)
    return construction1(systematic_rs(gf2(4), 13, 9), R, 3, 2)


@functools.lru_cache(maxsize=None)
def code30() -> LrcCode:
    R = design_to_membership(build_kirkman15(), 2)
    return construction1(systematic_rs(gf2(5), 22, 15), R, 3, 2)


@functools.lru_cache(maxsize=None)
def code11() -> LrcCode:
    R = design_to_membership(build_affine_design(2), 2)
    return construction2(gabidulin(gf2(7), 2, 7, 4), R, 2, 2)
