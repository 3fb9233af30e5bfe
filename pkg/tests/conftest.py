"""Shared generators for the test suite: a zoo of chain maps with varied
classification behavior, composable pairs, and towers with tail policies."""

import random

import pytest

from prochain.chain import (ChainComplex, ChainMap, chain_map, direct_sum_complex,
                            identity_map, multiplication_map, random_complex,
                            random_null_homotopic, zero_complex, zero_map)
from prochain.exactalg.ring import ZZ, RingTag
from prochain.pro import TailPolicy, Tower, constant_tower, level_map
from prochain.tstruct import truncate_above, truncate_below_free


def perturb(rng: random.Random, f: ChainMap) -> ChainMap:
    """Add a null-homotopic map; classification is unchanged but the
    matrices stop being block-shaped."""
    return f + random_null_homotopic(rng, f.source, f.target)


def random_map_into(rng: random.Random, B: ChainComplex):
    """A map f: A -> B with varied connectivity."""
    kind = rng.randrange(4)
    if kind == 0:
        f = multiplication_map(B, rng.choice([0, 1, 2, 3, 6]))
    elif kind == 1:
        k = rng.randint(B.lo - 1, B.hi + 1)
        _, f = truncate_above(B, k)
    elif kind == 2:
        W = random_complex(rng.randrange(2 ** 30), B.ring, B.lo, B.hi, 2)
        S, ia, ib, pa, pb = direct_sum_complex(B, W)
        f = pa
    else:
        f = zero_map(random_complex(rng.randrange(2 ** 30), B.ring,
                                    B.lo, B.hi, 1), B)
    if rng.random() < 0.5:
        f = perturb(rng, f)
    return f


def random_map_out(rng: random.Random, B: ChainComplex):
    """A map g: B -> C with varied coconnectivity."""
    kind = rng.randrange(4)
    if kind == 0:
        g = multiplication_map(B, rng.choice([0, 1, 2, 3, 6]))
    elif kind == 1:
        k = rng.randint(B.lo - 1, B.hi + 1)
        _, g = truncate_below_free(B, k)
    elif kind == 2:
        W = random_complex(rng.randrange(2 ** 30), B.ring, B.lo, B.hi, 2)
        S, ia, ib, pa, pb = direct_sum_complex(B, W)
        g = ia
    else:
        g = zero_map(B, random_complex(rng.randrange(2 ** 30), B.ring,
                                       B.lo, B.hi, 1))
    if rng.random() < 0.5:
        g = perturb(rng, g)
    return g


def random_composable_pair(rng: random.Random, ring: RingTag = ZZ,
                           lo: int = -2, hi: int = 2, max_rank: int = 2):
    """(f: A -> B, g: B -> C) through a shared random middle complex."""
    B = random_complex(rng.randrange(2 ** 30), ring, lo, hi, max_rank)
    return random_map_into(rng, B), random_map_out(rng, B)


def random_chain_tower(rng: random.Random, ring: RingTag = ZZ,
                       lo: int = -2, hi: int = 2, max_rank: int = 2) -> Tower:
    """A ConstantFrom tower of complexes with a random head."""
    X = random_complex(rng.randrange(2 ** 30), ring, lo, hi, max_rank)
    depth = rng.randint(0, 2)
    entries = [X]
    structure = []
    for _ in range(depth):
        kind = rng.randrange(3)
        if kind == 0:
            m = multiplication_map(X, rng.choice([0, 1, 2, 3]))
        elif kind == 1:
            m = random_null_homotopic(rng, X, X)
        else:
            m = identity_map(X)
        structure.append(m)
        entries.append(X)
    return Tower(tuple(entries), tuple(structure),
                 TailPolicy.constant_from(depth))
