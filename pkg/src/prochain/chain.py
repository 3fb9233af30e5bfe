"""Bounded chain complexes of free modules, chain maps, cones, and hom complexes.

Complexes are immutable and hashable: ranks and differentials are stored in
degree-indexed tuples over a support interval [lo, hi].  Every module is
free; torsion only ever appears in homology values.  The graded bracket
[X,Y]_n is the degree-n homology of the hom complex, which computes maps in
the derived category because sources are bounded complexes of frees.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Optional, Sequence

from .errors import RingMismatch
from .exactalg.groups import (FgAbGroup, GroupHom, group_from_presentation,
                              hom, trivial_group)
from .exactalg.matrices import IntMatrix, kernel_basis, snf, solve
from .exactalg.ring import RingTag, ZZ, check_same_ring


@dataclass(frozen=True)
class ChainComplex:
    ring: RingTag
    lo: int
    hi: int                    # support interval; ranks vanish outside
    ranks: tuple               # ranks[i] = rank in degree lo + i
    diffs: tuple               # diffs[i]: degree lo+i+1 -> lo+i, shape ranks[i] x ranks[i+1]

    # -- access -------------------------------------------------------------

    def rank(self, n: int) -> int:
        if self.lo <= n <= self.hi:
            return self.ranks[n - self.lo]
        return 0

    def diff(self, n: int) -> IntMatrix:
        """The differential X_n -> X_{n-1} (zero matrix outside the support)."""
        if self.lo + 1 <= n <= self.hi:
            return self.diffs[n - self.lo - 1]
        return IntMatrix.zeros(self.rank(n - 1), self.rank(n), self.ring)

    @property
    def degrees(self):
        return range(self.lo, self.hi + 1)

    @property
    def is_zero(self) -> bool:
        return all(r == 0 for r in self.ranks)

    def total_rank(self) -> int:
        return sum(self.ranks)

    def __str__(self):
        chunks = [f"{n}:{self.rank(n)}" for n in self.degrees if self.rank(n)]
        return f"Complex({self.ring}; " + " ".join(chunks) + ")"


def make_complex(ring: RingTag, ranks: Dict[int, int],
                 diffs: Dict[int, IntMatrix]) -> ChainComplex:
    """Assemble and validate a complex from degree->rank and degree->matrix maps."""
    nonzero = [n for n, r in ranks.items() if r > 0]
    if not nonzero:
        return ChainComplex(ring, 0, 0, (0,), ())
    lo, hi = min(nonzero), max(nonzero)
    rk = tuple(ranks.get(n, 0) for n in range(lo, hi + 1))
    ds = []
    for n in range(lo + 1, hi + 1):
        d = diffs.get(n)
        if d is None:
            d = IntMatrix.zeros(rk[n - 1 - lo], rk[n - lo], ring)
        assert d.shape == (rk[n - 1 - lo], rk[n - lo]), \
            f"differential at degree {n} has shape {d.shape}"
        ds.append(IntMatrix(d.rows, d.cols,
                            tuple(ring.reduce(x) for x in d.entries), ring))
    X = ChainComplex(ring, lo, hi, rk, tuple(ds))
    assert validate(X), "d o d != 0"
    return X


def zero_complex(ring: RingTag = ZZ) -> ChainComplex:
    return ChainComplex(ring, 0, 0, (0,), ())


def free_one_term(ring: RingTag, degree: int, rank: int = 1) -> ChainComplex:
    """A free module concentrated in one degree (the sphere Z[degree])."""
    if rank == 0:
        return zero_complex(ring)
    return ChainComplex(ring, degree, degree, (rank,), ())


def moore_complex(m: int, degree: int = 0, ring: RingTag = ZZ) -> ChainComplex:
    """ring --m--> ring in degrees (degree+1, degree); homology ring/m at degree."""
    return make_complex(ring, {degree: 1, degree + 1: 1},
                        {degree + 1: IntMatrix.from_rows([[m]], ring)})


def validate(X: ChainComplex) -> bool:
    for n in range(X.lo + 2, X.hi + 1):
        if not (X.diff(n - 1) @ X.diff(n)).is_zero:
            return False
    return True


@dataclass(frozen=True)
class ChainMap:
    source: ChainComplex
    target: ChainComplex
    comps: tuple  # comps[i]: component in degree lo+i, lo = min(src.lo, tgt.lo)

    @property
    def lo(self) -> int:
        return min(self.source.lo, self.target.lo)

    def comp(self, n: int) -> IntMatrix:
        i = n - self.lo
        if 0 <= i < len(self.comps):
            return self.comps[i]
        return IntMatrix.zeros(self.target.rank(n), self.source.rank(n),
                               self.source.ring)

    def compose(self, other: "ChainMap") -> "ChainMap":
        """self o other."""
        assert other.target == self.source
        return chain_map(other.source, self.target,
                         {n: self.comp(n) @ other.comp(n)
                          for n in range(min(self.lo, other.lo),
                                         max(self.source.hi, other.source.hi,
                                             self.target.hi) + 1)})

    def __add__(self, other: "ChainMap") -> "ChainMap":
        assert self.source == other.source and self.target == other.target
        return chain_map(self.source, self.target,
                         {n: self.comp(n) + other.comp(n)
                          for n in range(self.lo, max(self.source.hi, self.target.hi) + 1)})

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        assert self.source == other.source and self.target == other.target
        return chain_map(self.source, self.target,
                         {n: self.comp(n) - other.comp(n)
                          for n in range(self.lo, max(self.source.hi, self.target.hi) + 1)})

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.comps)

    def equal(self, other: "ChainMap") -> bool:
        return (self.source == other.source and self.target == other.target
                and all(self.comp(n).entries == other.comp(n).entries
                        for n in range(min(self.lo, other.lo),
                                       max(self.source.hi, self.target.hi) + 1)))


def chain_map(source: ChainComplex, target: ChainComplex,
              comps: Dict[int, IntMatrix], check: bool = True) -> ChainMap:
    check_same_ring(source, target)
    ring = source.ring
    lo = min(source.lo, target.lo)
    hi = max(source.hi, target.hi)
    cs = []
    for n in range(lo, hi + 1):
        c = comps.get(n)
        if c is None:
            c = IntMatrix.zeros(target.rank(n), source.rank(n), ring)
        assert c.shape == (target.rank(n), source.rank(n)), \
            f"component at degree {n} has shape {c.shape}"
        cs.append(IntMatrix(c.rows, c.cols,
                            tuple(ring.reduce(x) for x in c.entries), ring))
    f = ChainMap(source, target, tuple(cs))
    if check:
        assert is_chain_map(f), "components do not commute with differentials"
    return f


def is_chain_map(f: ChainMap) -> bool:
    lo = min(f.source.lo, f.target.lo)
    hi = max(f.source.hi, f.target.hi)
    for n in range(lo + 1, hi + 1):
        left = f.target.diff(n) @ f.comp(n)
        right = f.comp(n - 1) @ f.source.diff(n)
        if left.entries != right.entries:
            return False
    return True


def identity_map(X: ChainComplex) -> ChainMap:
    return chain_map(X, X, {n: IntMatrix.identity(X.rank(n), X.ring)
                            for n in X.degrees}, check=False)


def zero_map(X: ChainComplex, Y: ChainComplex) -> ChainMap:
    return chain_map(X, Y, {}, check=False)


def multiplication_map(X: ChainComplex, m: int) -> ChainMap:
    return chain_map(X, X, {n: IntMatrix.identity(X.rank(n), X.ring).scale(m)
                            for n in X.degrees})


# ---------------------------------------------------------------------------
# Shift, cone, direct sum
# ---------------------------------------------------------------------------

def shift(X: ChainComplex, k: int) -> ChainComplex:
    """(Sigma^k X)_n = X_{n-k}; differentials pick up the sign (-1)^k."""
    if k == 0 or X.is_zero:
        return X if k == 0 else zero_complex(X.ring)
    sign = 1 if k % 2 == 0 else -1
    ranks = {n + k: X.rank(n) for n in X.degrees}
    diffs = {n + k: X.diff(n).scale(sign) for n in range(X.lo + 1, X.hi + 1)}
    return make_complex(X.ring, ranks, diffs)


def shift_map(f: ChainMap, k: int) -> ChainMap:
    return chain_map(shift(f.source, k), shift(f.target, k),
                     {n + k: f.comp(n) for n in range(f.lo, max(f.source.hi, f.target.hi) + 1)})


def direct_sum_complex(A: ChainComplex, B: ChainComplex):
    """A (+) B with the four canonical maps (incl_A, incl_B, proj_A, proj_B)."""
    check_same_ring(A, B)
    ring = A.ring
    lo, hi = min(A.lo, B.lo), max(A.hi, B.hi)
    ranks = {n: A.rank(n) + B.rank(n) for n in range(lo, hi + 1)}
    diffs = {}
    for n in range(lo + 1, hi + 1):
        da, db = A.diff(n), B.diff(n)
        rows = []
        for i in range(da.rows):
            rows.append(list(da.row(i)) + [0] * db.cols)
        for i in range(db.rows):
            rows.append([0] * da.cols + list(db.row(i)))
        diffs[n] = IntMatrix.from_rows(rows, ring, cols=da.cols + db.cols)
    S = make_complex(ring, ranks, diffs)

    def block(n, which):
        ra, rb = A.rank(n), B.rank(n)
        m = [[0] * (ra if which == 'a' else rb) for _ in range(ra + rb)]
        off = 0 if which == 'a' else ra
        for i in range(ra if which == 'a' else rb):
            m[off + i][i] = 1
        return IntMatrix.from_rows(m, ring, cols=(ra if which == 'a' else rb))

    incl_a = chain_map(A, S, {n: block(n, 'a') for n in range(lo, hi + 1)})
    incl_b = chain_map(B, S, {n: block(n, 'b') for n in range(lo, hi + 1)})
    proj_a = chain_map(S, A, {n: block(n, 'a').transpose() for n in range(lo, hi + 1)})
    proj_b = chain_map(S, B, {n: block(n, 'b').transpose() for n in range(lo, hi + 1)})
    return S, incl_a, incl_b, proj_a, proj_b


def cone(f: ChainMap):
    """Mapping cone C(f)_n = Y_n (+) X_{n-1}, with inclusion of Y and
    projection onto shift(X, 1)."""
    X, Y = f.source, f.target
    ring = X.ring
    lo = min(Y.lo, X.lo + 1)
    hi = max(Y.hi, X.hi + 1)
    ranks = {n: Y.rank(n) + X.rank(n - 1) for n in range(lo, hi + 1)}
    diffs = {}
    for n in range(lo + 1, hi + 1):
        dy = Y.diff(n)
        fx = f.comp(n - 1)
        dx = X.diff(n - 1)
        top = dy.hstack(fx)                       # Y_n (+) X_{n-1} -> Y_{n-1}
        bottom = IntMatrix.zeros(dx.rows, dy.cols, ring).hstack(-dx)
        diffs[n] = top.vstack(bottom)
    C = make_complex(ring, ranks, diffs)

    incl = chain_map(Y, C, {n: IntMatrix.identity(Y.rank(n), ring).vstack(
        IntMatrix.zeros(X.rank(n - 1), Y.rank(n), ring)) for n in range(lo, hi + 1)})
    SX = shift(X, 1)
    proj = chain_map(C, SX, {n: IntMatrix.zeros(X.rank(n - 1), Y.rank(n), ring).hstack(
        IntMatrix.identity(X.rank(n - 1), ring)) for n in range(lo, hi + 1)})
    return C, incl, proj


def cone_functor_map(f: ChainMap, g: ChainMap, alpha: ChainMap, xi: ChainMap) -> ChainMap:
    """cone(f) -> cone(g) for a strictly commuting square xi o f = g o alpha."""
    assert xi.compose(f).equal(g.compose(alpha))
    Cf, _, _ = cone(f)
    Cg, _, _ = cone(g)
    ring = f.source.ring
    comps = {}
    lo = min(Cf.lo, Cg.lo)
    hi = max(Cf.hi, Cg.hi)
    for n in range(lo, hi + 1):
        xi_n = xi.comp(n)
        al = alpha.comp(n - 1)
        top = xi_n.hstack(IntMatrix.zeros(xi_n.rows, al.cols, ring))
        bot = IntMatrix.zeros(al.rows, xi_n.cols, ring).hstack(al)
        comps[n] = top.vstack(bot)
    return chain_map(Cf, Cg, comps)


# ---------------------------------------------------------------------------
# Homology
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HomologyData:
    """H_n of a complex plus decoding of canonical generators to cycles."""

    group: FgAbGroup
    cycles: IntMatrix  # rank(n) x k: lattice basis of ker d_n

    def decode(self, vec: Sequence[int]) -> tuple:
        z = self.group.from_canonical.apply(vec)
        return self.cycles.apply(z)

    def encode(self, chain_vec: Sequence[int]) -> tuple:
        col = IntMatrix.from_columns([list(chain_vec)], self.cycles.rows,
                                     self.cycles.ring)
        sol = solve(self.cycles, col)
        assert sol is not None, "vector is not a cycle"
        w = tuple(sol[i, 0] for i in range(self.cycles.cols))
        return self.group.reduce(self.group.to_canonical.apply(w))


@lru_cache(maxsize=None)
def homology_data(X: ChainComplex, n: int) -> HomologyData:
    ring = X.ring
    if X.rank(n) == 0:
        return HomologyData(trivial_group(ring), IntMatrix.zeros(0, 0, ring))
    K = kernel_basis(X.diff(n))
    B = X.diff(n + 1)
    expr = solve(K, B)
    assert expr is not None, "boundaries must be cycles"
    grp = group_from_presentation(expr)
    return HomologyData(grp, K)


def homology(X: ChainComplex, n: int) -> FgAbGroup:
    return homology_data(X, n).group


def homology_support(X: ChainComplex) -> tuple:
    degs = [n for n in range(X.lo, X.hi + 1) if not homology(X, n).is_trivial]
    return (min(degs), max(degs)) if degs else None


def is_acyclic(X: ChainComplex) -> bool:
    return homology_support(X) is None


def induced_homology_map(f: ChainMap, n: int) -> GroupHom:
    src = homology_data(f.source, n)
    tgt = homology_data(f.target, n)
    cols = []
    for j in range(src.group.ngens):
        gen = [0] * src.group.ngens
        gen[j] = 1
        cyc = src.decode(gen)
        img = f.comp(n).apply(cyc)
        cols.append(tgt.encode(img))
    m = IntMatrix.from_columns(cols, tgt.group.ngens, f.source.ring)
    return hom(src.group, tgt.group, m)


def is_quasi_iso(f: ChainMap) -> bool:
    C, _, _ = cone(f)
    return is_acyclic(C)


def connecting_homology_map(f: ChainMap, n: int) -> GroupHom:
    """The boundary map H_n(cone f) -> H_{n-1}(source f) of the cone
    sequence: project a cycle to its source component and re-encode."""
    C, _, _ = cone(f)
    src = homology_data(C, n)
    tgt = homology_data(f.source, n - 1)
    rY = f.target.rank(n)
    cols = []
    for j in range(src.group.ngens):
        gen = [0] * src.group.ngens
        gen[j] = 1
        vec = src.decode(gen)
        cols.append(tgt.encode(vec[rY:]))
    m = IntMatrix.from_columns(cols, tgt.group.ngens, f.source.ring)
    return hom(src.group, tgt.group, m)


def cone_les_exact(f: ChainMap) -> bool:
    """Exactness of ... -> H_n(Y) -> H_n(cone f) -> H_{n-1}(X) -> H_{n-1}(Y) -> ...
    at every spot, as subgroup equalities."""
    from .exactalg.groups import exact_at
    C, incl, _ = cone(f)
    lo = min(f.source.lo, C.lo) - 1
    hi = max(f.source.hi + 1, C.hi) + 1
    for n in range(lo, hi + 1):
        a = induced_homology_map(f, n)                  # H_n X -> H_n Y
        b = induced_homology_map(incl, n)               # H_n Y -> H_n C
        c = connecting_homology_map(f, n)               # H_n C -> H_{n-1} X
        a1 = induced_homology_map(f, n - 1)             # H_{n-1} X -> H_{n-1} Y
        if not (exact_at(a, b) and exact_at(b, c) and exact_at(c, a1)):
            return False
    return True


# ---------------------------------------------------------------------------
# Hom complex and the derived-hom oracle
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HomComplexView:
    """The complex with degree-n module (+)_k Hom(X_k, Y_{k+n}).

    Differential D(f) = d_Y o f - (-1)^n f o d_X.  Blocks in degree n are
    indexed by the source degree k; offsets() recovers the coordinate layout.
    """

    X: ChainComplex
    Y: ChainComplex
    complex: ChainComplex

    def block_degrees(self, n: int) -> list:
        X, Y = self.X, self.Y
        return [k for k in X.degrees if Y.rank(k + n) > 0 and X.rank(k) > 0]

    def offsets(self, n: int) -> dict:
        out = {}
        off = 0
        for k in self.block_degrees(n):
            size = self.X.rank(k) * self.Y.rank(k + n)
            out[k] = (off, size)
            off += size
        return out

    def vector_to_components(self, n: int, vec: Sequence[int]) -> dict:
        """Unpack a degree-n coordinate vector into matrices X_k -> Y_{k+n}."""
        comps = {}
        for k, (off, size) in self.offsets(n).items():
            rx, ry = self.X.rank(k), self.Y.rank(k + n)
            rows = [list(vec[off + r * rx: off + (r + 1) * rx]) for r in range(ry)]
            comps[k] = IntMatrix.from_rows(rows, self.X.ring, cols=rx)
        return comps

    def components_to_vector(self, n: int, comps: dict) -> tuple:
        vec = [0] * self.complex.rank(n)
        for k, (off, size) in self.offsets(n).items():
            m = comps.get(k)
            if m is None:
                continue
            for r in range(m.rows):
                row = m.row(r)
                for c in range(m.cols):
                    vec[off + r * m.cols + c] = row[c]
        return tuple(vec)


@lru_cache(maxsize=None)
def hom_complex(X: ChainComplex, Y: ChainComplex) -> HomComplexView:
    check_same_ring(X, Y)
    ring = X.ring
    lo = Y.lo - X.hi
    hi = Y.hi - X.lo

    def blocks(n):
        return [(k, X.rank(k), Y.rank(k + n)) for k in X.degrees
                if X.rank(k) > 0 and Y.rank(k + n) > 0]

    ranks = {}
    for n in range(lo, hi + 1):
        ranks[n] = sum(rx * ry for _, rx, ry in blocks(n))

    diffs = {}
    sizes = {n: ranks.get(n, 0) for n in range(lo - 1, hi + 2)}
    for n in range(lo + 1, hi + 1):
        src_blocks = blocks(n)
        tgt_blocks = blocks(n - 1)
        src_off = {}
        off = 0
        for k, rx, ry in src_blocks:
            src_off[k] = off
            off += rx * ry
        tgt_off = {}
        off = 0
        for k, rx, ry in tgt_blocks:
            tgt_off[k] = off
            off += rx * ry
        rows = sizes[n - 1]
        cols = sizes[n]
        M = [[0] * cols for _ in range(rows)]
        sign = -1 if n % 2 else 1  # the coefficient -(-1)^n
        for k, rx, ry in src_blocks:
            so = src_off[k]
            # post-composition with d_Y lands in target block k
            if k in tgt_off:
                A = Y.diff(k + n)  # Y_{k+n} -> Y_{k+n-1}
                to = tgt_off[k]
                for yp in range(A.rows):
                    for y in range(A.cols):
                        a = A[yp, y]
                        if a == 0:
                            continue
                        for x in range(rx):
                            M[to + yp * rx + x][so + y * rx + x] += a
            # pre-composition with d_X lands in target block k+1
            if k + 1 in tgt_off:
                B = X.diff(k + 1)  # X_{k+1} -> X_k
                to = tgt_off[k + 1]
                rx1 = X.rank(k + 1)
                for y in range(ry):
                    for c in range(B.rows):
                        for x1 in range(B.cols):
                            b = B[c, x1]
                            if b == 0:
                                continue
                            M[to + y * rx1 + x1][so + y * rx + c] += sign * b
        diffs[n] = IntMatrix.from_rows([[ring.reduce(v) for v in row] for row in M],
                                       ring, cols=cols)
    HC = make_complex(ring, ranks, diffs)
    return HomComplexView(X, Y, HC)


def derived_hom_data(X: ChainComplex, Y: ChainComplex, n: int):
    hc = hom_complex(X, Y)
    return hc, homology_data(hc.complex, n)


def derived_hom(X: ChainComplex, Y: ChainComplex, n: int) -> FgAbGroup:
    """[X,Y]_n, maps X -> Sigma^{-n} Y in the derived category."""
    _, data = derived_hom_data(X, Y, n)
    return data.group


def induced_map_on_derived_hom(a: ChainMap, b: ChainMap, n: int) -> GroupHom:
    """[a, b]: [X,Y]_n -> [X',Y']_n for a: X' -> X and b: Y -> Y'."""
    X, Y = b.source, a.target
    Xp, Yp = a.source, b.target
    hc_s, data_s = derived_hom_data(a.target, b.source, n)
    hc_t, data_t = derived_hom_data(a.source, b.target, n)
    cols = []
    for j in range(data_s.group.ngens):
        gen = [0] * data_s.group.ngens
        gen[j] = 1
        comps = hc_s.vector_to_components(n, data_s.decode(gen))
        out = {}
        for k in hc_t.block_degrees(n):
            acc = IntMatrix.zeros(Yp.rank(k + n), Xp.rank(k), Xp.ring)
            for ks, m in comps.items():
                # b o m o a : X'_k -> Y'_{k+n} needs ks == k on the source side
                if ks != k:
                    continue
                acc = acc + (b.comp(k + n) @ m @ a.comp(k))
            out[k] = acc
        vec = hc_t.components_to_vector(n, out)
        cols.append(data_t.encode(vec))
    m = IntMatrix.from_columns(cols, data_t.group.ngens, X.ring)
    return hom(data_s.group, data_t.group, m)


def shift_identification(X: ChainComplex, Z: ChainComplex, n: int) -> GroupHom:
    """The canonical iso [X, shift(Z,1)]_n -> [X, Z]_{n-1}.

    Both hom complexes share coordinates blockwise; only the differential's
    sign differs, so cycles and boundaries agree and the matrix is the
    coordinate identity.
    """
    SZ = shift(Z, 1)
    hc_s, data_s = derived_hom_data(X, SZ, n)
    hc_t, data_t = derived_hom_data(X, Z, n - 1)
    cols = []
    for j in range(data_s.group.ngens):
        gen = [0] * data_s.group.ngens
        gen[j] = 1
        vec = data_s.decode(gen)
        comps = hc_s.vector_to_components(n, vec)
        out = {k: m for k, m in comps.items()}
        tvec = hc_t.components_to_vector(n - 1, out)
        cols.append(data_t.encode(tvec))
    m = IntMatrix.from_columns(cols, data_t.group.ngens, X.ring)
    return hom(data_s.group, data_t.group, m)


# ---------------------------------------------------------------------------
# Random generator
# ---------------------------------------------------------------------------

def _random_unimodular(rng: random.Random, n: int, ring: RingTag):
    """A unimodular matrix and its exact inverse, as a short product of shears."""
    U = IntMatrix.identity(n, ring).to_lists()
    Ui = IntMatrix.identity(n, ring).to_lists()
    red = ring.reduce
    for _ in range(2 * n):
        kind = rng.randrange(3)
        if n < 2:
            break
        i, j = rng.sample(range(n), 2)
        if kind == 0:
            c = rng.choice([-2, -1, 1, 2])
            # row shear U[i] += c U[j]; inverse gets the opposite column op
            U[i] = [red(a + c * b) for a, b in zip(U[i], U[j])]
            for r in Ui:
                r[j] = red(r[j] - c * r[i])
        elif kind == 1:
            U[i], U[j] = U[j], U[i]
            for r in Ui:
                r[i], r[j] = r[j], r[i]
        else:
            U[i] = [red(-a) for a in U[i]]
            for r in Ui:
                r[i] = red(-r[i])
    return (IntMatrix.from_rows(U, ring, cols=n),
            IntMatrix.from_rows(Ui, ring, cols=n))


def random_complex(seed: int, ring: RingTag = ZZ, lo: int = -3, hi: int = 3,
                   max_rank: int = 3) -> ChainComplex:
    """A random valid complex: spheres and multiplication disks, conjugated
    by unimodular changes of basis.  d o d = 0 holds by construction."""
    rng = random.Random(seed)
    if max_rank == 0:
        return zero_complex(ring)
    ranks = {n: 0 for n in range(lo, hi + 1)}
    # summands: (kind, degree, multiplier)
    summands = []
    for n in range(lo, hi + 1):
        while ranks[n] < max_rank and rng.random() < 0.55:
            if n > lo and rng.random() < 0.55 and ranks[n - 1] < max_rank:
                m = rng.choice([1, 1, 2, 2, 3, 4, 6])
                if rng.random() < 0.3:
                    m = -m
                summands.append(("disk", n, m))
                ranks[n] += 1
                ranks[n - 1] += 1
            else:
                summands.append(("sphere", n, 0))
                ranks[n] += 1
    if not any(ranks.values()):
        return zero_complex(ring)
    # block differentials from the summand schedule
    slot = {n: 0 for n in ranks}
    diff_entries = {n: [[0] * ranks[n] for _ in range(ranks.get(n - 1, 0))]
                    for n in ranks if n > lo}
    for kind, n, m in summands:
        j = slot[n]
        slot[n] += 1
        if kind == "disk":
            i = slot[n - 1]
            slot[n - 1] += 1
            if n in diff_entries:
                diff_entries[n][i][j] = m
    diffs = {n: IntMatrix.from_rows(diff_entries[n], ring, cols=ranks[n])
             for n in diff_entries}
    # conjugate by unimodular changes of basis degreewise
    U = {}
    Ui = {}
    for n in ranks:
        U[n], Ui[n] = _random_unimodular(rng, ranks[n], ring)
    new_diffs = {}
    for n, d in diffs.items():
        new_diffs[n] = U[n - 1] @ d @ Ui[n]
    return make_complex(ring, ranks, new_diffs)


def random_null_homotopic(rng: random.Random, X: ChainComplex,
                          Y: ChainComplex) -> ChainMap:
    """d s + s d for a random degreewise map s of degree +1; always a chain map."""
    ring = X.ring
    s = {n: IntMatrix.from_rows(
        [[rng.randint(-2, 2) for _ in range(X.rank(n))]
         for _ in range(Y.rank(n + 1))], ring, cols=X.rank(n))
        for n in range(min(X.lo, Y.lo) - 1, max(X.hi, Y.hi) + 1)}
    comps = {}
    for n in range(min(X.lo, Y.lo), max(X.hi, Y.hi) + 1):
        comps[n] = (Y.diff(n + 1) @ s[n]) + (s[n - 1] @ X.diff(n))
    return chain_map(X, Y, comps)


def quasi_iso_thickening(rng: random.Random, Y: ChainComplex):
    """Y -> Y (+) cone(id_W) for a random W: an explicit quasi-isomorphism."""
    W = random_complex(rng.randrange(2 ** 30), Y.ring, Y.lo, Y.hi, 2)
    CW, _, _ = cone(identity_map(W))
    S, incl_y, _, _, _ = direct_sum_complex(Y, CW)
    return incl_y
