"""The standard truncation calculus on bounded complexes, made executable.

tau_{>= n} is the kernel subcomplex (free over a PID, so complexes stay
free); the below-truncation T_{<= n} is the mapping cone of its inclusion,
which keeps a free model at the cost of extra generators.  Classification of
maps into n-equivalences and co-n-equivalences reads off the homology
support of the mapping cone.  Factorization attaches free generators
(surjectivity disks anywhere, homology-killing cells in degrees >= n+1);
lifting solves the chain-homotopy correction globally as one exact linear
system, which succeeds because the relevant graded hom group vanishes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Optional, Tuple

from .chain import (ChainComplex, ChainMap, chain_map, cone,
                    cone_functor_map, derived_hom, free_one_term, homology,
                    homology_data, homology_support, identity_map,
                    induced_homology_map, make_complex, shift, zero_complex,
                    zero_map)
from .errors import PreconditionViolated
from .exactalg.groups import (FgAbGroup, GroupHom, is_injective,
                              is_isomorphism, is_surjective)
from .exactalg.matrices import IntMatrix, kernel_basis, snf, solve
from .exactalg.ring import RingTag

INF = math.inf
NEG_INF = -math.inf


# ---------------------------------------------------------------------------
# Truncations
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def truncate_above(X: ChainComplex, n: int) -> Tuple[ChainComplex, ChainMap]:
    """tau_{>= n} X as a subcomplex, with its inclusion into X.

    Degrees above n are copied; degree n becomes ker(d_n), free over a PID;
    degrees below vanish.  H_i agrees with X for i >= n and vanishes below.
    """
    ring = X.ring
    if n <= X.lo:
        return X, identity_map(X)
    if n > X.hi:
        Z = zero_complex(ring)
        return Z, zero_map(Z, X)
    K = kernel_basis(X.diff(n))
    ranks = {m: X.rank(m) for m in range(n + 1, X.hi + 1)}
    ranks[n] = K.cols
    diffs = {m: X.diff(m) for m in range(n + 2, X.hi + 1)}
    if X.rank(n + 1):
        into_kernel = solve(K, X.diff(n + 1))
        assert into_kernel is not None, "image of d must land in ker d"
        diffs[n + 1] = into_kernel
    T = make_complex(ring, ranks, diffs)
    comps = {m: IntMatrix.identity(X.rank(m), ring) for m in range(n + 1, X.hi + 1)}
    comps[n] = K
    incl = chain_map(T, X, comps)
    return T, incl


def truncate_above_map(f: ChainMap, n: int) -> ChainMap:
    """The restriction tau_{>= n} f; chain maps preserve kernel subcomplexes."""
    TS, incl_s = truncate_above(f.source, n)
    TT, incl_t = truncate_above(f.target, n)
    comps = {}
    for m in range(min(TS.lo, TT.lo), max(TS.hi, TT.hi) + 1):
        want = f.comp(m) @ incl_s.comp(m)
        sol = solve(incl_t.comp(m), want)
        assert sol is not None
        comps[m] = sol
    return chain_map(TS, TT, comps)


def truncation_step(X: ChainComplex, n: int) -> ChainMap:
    """The inclusion tau_{>= n+1} X -> tau_{>= n} X."""
    Tn1, incl1 = truncate_above(X, n + 1)
    Tn, incln = truncate_above(X, n)
    comps = {}
    for m in range(min(Tn1.lo, Tn.lo), max(Tn1.hi, Tn.hi) + 1):
        sol = solve(incln.comp(m), incl1.comp(m))
        assert sol is not None
        comps[m] = sol
    return chain_map(Tn1, Tn, comps)


@lru_cache(maxsize=None)
def truncate_below_free(X: ChainComplex, n: int) -> Tuple[ChainComplex, ChainMap]:
    """Free model of tau_{<= n} X: the cone on tau_{>= n+1} X -> X, with the
    anchor map X -> T_{<= n} X."""
    _, incl = truncate_above(X, n + 1)
    C, from_target, _ = cone(incl)
    return C, from_target


def truncate_below_map(f: ChainMap, n: int) -> ChainMap:
    """T_{<= n} f via cone functoriality on the truncation square."""
    _, incl_s = truncate_above(f.source, n + 1)
    _, incl_t = truncate_above(f.target, n + 1)
    return cone_functor_map(incl_s, incl_t, truncate_above_map(f, n + 1), f)


@dataclass(frozen=True)
class TruncationTower:
    """All truncations of one complex with strictly commuting structure maps."""

    base: ChainComplex
    n_lo: int
    n_hi: int
    below: dict          # n -> T_{<= n} X (free cone model)
    above: dict          # n -> tau_{>= n} X (kernel subcomplex)
    maps_below: dict     # n -> (T_{<= n} X -> T_{<= n-1} X)
    maps_above: dict     # n -> (tau_{>= n+1} X -> tau_{>= n} X)
    anchors_below: dict  # n -> (X -> T_{<= n} X)
    anchors_above: dict  # n -> (tau_{>= n} X -> X)


def truncation_tower(X: ChainComplex) -> TruncationTower:
    """Towers indexed over [lo(X)-1, hi(X)+1]; outside, truncation is X or 0."""
    n_lo, n_hi = X.lo - 1, X.hi + 1
    above = {}
    anchors_above = {}
    for n in range(n_lo, n_hi + 2):
        T, incl = truncate_above(X, n)
        above[n] = T
        anchors_above[n] = incl
    maps_above = {n: truncation_step(X, n) for n in range(n_lo, n_hi + 1)}
    below = {}
    anchors_below = {}
    for n in range(n_lo, n_hi + 1):
        C, anchor = truncate_below_free(X, n)
        below[n] = C
        anchors_below[n] = anchor
    maps_below = {}
    for n in range(n_lo + 1, n_hi + 1):
        maps_below[n] = cone_functor_map(
            anchors_above[n + 1], anchors_above[n],
            maps_above[n], identity_map(X))
    return TruncationTower(X, n_lo, n_hi, below, above, maps_below, maps_above,
                           anchors_below, anchors_above)


def heart_homology(X: ChainComplex, n: int) -> FgAbGroup:
    return homology(X, n)


def layer_complex(X: ChainComplex, n: int):
    """cone(tau_{>= n+1} X -> tau_{>= n} X): a free model of Sigma^n H_n X."""
    return cone(truncation_step(X, n))


def layer_triangle_check(X: ChainComplex, n: int) -> bool:
    """Homology of the layer is exactly H_n(X) in degree n and zero elsewhere."""
    L, _, _ = layer_complex(X, n)
    for m in range(L.lo, L.hi + 1):
        h = homology(L, m)
        if m == n:
            if not h.isomorphic(homology(X, n)):
                return False
        elif not h.is_trivial:
            return False
    return True


# ---------------------------------------------------------------------------
# Classification of maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MapClassification:
    max_n_equivalence: float     # largest n with f an n-equivalence, or +inf
    min_co_n_equivalence: float  # smallest n with f a co-n-equivalence, or -inf

    @property
    def is_weak_equivalence(self) -> bool:
        return self.max_n_equivalence == INF


def classify_map(f: ChainMap) -> MapClassification:
    """Homology support of the cone decides both thresholds: f is an
    n-equivalence iff H_i(cone f) = 0 for i <= n, and a co-n-equivalence iff
    H_i(cone f) = 0 for i > n."""
    C, _, _ = cone(f)
    support = homology_support(C)
    if support is None:
        return MapClassification(INF, NEG_INF)
    lo, hi = support
    return MapClassification(lo - 1, hi)


def is_n_equivalence(f: ChainMap, n: int) -> bool:
    return n <= classify_map(f).max_n_equivalence


def is_co_n_equivalence(f: ChainMap, n: int) -> bool:
    return n >= classify_map(f).min_co_n_equivalence


def classify_map_by_homology(f: ChainMap) -> MapClassification:
    """Independent characterization used for cross-checks: an n-equivalence
    induces isos on H_i for i < n and a surjection on H_n; dually for
    co-n-equivalences with injectivity at n."""
    lo = min(f.source.lo, f.target.lo) - 1
    hi = max(f.source.hi, f.target.hi) + 1
    max_n = INF
    for n in range(lo, hi + 1):
        h = induced_homology_map(f, n)
        if not is_isomorphism(h):
            max_n = n if is_surjective(h) else n - 1
            break
    min_co = NEG_INF
    for n in range(hi, lo - 1, -1):
        h = induced_homology_map(f, n)
        if not is_isomorphism(h):
            min_co = n if is_injective(h) else n + 1
            break
    return MapClassification(max_n, min_co)


# ---------------------------------------------------------------------------
# Cofibration / fibration tests
# ---------------------------------------------------------------------------

def is_degreewise_split_mono(f: ChainMap) -> bool:
    """Every component a split monomorphism (then the cokernel is free)."""
    for n in range(min(f.source.lo, f.target.lo), max(f.source.hi, f.target.hi) + 1):
        c = f.comp(n)
        s = snf(c)
        if s.rank != c.cols or any(d != 1 for d in s.invariant_factors):
            return False
    return True


def is_degreewise_surjection(f: ChainMap) -> bool:
    for n in range(min(f.source.lo, f.target.lo), max(f.source.hi, f.target.hi) + 1):
        c = f.comp(n)
        s = snf(c)
        if s.rank != c.rows:
            return False
        if not f.source.ring.is_field and any(d != 1 for d in s.invariant_factors):
            return False
    return True


def is_n_cofibration(f: ChainMap, n: int) -> bool:
    return is_degreewise_split_mono(f) and is_n_equivalence(f, n)


def is_co_n_fibration(f: ChainMap, n: int) -> bool:
    return is_degreewise_surjection(f) and is_co_n_equivalence(f, n)


def cokernel_complex(f: ChainMap) -> ChainComplex:
    """The free cokernel of a degreewise split mono, in complement bases."""
    assert is_degreewise_split_mono(f)
    ring = f.source.ring
    lo = min(f.source.lo, f.target.lo)
    hi = max(f.source.hi, f.target.hi)
    proj = {}
    sect = {}
    ranks = {}
    for m in range(lo, hi + 1):
        c = f.comp(m)
        s = snf(c)
        idx = list(range(s.rank, c.rows))
        proj[m] = s.U.take_rows(idx)
        sect[m] = s.Uinv.take_columns(idx)
        ranks[m] = len(idx)
    diffs = {m: proj[m - 1] @ f.target.diff(m) @ sect[m]
             for m in range(lo + 1, hi + 1)}
    return make_complex(ring, ranks, diffs)


def pushout_product_check(f: ChainMap, j: int) -> bool:
    """Shifting the cofiber of an n-cofibration by a sphere dimension j lands
    in homology degrees above n + j; true for every actual n-cofibration."""
    if not is_degreewise_split_mono(f):
        raise PreconditionViolated("not a cofibration")
    n = classify_map(f).max_n_equivalence
    if n == INF:
        return True
    C = cokernel_complex(f)
    S = shift(C, j)
    for m in range(S.lo, int(n) + j + 1):
        if not homology(S, m).is_trivial:
            return False
    return True


# ---------------------------------------------------------------------------
# Factorization: n-cofibration followed by co-n-fibration
# ---------------------------------------------------------------------------

class _CellState:
    """Z = X (+) attached cells, with p: Z -> Y, built incrementally.

    X occupies the leading coordinates of every degree and is never touched,
    so the inclusion stays a split mono with free cokernel.  Differentials
    and p-components are stored sparsely and materialized on snapshot.
    """

    def __init__(self, X: ChainComplex, f: ChainMap):
        self.ring = X.ring
        self.X = X
        self.Y = f.target
        self.ranks = {m: X.rank(m) for m in X.degrees}
        self.d_entries = {}  # m -> {(i, j): v} for d: Z_m -> Z_{m-1}
        for m in range(X.lo + 1, X.hi + 1):
            d = X.diff(m)
            self.d_entries[m] = {(i, j): d[i, j] for i in range(d.rows)
                                 for j in range(d.cols) if d[i, j]}
        self.p_entries = {}  # m -> {(i, j): v} for p: Z_m -> Y_m
        for m in range(min(X.lo, self.Y.lo), max(X.hi, self.Y.hi) + 1):
            c = f.comp(m)
            self.p_entries[m] = {(i, j): c[i, j] for i in range(c.rows)
                                 for j in range(c.cols) if c[i, j]}

    def rank(self, m):
        return self.ranks.get(m, 0)

    def attach(self, m, boundary, p_value):
        """New generator e in degree m with d(e) = boundary, p(e) = p_value."""
        j = self.rank(m)
        self.ranks[m] = j + 1
        de = self.d_entries.setdefault(m, {})
        for i, v in enumerate(boundary):
            if v:
                de[(i, j)] = v
        pe = self.p_entries.setdefault(m, {})
        for i, v in enumerate(p_value):
            if v:
                pe[(i, j)] = v

    def snapshot(self):
        ring = self.ring
        ranks = {m: r for m, r in self.ranks.items()}
        lo = min(list(ranks) + [self.Y.lo])
        hi = max(list(ranks) + [self.Y.hi])
        full = {m: ranks.get(m, 0) for m in range(lo, hi + 1)}
        diffs = {}
        for m in range(lo + 1, hi + 1):
            rows, cols = full[m - 1], full[m]
            M = [[0] * cols for _ in range(rows)]
            for (i, j), v in self.d_entries.get(m, {}).items():
                M[i][j] = v
            diffs[m] = IntMatrix.from_rows(M, ring, cols=cols)
        Z = make_complex(ring, full, diffs)
        pc = {}
        for m in range(lo, hi + 1):
            rows, cols = self.Y.rank(m), full[m]
            M = [[0] * cols for _ in range(rows)]
            for (i, j), v in self.p_entries.get(m, {}).items():
                M[i][j] = v
            pc[m] = IntMatrix.from_rows(M, ring, cols=cols) if rows else \
                IntMatrix.zeros(0, cols, ring)
        p = chain_map(Z, self.Y, pc)
        return Z, p


def factor_n(f: ChainMap, n: int) -> Tuple[ChainMap, ChainMap]:
    """Factor f = p o i with i an n-cofibration (split mono, free cokernel,
    an n-equivalence) and p a co-n-fibration (degreewise surjection and
    co-n-equivalence).

    Construction: for every degree where f is not surjective, attach one
    disk pair per target generator (u -> y, du -> dy); then, ascending from
    degree n+1, attach cells killing H_k(cone p).  Disk pairs contribute no
    homology to the cokernel and the killing cells sit in degrees >= n+1, so
    the inclusion is automatically an n-equivalence.
    """
    X, Y = f.source, f.target
    ring = X.ring
    state = _CellState(X, f)

    for m in range(Y.lo, Y.hi + 1):
        c = f.comp(m)
        s = snf(c)
        surjective = (s.rank == c.rows
                      and (ring.is_field or all(d == 1 for d in s.invariant_factors)))
        if surjective or Y.rank(m) == 0:
            continue
        dY = Y.diff(m)
        for g in range(Y.rank(m)):
            # disk pair: v in degree m-1 with p(v) = d(y_g), u in degree m
            yv = [0] * Y.rank(m)
            yv[g] = 1
            v_index = state.rank(m - 1)
            state.attach(m - 1, [0] * state.rank(m - 2), list(dY.column(g)))
            boundary = [0] * state.rank(m - 1)
            boundary[v_index] = 1
            state.attach(m, boundary, yv)

    guard = 0
    while True:
        guard += 1
        assert guard < 300, "cell attachment failed to terminate"
        Z, p = state.snapshot()
        C, _, _ = cone(p)
        bad = [k for k in range(max(n + 1, C.lo), C.hi + 1)
               if not homology(C, k).is_trivial]
        if not bad:
            break
        k = bad[0]
        data = homology_data(C, k)
        rY = p.target.rank(k)
        for jgen in range(data.group.ngens):
            gen = [0] * data.group.ngens
            gen[jgen] = 1
            vec = data.decode(gen)
            y = list(vec[:rY])
            z = [-v for v in vec[rY:]]
            state.attach(k, z, y)

    Z, p = state.snapshot()
    comps = {}
    for m in range(min(X.lo, Z.lo), max(X.hi, Z.hi) + 1):
        block = IntMatrix.identity(X.rank(m), ring)
        comps[m] = block.vstack(IntMatrix.zeros(Z.rank(m) - X.rank(m),
                                                X.rank(m), ring))
    i = chain_map(X, Z, comps)
    assert p.compose(i).equal(f), "factorization does not compose to f"
    assert is_n_cofibration(i, n), "left factor is not an n-cofibration"
    assert is_co_n_fibration(p, n), "right factor is not a co-n-fibration"
    return i, p


# ---------------------------------------------------------------------------
# Lifting
# ---------------------------------------------------------------------------

def find_lift(i: ChainMap, p: ChainMap, top: ChainMap, bottom: ChainMap,
              n: int) -> Optional[ChainMap]:
    """A lift h with h o i = top and p o h = bottom, both exactly.

    The naive degreewise candidate (top through a retraction of i, a section
    of p on a complement) satisfies both identities but is not a chain map;
    its defect is corrected by solving d c - c d = defect with c valued in
    ker(p) and vanishing on im(i).  The correction exists because the graded
    hom from coker(i) (homology >= n+1) to ker(p) (homology <= n-1) vanishes
    in the relevant degree.
    """
    if not is_n_cofibration(i, n):
        raise PreconditionViolated("i is not an n-cofibration")
    if not is_co_n_fibration(p, n):
        raise PreconditionViolated("p is not a co-n-fibration")
    if not bottom.compose(i).equal(p.compose(top)):
        raise PreconditionViolated("square does not commute")

    B = i.target
    Xc = p.source
    ring = B.ring
    lo = min(B.lo, Xc.lo)
    hi = max(B.hi, Xc.hi)

    h0 = {}
    kerbase = {}
    for m in range(lo, hi + 1):
        im = i.comp(m)
        s_i = snf(im)
        r = s_i.V @ s_i.U.take_rows(range(s_i.rank))  # retraction, r i = id
        pm = p.comp(m)
        sect = solve(pm, IntMatrix.identity(pm.rows, ring))
        assert sect is not None
        compl = IntMatrix.identity(B.rank(m), ring) - (im @ r)
        h0[m] = (top.comp(m) @ r) + (sect @ bottom.comp(m) @ compl)
        kerbase[m] = kernel_basis(pm)

    def h0c(m):
        return h0.get(m, IntMatrix.zeros(Xc.rank(m), B.rank(m), ring))

    delta = {m: (Xc.diff(m) @ h0c(m)) - (h0c(m - 1) @ B.diff(m))
             for m in range(lo, hi + 2)}

    var_index = {}
    nvars = 0
    for m in range(lo, hi + 1):
        var_index[m] = nvars
        nvars += kerbase[m].cols * B.rank(m)

    def var(m, a, b):
        return var_index[m] + a * B.rank(m) + b

    rows = []
    rhs = []
    # chain condition: d_X (kappa_m c_m) - (kappa_{m-1} c_{m-1}) d_B = delta_m
    for m in range(lo, hi + 2):
        dm = delta[m]
        if dm.rows == 0 or dm.cols == 0:
            if not dm.is_zero:
                return None
            continue
        dk = (Xc.diff(m) @ kerbase[m]) if m in var_index else None
        kb_prev = kerbase.get(m - 1)
        dB = B.diff(m)
        for rr in range(dm.rows):
            for cc in range(dm.cols):
                coeffs = {}
                if dk is not None:
                    for a in range(dk.cols):
                        v = dk[rr, a]
                        if v:
                            key = var(m, a, cc)
                            coeffs[key] = coeffs.get(key, 0) + v
                if kb_prev is not None and (m - 1) in var_index:
                    for a in range(kb_prev.cols):
                        v_out = kb_prev[rr, a]
                        if v_out == 0:
                            continue
                        for b in range(dB.rows):
                            w = dB[b, cc]
                            if w:
                                key = var(m - 1, a, b)
                                coeffs[key] = coeffs.get(key, 0) - v_out * w
                val = ring.reduce(dm[rr, cc])
                if not coeffs:
                    if val != 0:
                        return None
                    continue
                rows.append(coeffs)
                rhs.append(val)
    # side condition c_m i_m = 0 keeps h o i = top exact
    for m in range(lo, hi + 1):
        kb = kerbase[m]
        im = i.comp(m)
        for a in range(kb.cols):
            for cc in range(im.cols):
                coeffs = {}
                for b in range(im.rows):
                    v = im[b, cc]
                    if v:
                        key = var(m, a, b)
                        coeffs[key] = coeffs.get(key, 0) + v
                if coeffs:
                    rows.append(coeffs)
                    rhs.append(0)

    if nvars == 0:
        sol_entries = []
    else:
        M = [[0] * nvars for _ in rows]
        for ri, coeffs in enumerate(rows):
            for k, v in coeffs.items():
                M[ri][k] = v
        Mm = IntMatrix.from_rows(M, ring, cols=nvars) if rows else \
            IntMatrix.zeros(0, nvars, ring)
        Bm = IntMatrix.from_columns([rhs], len(rows), ring) if rows else \
            IntMatrix.zeros(0, 1, ring)
        sol = solve(Mm, Bm)
        if sol is None:
            return None
        sol_entries = [sol[kk, 0] for kk in range(nvars)]

    comps = {}
    for m in range(lo, hi + 1):
        kb = kerbase[m]
        if kb.cols:
            c = IntMatrix.from_rows(
                [[sol_entries[var(m, a, b)] for b in range(B.rank(m))]
                 for a in range(kb.cols)], ring, cols=B.rank(m))
            comps[m] = h0c(m) - (kb @ c)
        else:
            comps[m] = h0c(m)
    h = chain_map(B, Xc, comps)
    assert h.compose(i).equal(top)
    assert p.compose(h).equal(bottom)
    return h


# ---------------------------------------------------------------------------
# Cohomology with coefficients
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def coefficient_complex(A: FgAbGroup) -> ChainComplex:
    """Two-term free resolution of A in degrees 1, 0."""
    ring = A.ring
    t = len(A.invariant_factors)
    f = A.free_rank
    if t == 0:
        return free_one_term(ring, 0, f)
    d = IntMatrix.diagonal(A.invariant_factors, t + f, t, ring)
    return make_complex(ring, {0: t + f, 1: t}, {1: d})


def cohomology_with_coefficients(X: ChainComplex, A: FgAbGroup, p: int) -> FgAbGroup:
    """H^p(X; A) = [X, K(A)]_{-p}."""
    return derived_hom(X, coefficient_complex(A), -p)


def induced_map_on_cohomology(f: ChainMap, A: FgAbGroup, p: int) -> GroupHom:
    from .chain import induced_map_on_derived_hom
    return induced_map_on_derived_hom(f, identity_map(coefficient_complex(A)), -p)
