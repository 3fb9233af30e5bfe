"""Towers (inverse systems over the natural numbers), pro-maps as germs, and
the limit calculus: pro-isomorphism decision, lim/lim^1, colimits of direct
systems, and cofinal reindexing.

Infinite towers are finitely presented by a tail policy: either all
structure maps are identities from some index on (ConstantFrom), or the
entries and the structure map repeat a declared endomorphism (RepeatFrom).
Every completeness claim is relative to the declared tail; Unknown is a
first-class result, not an error.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple, Union

import sympy

from .chain import ChainComplex, ChainMap, identity_map as chain_identity, is_chain_map
from .errors import PreconditionViolated
from .exactalg.groups import (FgAbGroup, GroupHom, Subgroup, hom, hom_group,
                              identity_hom, image, is_isomorphism,
                              solve_hom_constraints, subgroup_from_columns,
                              zero_hom)
from .exactalg.matrices import IntMatrix, in_column_span, kernel_basis, snf, solve
from .exactalg.ring import check_same_ring

DEFAULT_BUDGET = 8


# ---------------------------------------------------------------------------
# Generic entry/map shims: towers hold either FgAbGroups or ChainComplexes
# ---------------------------------------------------------------------------

def _is_group(entry) -> bool:
    return isinstance(entry, FgAbGroup)


def _identity(entry):
    return identity_hom(entry) if _is_group(entry) else chain_identity(entry)


def _compose(g, f):
    return g.compose(f)


def _source(m):
    return m.source


def _target(m):
    return m.target


def _same_object(a, b) -> bool:
    if _is_group(a):
        return a.orders == b.orders and a.to_canonical.entries == b.to_canonical.entries
    return a == b


def _map_equal(f, g) -> bool:
    return f.equal(g)


class Lim1Verdict(enum.Enum):
    ZERO = "Zero"
    NONZERO_UNCOUNTABLE = "NonzeroUncountable"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class UnknownValue:
    """A value the engine declines to claim, with the exhausted budget."""
    reason: str = ""
    budget: int = 0

    def __str__(self):
        suffix = f" (budget {self.budget})" if self.budget else ""
        return f"UNKNOWN: {self.reason}{suffix}" if self.reason else f"UNKNOWN{suffix}"


GroupOrUnknown = Union[FgAbGroup, UnknownValue]


# ---------------------------------------------------------------------------
# Tail policies and towers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TailPolicy:
    """ConstantFrom(N): identities from index N on.  RepeatFrom(N, endo):
    entries from N on all equal entry N and the structure maps repeat endo."""

    kind: str             # "constant" | "repeat"
    start: int
    endo: object = None   # GroupHom | ChainMap for "repeat"

    @staticmethod
    def constant_from(N: int) -> "TailPolicy":
        return TailPolicy("constant", N)

    @staticmethod
    def repeat_from(N: int, endo) -> "TailPolicy":
        return TailPolicy("repeat", N, endo)

    @property
    def is_constant(self) -> bool:
        return self.kind == "constant"


@dataclass(frozen=True)
class Tower:
    """An inverse system T_0 <- T_1 <- ... with a declared tail.

    entries[s] for s <= tail.start; structure[s]: T_{s+1} -> T_s for
    s < tail.start.  Accessors extend both past the stored window.
    """

    entries: tuple
    structure: tuple
    tail: TailPolicy

    def __post_init__(self):
        N = self.tail.start
        assert len(self.entries) == N + 1, "entries must reach the tail start"
        assert len(self.structure) == N, "need one structure map per step"
        for s, m in enumerate(self.structure):
            assert _same_object(_source(m), self.entries[s + 1]), f"map {s} source"
            assert _same_object(_target(m), self.entries[s]), f"map {s} target"
        if self.tail.kind == "repeat":
            e = self.tail.endo
            assert _same_object(_source(e), self.entries[N])
            assert _same_object(_target(e), self.entries[N])

    @property
    def stored_top(self) -> int:
        return self.tail.start

    def entry(self, s: int):
        return self.entries[min(s, self.tail.start)]

    def structure_map(self, s: int):
        """The map T_{s+1} -> T_s."""
        if s < self.tail.start:
            return self.structure[s]
        if self.tail.is_constant:
            return _identity(self.entries[self.tail.start])
        return self.tail.endo

    def composite(self, s: int, t: int):
        """The composed map T_s -> T_t for s >= t."""
        assert s >= t
        m = _identity(self.entry(t))
        for k in range(t, s):
            m = _compose(m, self.structure_map(k))
        return m

    def map_tower(self, obj_fn, map_fn, tail_budget: int = 0) -> "Tower":
        """Apply a functor given by obj_fn/map_fn levelwise; tails carry over."""
        N = self.tail.start
        entries = tuple(obj_fn(e) for e in self.entries)
        structure = tuple(map_fn(m) for m in self.structure)
        if self.tail.is_constant:
            tail = TailPolicy.constant_from(N)
        else:
            tail = TailPolicy.repeat_from(N, map_fn(self.tail.endo))
        return Tower(entries, structure, tail)


def constant_tower(entry) -> Tower:
    return Tower((entry,), (), TailPolicy.constant_from(0))


def repeat_tower(endo) -> Tower:
    """The tower A <- A <- A <- ... with every structure map the given endo."""
    return Tower((_source(endo),), (), TailPolicy.repeat_from(0, endo))


# ---------------------------------------------------------------------------
# Pro-maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IndexShift:
    """A monotone reindexing t -> theta(t); past the stored values it
    advances linearly with the declared slope."""

    values: tuple = ()
    tail_delta: int = 0
    tail_slope: int = 1

    @staticmethod
    def level() -> "IndexShift":
        return IndexShift((), 0)


def _shift_call(shift: IndexShift, t: int) -> int:
    if t < len(shift.values):
        return shift.values[t]
    if shift.values:
        last = shift.values[-1]
        return last + shift.tail_slope * (t - (len(shift.values) - 1))
    return t + shift.tail_delta


@dataclass(frozen=True)
class ProMap:
    """A germ-represented morphism of towers: components X_{theta(t)} -> Y_t.

    comps[t] is stored for t <= window; beyond, components repeat the last
    stored one (well-typed because tails repeat entries).
    """

    source: Tower
    target: Tower
    shift: IndexShift
    comps: tuple

    def theta(self, t: int) -> int:
        return _shift_call(self.shift, t)

    @property
    def window(self) -> int:
        return len(self.comps) - 1

    def comp(self, t: int):
        return self.comps[min(t, self.window)]

    def validate(self, check_depth: int = 2) -> bool:
        """Compatibility squares commute exactly through the stored window
        plus check_depth tail steps."""
        top = self.window + check_depth
        for t in range(top):
            left = _compose(self.comp(t), self.source.composite(self.theta(t + 1),
                                                                self.theta(t)))
            right = _compose(self.target.structure_map(t), self.comp(t + 1))
            if not _map_equal(left, right):
                return False
        return True


def level_map(source: Tower, target: Tower, comps: Sequence) -> ProMap:
    f = ProMap(source, target, IndexShift.level(), tuple(comps))
    assert f.validate(), "pro-map squares do not commute"
    return f


def identity_pro_map(T: Tower) -> ProMap:
    N = T.tail.start
    return level_map(T, T, tuple(_identity(T.entry(t)) for t in range(N + 1)))


def compose_pro(g: ProMap, f: ProMap) -> ProMap:
    """g o f; components compose through the shifts."""
    window = max(g.window, f.window) + 1
    vals = []
    comps = []
    for t in range(window + 1):
        s_mid = g.theta(t)
        s_top = f.theta(s_mid)
        vals.append(s_top)
        comps.append(_compose(g.comp(t), f.comp(s_mid)))
    slope = f.shift.tail_slope * g.shift.tail_slope
    out = ProMap(f.source, g.target,
                 IndexShift(tuple(vals), tail_slope=slope), tuple(comps))
    assert out.validate()
    return out


def germ_equal(f: ProMap, g: ProMap, budget: int = DEFAULT_BUDGET) -> bool:
    """Two pro-maps agree as germs iff composing with structure maps
    equalizes them level by level; under tail policies a bounded window
    decides."""
    top = max(f.window, g.window) + budget
    for t in range(top + 1):
        sf, sg = f.theta(t), g.theta(t)
        found = False
        for s in range(max(sf, sg), max(sf, sg) + budget + 1):
            left = _compose(f.comp(t), f.source.composite(s, sf))
            right = _compose(g.comp(t), g.source.composite(s, sg))
            if _map_equal(left, right):
                found = True
                break
        if not found:
            return False
    return True


def reindex_cofinal(T: Tower, step: int) -> Tower:
    """The subsequence tower T_0, T_step, T_{2 step}, ... with composites."""
    assert step >= 1
    if step == 1:
        return T
    N = T.tail.start
    top = (N + step - 1) // step  # first index with k*step >= N
    entries = tuple(T.entry(k * step) for k in range(top + 1))
    structure = tuple(T.composite((k + 1) * step, k * step) for k in range(top))
    if T.tail.is_constant:
        tail = TailPolicy.constant_from(top)
    else:
        endo = T.tail.endo
        power = _identity(T.entry(N))
        for _ in range(step):
            power = _compose(power, endo)
        # entries at indices top, top+1, ... sit at k*step >= N where the
        # composite of `step` structure maps is endo^step up to head overlap
        tail = TailPolicy.repeat_from(top, power)
    out = Tower(entries, structure, tail)
    return out


def reindex_pro_map(f: ProMap, step: int) -> ProMap:
    """Restrict a level map to the step-subsequence towers."""
    src = reindex_cofinal(f.source, step)
    tgt = reindex_cofinal(f.target, step)
    top = max(src.tail.start, tgt.tail.start) + 1
    comps = tuple(f.comp(k * step) for k in range(top + 1))
    return level_map(src, tgt, comps)


def comparison_to_reindexed(T: Tower, step: int) -> ProMap:
    """The canonical pro-map T -> reindex_cofinal(T, step): at level t the
    component is the identity of T_{t*step}."""
    R = reindex_cofinal(T, step)
    top = R.tail.start + 1
    vals = tuple(t * step for t in range(top + 1))
    comps = tuple(_identity(T.entry(t * step)) for t in range(top + 1))
    out = ProMap(T, R, IndexShift(vals, tail_slope=step), comps)
    assert out.validate()
    return out


# ---------------------------------------------------------------------------
# Pro-isomorphism decision for group towers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProIsoVerdict:
    kind: str                      # "true" | "false" | "unknown"
    witness: tuple = ()            # for true: ((t, s, filler), ...)
    certificate_level: int = -1    # for false: a level with no filler
    budget: int = 0

    def __bool__(self):
        return self.kind == "true"


def _filler_exists(f: ProMap, t: int, s: int) -> Optional[GroupHom]:
    """g: Y_s -> X_t with g f_s = X(s -> t) and f_t g = Y(s -> t)."""
    X, Y = f.source, f.target
    Xt, Ys = X.entry(t), Y.entry(s)
    fs = _compose(f.comp(s), X.composite(f.theta(s), s)) if f.theta(s) != s else f.comp(s)
    ft = _compose(f.comp(t), X.composite(f.theta(t), t)) if f.theta(t) != t else f.comp(t)
    cons = [
        (fs, identity_hom(Xt), X.composite(s, t)),
        (identity_hom(Ys), ft, Y.composite(s, t)),
    ]
    return solve_hom_constraints(Ys, Xt, cons)


def _levelize(f: ProMap) -> ProMap:
    """Replace a shifted pro-map by the level map on the reindexed source."""
    if not f.shift.values and f.shift.tail_delta == 0:
        return f
    X = f.source
    N = max(f.window, f.source.tail.start, f.target.tail.start) + 1
    entries = tuple(X.entry(f.theta(t)) for t in range(N + 1))
    structure = tuple(X.composite(f.theta(t + 1), f.theta(t)) for t in range(N))
    if X.tail.is_constant:
        tail = TailPolicy.constant_from(N)
    else:
        endo = X.composite(f.theta(N + 1), f.theta(N))
        tail = TailPolicy.repeat_from(N, endo)
    src = Tower(entries, structure, tail)
    comps = tuple(f.comp(t) for t in range(N + 1))
    return level_map(src, f.target, comps)


def is_pro_isomorphism(f: ProMap, budget: int = DEFAULT_BUDGET) -> ProIsoVerdict:
    """Decide pro-isomorphism of a map of f.g. abelian group towers.

    f is a pro-isomorphism iff for every t some s >= t admits a filler
    g: Y_s -> X_t compatible with both structure composites.  Solvability
    is monotone in s, so one solve at the top of the window decides each
    level; for ConstantFrom tails this is complete, for RepeatFrom tails a
    failed search may be Unknown (except when one side is the zero tower,
    where the image-chain machinery refutes definitively).
    """
    f = _levelize(f)
    X, Y = f.source, f.target
    T_star = max(X.tail.start, Y.tail.start, f.window)
    witnesses = []
    for t in range(T_star + 1):
        s = max(t, T_star) if (X.tail.is_constant and Y.tail.is_constant) \
            else max(t, T_star) + budget
        g = _filler_exists(f, t, s)
        if g is None:
            if X.tail.is_constant and Y.tail.is_constant:
                return ProIsoVerdict("false", certificate_level=t, budget=budget)
            refut = _refute_repeat_tail(f, t, budget)
            if refut:
                return ProIsoVerdict("false", certificate_level=t, budget=budget)
            return ProIsoVerdict("unknown", certificate_level=t, budget=budget)
        witnesses.append((t, s, g))
    return ProIsoVerdict("true", witness=tuple(witnesses), budget=budget)


def _refute_repeat_tail(f: ProMap, t: int, budget: int) -> bool:
    """Definitive refutation in the structurally-zero cases: when the target
    (resp. source) tower is trivial, a filler forces the source (resp.
    target) composites to vanish eventually, which eventually_zero decides."""
    X, Y = f.source, f.target
    N = max(X.tail.start, Y.tail.start, t)
    if all(Y.entry(s).is_trivial for s in range(N + 2)):
        endo = X.structure_map(N + 1)
        lead = X.composite(N + 1, t)
        return eventually_zero_composite(lead, endo, budget) is False
    if all(X.entry(s).is_trivial for s in range(N + 2)):
        endo = Y.structure_map(N + 1)
        lead = Y.composite(N + 1, t)
        return eventually_zero_composite(lead, endo, budget) is False
    return False


def eventually_zero_composite(lead: GroupHom, endo: GroupHom,
                              budget: int = DEFAULT_BUDGET) -> Optional[bool]:
    """Decide whether lead o endo^k = 0 for some k >= 0.

    The rational image chain of endo^k stabilizes within dim steps; past
    that point the composite's rational rank is constant, so a positive
    rank refutes definitively.  In the rank-zero regime the reduced
    matrices take finitely many values and a repeat without reaching zero
    refutes.  None only when the cycle search exhausts its budget.
    """
    n = _source(endo).ngens
    cur = lead
    for _ in range(n + 2):
        if cur.is_zero:
            return True
        cur = cur.compose(endo)
    if _rational_rank(cur) > 0:
        return False
    seen = set()
    for _ in range(max(budget, 8) + 64):
        if cur.is_zero:
            return True
        key = cur.matrix.entries
        if key in seen:
            return False
        seen.add(key)
        cur = cur.compose(endo)
    return None


def _rational_rank(f: GroupHom) -> int:
    """Rank of the map induced on free quotients (torsion ignored)."""
    tgt_free = [i for i, d in enumerate(f.target.orders) if d == 0]
    src_free = [j for j, d in enumerate(f.source.orders) if d == 0]
    if not tgt_free or not src_free:
        return 0
    sub = f.matrix.take_rows(tgt_free).take_columns(src_free)
    return snf(sub).rank


# ---------------------------------------------------------------------------
# lim and lim^1
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LimResult:
    lim: GroupOrUnknown
    lim1: Lim1Verdict
    mittag_leffler: Optional[bool] = None


def _subgroup_equal(a: Subgroup, b: Subgroup) -> bool:
    return a.contains_hom(b.inclusion) and b.contains_hom(a.inclusion)


def lim_lim1(T: Tower, budget: int = DEFAULT_BUDGET) -> LimResult:
    """lim and the lim^1 dichotomy for a tower of f.g. abelian groups.

    ConstantFrom tails are immediate.  For RepeatFrom tails the image chain
    of the endomorphism decides Mittag-Leffler: torsion images stabilize in
    bounded time and the free part stabilizes iff the transition on the
    stable rational image has unit determinant.  Non-ML towers have
    uncountable lim^1; their lim is computed on free groups through the
    unit-part lattice and reported Unknown otherwise.
    """
    if T.tail.is_constant:
        return LimResult(T.entry(T.tail.start), Lim1Verdict.ZERO, True)
    endo = T.tail.endo
    A = _target(endo)
    power = identity_hom(A)
    prev = image(power)
    steps = 0
    max_steps = max(budget, 4 * (A.ngens + 2), _torsion_chain_bound(A))
    while steps < max_steps:
        power = endo.compose(power)
        cur = image(power)
        if _subgroup_equal(prev, cur):
            stable = cur.group
            return LimResult(stable, Lim1Verdict.ZERO, True)
        if _free_ranks_match(prev, cur) and not A.ring.is_field:
            det = _transition_determinant(prev, cur, endo)
            if det is not None and abs(det) >= 2:
                lim = _non_ml_lim(A, endo, prev)
                return LimResult(lim, Lim1Verdict.NONZERO_UNCOUNTABLE, False)
        prev = cur
        steps += 1
    return LimResult(UnknownValue("image chain did not resolve", budget),
                     Lim1Verdict.UNKNOWN, None)


def _torsion_chain_bound(A: FgAbGroup) -> int:
    n = 1
    for d in A.invariant_factors:
        n *= d
    return max(4, n.bit_length() * (A.ngens + 1) + 4)


def _free_ranks_match(a: Subgroup, b: Subgroup) -> bool:
    return a.group.free_rank == b.group.free_rank


def _free_quotient_lattice(A: FgAbGroup, sub: Subgroup) -> IntMatrix:
    """Image of the subgroup in A modulo torsion, as lattice columns."""
    free_idx = [i for i, d in enumerate(A.orders) if d == 0]
    return sub.basis.take_rows(free_idx)


def _transition_determinant(prev: Subgroup, cur: Subgroup,
                            endo: GroupHom) -> Optional[int]:
    """det of the transition on the free quotient of the stable image."""
    A = _target(endo)
    from .exactalg.matrices import column_lattice_basis
    Lp = column_lattice_basis(_free_quotient_lattice(A, prev))
    free_idx = [i for i, d in enumerate(A.orders) if d == 0]
    endo_free = endo.matrix.take_rows(free_idx).take_columns(free_idx)
    nxt = endo_free @ Lp
    trans = solve(Lp, nxt)
    if trans is None or trans.rows != trans.cols:
        return None
    return _det(trans)


def _det(M: IntMatrix) -> int:
    n = M.rows
    if n == 0:
        return 1
    s = snf(M)
    d = 1
    for v in s.diag:
        d *= v
    return d


def _non_ml_lim(A: FgAbGroup, endo: GroupHom, stable_image: Subgroup) -> GroupOrUnknown:
    """lim of (A <- A <- ...) when images do not stabilize.

    For free A the limit is the largest sublattice on which the transition
    is an automorphism: the kernel of the non-unit part of the
    characteristic polynomial.  Mixed torsion is not attempted.
    """
    if A.invariant_factors:
        return UnknownValue("mixed torsion in a non-Mittag-Leffler tower")
    n = A.ngens
    M = sympy.Matrix(n, n, lambda i, j: endo.matrix[i, j])
    poly = M.charpoly()
    x = poly.gens[0]
    factors = sympy.factor_list(poly.as_expr())[1]
    # vectors annihilated by the unit factors span the largest subspace on
    # which the transition restricts to a lattice automorphism
    unit_part = sympy.Integer(1)
    for base, mult in factors:
        p = sympy.Poly(base, x)
        const = p.all_coeffs()[-1]
        if abs(const) == 1:
            unit_part *= base ** mult
    from .exactalg.groups import free_group, trivial_group
    if unit_part == 1:
        return trivial_group(A.ring)
    up_poly = sympy.Poly(sympy.expand(unit_part), x)
    coeffs = [int(c) for c in up_poly.all_coeffs()]
    acc = IntMatrix.zeros(n, n, A.ring)
    for c in coeffs:
        acc = (acc @ endo.matrix) + IntMatrix.identity(n, A.ring).scale(c)
    W = kernel_basis(acc)
    return free_group(W.cols, A.ring)


# ---------------------------------------------------------------------------
# Colimits of direct systems
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DirectSystem:
    """A direct system A_0 -> A_1 -> ... with a declared tail (identities
    from `start` for constant tails, a repeated endomorphism otherwise)."""

    entries: tuple
    structure: tuple   # structure[s]: A_s -> A_{s+1}
    tail: TailPolicy

    def entry(self, s: int):
        return self.entries[min(s, self.tail.start)]

    def structure_map(self, s: int):
        if s < self.tail.start:
            return self.structure[s]
        if self.tail.is_constant:
            return _identity(self.entries[self.tail.start])
        return self.tail.endo

    def composite(self, t: int, s: int):
        """A_s -> A_t for t >= s."""
        m = _identity(self.entry(s))
        for k in range(s, t):
            m = _compose(self.structure_map(k), m)
        return m


def constant_system(entry) -> DirectSystem:
    return DirectSystem((entry,), (), TailPolicy.constant_from(0))


@dataclass(frozen=True)
class ColimResult:
    value: GroupOrUnknown
    # index at which the colimit is realized by the entry (stable stage);
    # -1 when value is Unknown or zero-by-nilpotence
    stable_stage: int = -1
    eventually_zero: bool = False


def colim(D: DirectSystem, budget: int = DEFAULT_BUDGET) -> ColimResult:
    """Colimit of a direct system of f.g. abelian groups under a tail policy.

    Computable when the tail endomorphism is an isomorphism (the colimit is
    the stable entry) or eventually zero (the colimit vanishes); everything
    else is Unknown (e.g. Z --2--> Z --2--> ... is not finitely generated).
    """
    N = D.tail.start
    if D.tail.is_constant:
        return ColimResult(D.entry(N), stable_stage=N)
    endo = D.tail.endo
    if is_isomorphism(endo):
        return ColimResult(D.entry(N), stable_stage=N)
    ev = eventually_zero_composite(identity_hom(_target(endo)), endo, budget)
    if ev is True:
        from .exactalg.groups import trivial_group
        return ColimResult(trivial_group(_target(endo).ring), eventually_zero=True)
    return ColimResult(UnknownValue("tail endomorphism neither invertible nor nilpotent",
                                    budget))


def hom_system(X: Tower, B: FgAbGroup) -> DirectSystem:
    """The direct system Hom(X_s, B) with precomposition transition maps."""
    N = X.tail.start

    def hom_of(entry):
        return hom_group(entry, B).group

    entries = []
    for s in range(N + 1):
        entries.append(hom_of(X.entry(s)))
    structure = []
    for s in range(N):
        structure.append(_precompose_hom(X.structure[s], B))
    if X.tail.is_constant:
        tail = TailPolicy.constant_from(N)
    else:
        tail = TailPolicy.repeat_from(N, _precompose_hom(X.tail.endo, B))
    return DirectSystem(tuple(entries), tuple(structure), tail)


def _precompose_hom(g: GroupHom, B: FgAbGroup) -> GroupHom:
    """Hom(g, B): Hom(target g, B) -> Hom(source g, B)."""
    hg_t = hom_group(_target(g), B)
    hg_s = hom_group(_source(g), B)
    cols = []
    for k in range(hg_t.group.ngens):
        gen = [0] * hg_t.group.ngens
        gen[k] = 1
        f = hg_t.decode(gen)
        cols.append(hg_s.encode(f.compose(g)))
    m = IntMatrix.from_columns(cols, hg_s.group.ngens, B.ring)
    return hom(hg_t.group, hg_s.group, m)


def _postcompose_hom(A: FgAbGroup, g: GroupHom) -> GroupHom:
    """Hom(A, g): Hom(A, source g) -> Hom(A, target g)."""
    hg_s = hom_group(A, _source(g))
    hg_t = hom_group(A, _target(g))
    cols = []
    for k in range(hg_s.group.ngens):
        gen = [0] * hg_s.group.ngens
        gen[k] = 1
        f = hg_s.decode(gen)
        cols.append(hg_t.encode(g.compose(f)))
    m = IntMatrix.from_columns(cols, hg_t.group.ngens, A.ring)
    return hom(hg_s.group, hg_t.group, m)


def pro_hom(X: Tower, Y: Tower, budget: int = DEFAULT_BUDGET) -> GroupOrUnknown:
    """pro-Hom(X, Y) = lim_t colim_s Hom(X_s, Y_t) under the tail policies."""
    check_same_ring(X.entry(0), Y.entry(0))
    N = max(X.tail.start, Y.tail.start)
    per_t = []
    stages = []
    for t in range(N + 1):
        res = colim(hom_system(X, Y.entry(t)), budget)
        if isinstance(res.value, UnknownValue):
            return res.value
        per_t.append(res)
        stages.append(res.stable_stage)
    # connecting maps: postcompose with the Y structure, realized at a common
    # stable X stage; zero colimits short-circuit
    structure = []
    stage = max([s for s in stages if s >= 0], default=X.tail.start)
    entries = []
    for t in range(N + 1):
        if per_t[t].eventually_zero:
            from .exactalg.groups import trivial_group
            entries.append(trivial_group(Y.entry(0).ring))
        else:
            entries.append(hom_group(X.entry(stage), Y.entry(t)).group)
    for t in range(N):
        src, tgt = entries[t + 1], entries[t]
        if src.is_trivial or tgt.is_trivial:
            structure.append(zero_hom(src, tgt))
        else:
            structure.append(_postcompose_hom(X.entry(stage), Y.structure_map(t)))
    if Y.tail.is_constant:
        tail = TailPolicy.constant_from(N)
    else:
        top = entries[N]
        if top.is_trivial:
            tail = TailPolicy.repeat_from(N, zero_hom(top, top))
        else:
            tail = TailPolicy.repeat_from(N, _postcompose_hom(X.entry(stage),
                                                              Y.tail.endo))
    tower = Tower(tuple(entries), tuple(structure), tail)
    res = lim_lim1(tower, budget)
    return res.lim
