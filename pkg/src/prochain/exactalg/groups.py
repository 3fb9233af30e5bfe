"""Finitely generated abelian groups, homomorphisms, and their arithmetic.

A group is presented by an integer matrix whose columns are relations among
its generators.  On construction the presentation is normalized via Smith
normal form, so a group is stored together with an explicit change of basis
to canonical coordinates: invariant factors (each >= 2) first, then free
generators.  Over F_p there is no torsion and free_rank counts dimensions.

Elements are coordinate tuples in canonical generators; homomorphisms are
matrices in canonical generators, reduced modulo the target's relations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Optional, Sequence

from ..errors import ContainmentViolation, PreconditionViolated
from .matrices import (IntMatrix, column_lattice_basis, in_column_span,
                       kernel_basis, snf, solve)
from .ring import RingTag, ZZ, check_same_ring


@dataclass(frozen=True)
class FgAbGroup:
    """A f.g. abelian group in canonical (SNF) form.

    orders[i] is the order of the i-th canonical generator: the invariant
    factor for torsion generators, 0 for free ones.  to_canonical and
    from_canonical translate between the generators of the original
    presentation and the canonical ones, so homomorphisms written on either
    side survive normalization.
    """

    ring: RingTag
    orders: tuple            # (d_1, ..., d_t, 0, ..., 0) with 2 <= d_1 | d_2 | ...
    to_canonical: IntMatrix  # ngens_canonical x ngens_presented
    from_canonical: IntMatrix

    @property
    def ngens(self) -> int:
        return len(self.orders)

    @property
    def invariant_factors(self) -> tuple:
        return tuple(d for d in self.orders if d != 0)

    @property
    def free_rank(self) -> int:
        return sum(1 for d in self.orders if d == 0)

    @property
    def is_trivial(self) -> bool:
        return self.ngens == 0

    def isomorphic(self, other: "FgAbGroup") -> bool:
        return (self.ring == other.ring
                and self.orders == other.orders)

    def reduce(self, vec: Sequence[int]) -> tuple:
        assert len(vec) == self.ngens
        out = []
        for d, x in zip(self.orders, vec):
            x = self.ring.reduce(x)
            out.append(x % d if d else x)
        return tuple(out)

    def reduce_matrix(self, M: IntMatrix) -> IntMatrix:
        """Reduce a matrix whose ROWS are indexed by our canonical generators."""
        assert M.rows == self.ngens
        rows = []
        for i, d in enumerate(self.orders):
            row = [self.ring.reduce(x) for x in M.row(i)]
            if d:
                row = [x % d for x in row]
            rows.append(row)
        return IntMatrix.from_rows(rows, self.ring, cols=M.cols)

    def relation_matrix(self) -> IntMatrix:
        """Canonical relations: columns d_i * e_i for the torsion generators."""
        torsion = [(i, d) for i, d in enumerate(self.orders) if d]
        cols = []
        for i, d in torsion:
            col = [0] * self.ngens
            col[i] = d
            cols.append(col)
        return IntMatrix.from_columns(cols, self.ngens, self.ring)

    def elements(self):
        """Iterate all elements; only valid for finite groups."""
        if self.free_rank or (self.ring.is_field and self.ngens):
            if not self.ring.is_field:
                raise PreconditionViolated("group is infinite")
        ranges = [range(d if d else self.ring.p) for d in self.orders]
        import itertools
        yield from itertools.product(*ranges)

    def order(self) -> Optional[int]:
        """Group order, or None for infinite groups."""
        if self.ring.is_field:
            return self.ring.p ** self.ngens
        if self.free_rank:
            return None
        n = 1
        for d in self.orders:
            n *= d
        return n

    def __str__(self):
        if self.is_trivial:
            return "0"
        parts = []
        if self.free_rank:
            base = "Z" if not self.ring.is_field else f"F{self.ring.p}"
            parts.append(base if self.free_rank == 1 else f"{base}^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.invariant_factors)
        return " + ".join(parts)


@lru_cache(maxsize=None)
def group_from_presentation(relations: IntMatrix) -> FgAbGroup:
    """Group on relations.rows generators modulo the columns of relations."""
    ring = relations.ring
    n = relations.rows
    s = snf(relations)
    diag = list(s.diag) + [0] * (n - len(s.diag))
    kept = [i for i, d in enumerate(diag) if ring.reduce(d) == 0 or
            (not ring.is_field and d not in (1,))]
    if ring.is_field:
        kept = [i for i, d in enumerate(diag) if ring.reduce(d) == 0]
    orders = tuple(0 if ring.reduce(diag[i]) == 0 else diag[i] for i in kept)
    to_c = s.U.take_rows(kept)
    from_c = s.Uinv.take_columns(kept)
    return FgAbGroup(ring=ring, orders=orders, to_canonical=to_c, from_canonical=from_c)


def group_from_orders(orders: Sequence[int], ring: RingTag = ZZ) -> FgAbGroup:
    """Direct sum of cyclic groups Z/d (d=0 meaning Z, or F_p for fields)."""
    n = len(orders)
    rel = IntMatrix.from_columns(
        [[ring.reduce(d) if i == j else 0 for i in range(n)]
         for j, d in enumerate(orders) if ring.reduce(d) != 0],
        n, ring)
    return group_from_presentation(rel)


def free_group(rank: int, ring: RingTag = ZZ) -> FgAbGroup:
    return group_from_orders([0] * rank, ring)


def trivial_group(ring: RingTag = ZZ) -> FgAbGroup:
    return group_from_orders([], ring)


def direct_sum(groups: Sequence[FgAbGroup], ring: Optional[RingTag] = None) -> FgAbGroup:
    if groups:
        ring = check_same_ring(*groups)
    assert ring is not None
    orders = [d for g in groups for d in g.orders]
    return group_from_orders(orders, ring)


@dataclass(frozen=True)
class GroupHom:
    """A homomorphism between canonical-form groups, as a reduced matrix."""

    source: FgAbGroup
    target: FgAbGroup
    matrix: IntMatrix  # target.ngens x source.ngens

    def __post_init__(self):
        check_same_ring(self.source, self.target, self.matrix)
        assert self.matrix.shape == (self.target.ngens, self.source.ngens)

    def apply(self, vec: Sequence[int]) -> tuple:
        return self.target.reduce(self.matrix.apply(vec))

    def compose(self, other: "GroupHom") -> "GroupHom":
        """self o other."""
        assert other.target.orders == self.source.orders
        return hom(other.source, self.target, self.matrix @ other.matrix)

    def __add__(self, other: "GroupHom") -> "GroupHom":
        assert self.source is other.source or self.source.orders == other.source.orders
        return hom(self.source, self.target, self.matrix + other.matrix)

    def __sub__(self, other: "GroupHom") -> "GroupHom":
        return hom(self.source, self.target, self.matrix - other.matrix)

    def __neg__(self) -> "GroupHom":
        return hom(self.source, self.target, -self.matrix)

    def equal(self, other: "GroupHom") -> bool:
        return (self.source.orders == other.source.orders
                and self.target.orders == other.target.orders
                and self.matrix.entries == other.matrix.entries)

    @property
    def is_zero(self) -> bool:
        return self.matrix.is_zero

    def __str__(self):
        return f"{self.source} -> {self.target}: {self.matrix}"


def hom(source: FgAbGroup, target: FgAbGroup, matrix: IntMatrix,
        check: bool = True) -> GroupHom:
    """Build a GroupHom, verifying it respects the source relations."""
    red = target.reduce_matrix(matrix)
    if check:
        for i, d in enumerate(source.orders):
            if d == 0:
                continue
            # d * (image of generator i) must vanish in the target
            for j, e in enumerate(target.orders):
                v = target.ring.reduce(d * red[j, i])
                if (e and v % e != 0) or (not e and v != 0):
                    raise PreconditionViolated(
                        f"matrix does not respect relations at gen {i}")
    return GroupHom(source, target, red)


def identity_hom(g: FgAbGroup) -> GroupHom:
    return GroupHom(g, g, IntMatrix.identity(g.ngens, g.ring))


def zero_hom(source: FgAbGroup, target: FgAbGroup) -> GroupHom:
    return GroupHom(source, target, IntMatrix.zeros(target.ngens, source.ngens, source.ring))


def multiplication_hom(g: FgAbGroup, m: int) -> GroupHom:
    return hom(g, g, IntMatrix.identity(g.ngens, g.ring).scale(m))


# ---------------------------------------------------------------------------
# Subgroups, quotients, kernels, images
# ---------------------------------------------------------------------------

def _augmented(G: IntMatrix, rels: IntMatrix) -> IntMatrix:
    return G.hstack(rels) if rels.cols else G


@dataclass(frozen=True)
class Subgroup:
    """A subgroup of `ambient` with a chosen lattice basis for its preimage
    in the generator lattice (basis columns include the ambient relations'
    effect, i.e. the ambient relation lattice is contained in the span)."""

    ambient: FgAbGroup
    group: FgAbGroup
    basis: IntMatrix     # ambient.ngens x group-presentation-gens
    inclusion: GroupHom  # group -> ambient

    def encode(self, vec: Sequence[int]) -> tuple:
        """Coordinates in `group` of an ambient element lying in the subgroup."""
        col = IntMatrix.from_columns([list(vec)], self.ambient.ngens, self.ambient.ring)
        sol = solve(_augmented(self.basis, self.ambient.relation_matrix()), col)
        if sol is None:
            raise ContainmentViolation("element not in subgroup")
        z = [sol[i, 0] for i in range(self.basis.cols)]
        return self.group.reduce(self.group.to_canonical.apply(z))

    def contains_hom(self, f: GroupHom) -> bool:
        """Does the image of f (into the ambient group) land in this subgroup?"""
        assert f.target.orders == self.ambient.orders
        return in_column_span(_augmented(self.basis, self.ambient.relation_matrix()),
                              f.matrix)


def subgroup_from_columns(ambient: FgAbGroup, gens: IntMatrix) -> Subgroup:
    """Subgroup of `ambient` generated by the columns of `gens` (canonical coords)."""
    ring = ambient.ring
    rels = ambient.relation_matrix()
    lattice = _augmented(gens, rels)
    basis = column_lattice_basis(lattice)
    # relations among the basis columns: preimages of the ambient relations
    ker = kernel_basis(_augmented(basis, rels))
    zpart = ker.take_rows(range(basis.cols))
    grp = group_from_presentation(zpart)
    incl_matrix = ambient.reduce_matrix(basis @ grp.from_canonical)
    incl = GroupHom(grp, ambient, incl_matrix)
    return Subgroup(ambient, grp, basis, incl)


def image(f: GroupHom) -> Subgroup:
    return subgroup_from_columns(f.target, f.matrix)


def kernel(f: GroupHom) -> Subgroup:
    """Kernel of f as a subgroup of its source."""
    rels_t = f.target.relation_matrix()
    ker = kernel_basis(_augmented(f.matrix, rels_t))
    xpart = ker.take_rows(range(f.source.ngens))
    # the source relations always solve f(x) = 0, so adding them is harmless
    gens = _augmented(xpart, f.source.relation_matrix())
    return subgroup_from_columns(f.source, gens)


@dataclass(frozen=True)
class SubquotientData:
    """im(S)/im(T) inside an ambient group, with explicit coordinates."""

    ambient: FgAbGroup
    group: FgAbGroup
    basis: IntMatrix        # ambient gens x r: lattice basis of the S-lattice
    denominator: IntMatrix  # lattice basis of the T-lattice (incl. relations)

    def encode(self, vec: Sequence[int]) -> tuple:
        col = IntMatrix.from_columns([list(vec)], self.ambient.ngens, self.ambient.ring)
        sol = solve(_augmented(self.basis, self.ambient.relation_matrix()), col)
        if sol is None:
            raise ContainmentViolation("element not in numerator subgroup")
        z = [sol[i, 0] for i in range(self.basis.cols)]
        return self.group.reduce(self.group.to_canonical.apply(z))

    def decode(self, vec: Sequence[int]) -> tuple:
        z = self.group.from_canonical.apply(vec)
        return self.ambient.reduce(self.basis.apply(z))

    def encode_hom(self, f: GroupHom) -> GroupHom:
        """Turn f: P -> ambient (with image in the numerator) into P -> group."""
        cols = [self.encode(f.matrix.column(j)) for j in range(f.source.ngens)]
        m = IntMatrix.from_columns(cols, self.group.ngens, self.ambient.ring)
        return hom(f.source, self.group, m)

    def decode_hom(self, f: GroupHom) -> GroupHom:
        """Turn f: P -> group into a representative P -> ambient."""
        cols = [self.decode(f.matrix.column(j)) for j in range(f.source.ngens)]
        m = IntMatrix.from_columns(cols, self.ambient.ngens, self.ambient.ring)
        return GroupHom(f.source, self.ambient, self.ambient.reduce_matrix(m))


def subquotient(ambient: FgAbGroup, numerator: Subgroup,
                denominator: Subgroup) -> SubquotientData:
    """im(numerator)/im(denominator); raises unless the containment holds."""
    ring = ambient.ring
    rels = ambient.relation_matrix()
    num_lat = _augmented(numerator.basis, rels)
    den_lat = _augmented(denominator.basis, rels)
    if not in_column_span(num_lat, den_lat):
        raise ContainmentViolation("denominator not contained in numerator")
    basis = column_lattice_basis(num_lat)
    ker = kernel_basis(_augmented(basis, den_lat))
    zpart = ker.take_rows(range(basis.cols))
    grp = group_from_presentation(zpart)
    return SubquotientData(ambient, grp, basis, den_lat)


def full_subgroup(g: FgAbGroup) -> Subgroup:
    return subgroup_from_columns(g, IntMatrix.identity(g.ngens, g.ring))


def zero_subgroup(g: FgAbGroup) -> Subgroup:
    return subgroup_from_columns(g, IntMatrix.zeros(g.ngens, 0, g.ring))


def quotient(g: FgAbGroup, by: Subgroup) -> SubquotientData:
    return subquotient(g, full_subgroup(g), by)


def cokernel(f: GroupHom) -> SubquotientData:
    """Cokernel of f together with the projection (via .encode_hom/.encode)."""
    return quotient(f.target, image(f))


def cokernel_projection(f: GroupHom) -> GroupHom:
    data = cokernel(f)
    return data.encode_hom(identity_hom(f.target))


def is_injective(f: GroupHom) -> bool:
    return kernel(f).group.is_trivial


def is_surjective(f: GroupHom) -> bool:
    return cokernel(f).group.is_trivial


def is_isomorphism(f: GroupHom) -> bool:
    return is_injective(f) and is_surjective(f)


def express_through(incl: GroupHom, g: GroupHom) -> GroupHom:
    """h with incl o h = g, for incl a subgroup inclusion containing im(g)."""
    rels = incl.target.relation_matrix()
    sys = _augmented(incl.matrix, rels)
    sol = solve(sys, g.matrix)
    if sol is None:
        raise ContainmentViolation("map does not factor through subgroup")
    m = sol.take_rows(range(incl.source.ngens))
    return hom(g.source, incl.source, m)


def preimage_element(f: GroupHom, target_vec: Sequence[int]) -> Optional[tuple]:
    """Some x with f(x) = target element, or None."""
    col = IntMatrix.from_columns([list(target_vec)], f.target.ngens, f.target.ring)
    sys = _augmented(f.matrix, f.target.relation_matrix())
    sol = solve(sys, col)
    if sol is None:
        return None
    return f.source.reduce(tuple(sol[i, 0] for i in range(f.source.ngens)))


def exact_at(f: GroupHom, g: GroupHom) -> bool:
    """Exactness of A --f--> B --g--> C at B: im f = ker g as subgroups."""
    assert f.target.orders == g.source.orders
    if not g.compose(f).is_zero:
        return False
    ker_g = kernel(g)
    im_f = image(f)
    return im_f.contains_hom(ker_g.inclusion)


# ---------------------------------------------------------------------------
# Hom groups and constraint solving
# ---------------------------------------------------------------------------

def _pair_order(a: int, b: int, ring: RingTag):
    """Order and generator multiplier of Hom(Z/a, Z/b); a, b = 0 mean free."""
    if ring.is_field:
        return 0, 1
    if a == 0:
        return b, 1          # Hom(Z, Z/b) = Z/b, generator 1 -> 1
    if b == 0:
        return 1, 0          # Hom(Z/a, Z) = 0
    g = gcd(a, b)
    return g, b // g         # generated by multiplication with b/g


@dataclass(frozen=True)
class HomGroup:
    """Hom(A, B) as an FgAbGroup with decoding of generators to maps."""

    A: FgAbGroup
    B: FgAbGroup
    group: FgAbGroup
    pairs: tuple      # ((i, j, multiplier), ...) aligned with natural coords

    def decode(self, vec: Sequence[int]) -> GroupHom:
        nat = self.group.from_canonical.apply(vec)
        m = [[0] * self.A.ngens for _ in range(self.B.ngens)]
        for (i, j, mult), c in zip(self.pairs, nat):
            m[j][i] += c * mult
        return hom(self.A, self.B, IntMatrix.from_rows(m, self.A.ring,
                                                       cols=self.A.ngens),
                   check=False)

    def encode(self, f: GroupHom) -> tuple:
        assert f.source.orders == self.A.orders and f.target.orders == self.B.orders
        nat = []
        ring = self.A.ring
        for (i, j, mult) in self.pairs:
            v = f.matrix[j, i]
            if mult == 0:
                nat.append(0)
                continue
            b = self.B.orders[j]
            if ring.is_field or mult == 1:
                nat.append(ring.reduce(v))
            else:
                v = v % b if b else v
                assert v % mult == 0, "hom not generated by elementary maps"
                nat.append(v // mult)
        return self.group.reduce(self.group.to_canonical.apply(nat))


@lru_cache(maxsize=None)
def hom_group(A: FgAbGroup, B: FgAbGroup) -> HomGroup:
    ring = check_same_ring(A, B)
    pairs = []
    orders = []
    for i, a in enumerate(A.orders):
        for j, b in enumerate(B.orders):
            c, mult = _pair_order(a, b, ring)
            if c == 1 and not ring.is_field:
                continue
            pairs.append((i, j, mult))
            orders.append(c)
    grp = group_from_orders(orders, ring)
    return HomGroup(A, B, grp, tuple(pairs))


def solve_hom_constraints(A: FgAbGroup, B: FgAbGroup,
                          constraints: Sequence[tuple]) -> Optional[GroupHom]:
    """Find g: A -> B with post o g o pre = rhs for each (pre, post, rhs).

    pre: P -> A, post: B -> Q, rhs: P -> Q.  Returns None when the linear
    system over the hom groups has no solution; the zero map when there are
    no constraints at all and it satisfies them vacuously.
    """
    ring = check_same_ring(A, B)
    hg = hom_group(A, B)
    n_unknown = hg.group.ngens
    blocks = []
    rhs_vecs = []
    rel_blocks = []
    for (pre, post, rhs) in constraints:
        assert pre.target.orders == A.orders and post.source.orders == B.orders
        hq = hom_group(pre.source, post.target)
        cols = []
        for k in range(n_unknown):
            gen = [0] * n_unknown
            gen[k] = 1
            g = hg.decode(gen)
            composed = post.compose(g).compose(pre)
            cols.append(hq.encode(composed))
        phi = IntMatrix.from_columns(cols, hq.group.ngens, ring)
        blocks.append((phi, hq))
        rhs_vecs.append(hq.encode(rhs))
    if not blocks:
        return zero_hom(A, B)
    # stack: [phi_1; phi_2; ...] x = rhs mod relations of each target hom group
    total_rows = sum(phi.rows for phi, _ in blocks)
    big = blocks[0][0]
    for phi, _ in blocks[1:]:
        big = big.vstack(phi)
    # block-diagonal relation columns
    rel_cols = []
    offset = 0
    for phi, hq in blocks:
        rels = hq.group.relation_matrix()
        for j in range(rels.cols):
            col = [0] * total_rows
            for i in range(rels.rows):
                col[offset + i] = rels[i, j]
            rel_cols.append(col)
        offset += phi.rows
    sys = big
    if rel_cols:
        sys = big.hstack(IntMatrix.from_columns(rel_cols, total_rows, ring))
    rhs_col = IntMatrix.from_columns(
        [[x for vec in rhs_vecs for x in vec]], total_rows, ring)
    sol = solve(sys, rhs_col)
    if sol is None:
        return None
    coords = hg.group.reduce(tuple(sol[i, 0] for i in range(n_unknown)))
    return hg.decode(coords)
