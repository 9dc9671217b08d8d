"""Finite groups as explicit multiplication tables.

Elements are indices 0..order-1 into an order x order Cayley table, with the
identity always at index 0 for groups built by the constructors here. Every
constructor verifies the group axioms exhaustively (associativity is the
O(n^3) part and can only be skipped with an explicit unsafe flag), so any
FiniteGroup that exists behaves like one.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import prod

import numpy as np

from .errors import (
    ClosureCapExceeded,
    ElementOutOfRange,
    IdentityElement,
    InvalidGroup,
    NotAHomomorphism,
    NotAPermutation,
    NotNormal,
)
from .lattice import FGAbelian, abelianization_from_presentation

DEFAULT_MAX_ORDER = 5000
DEFAULT_LATTICE_CAP = 256


class FiniteGroup:
    """A finite group given by its full multiplication table.

    table[a][b] is the index of the product a*b. generator_indices must
    generate the whole group; labels are display-only and never enter any
    computation. Two groups are equal exactly when their tables are equal.
    """

    def __init__(
        self,
        table,
        generator_indices=None,
        labels=None,
        name: str = "",
        *,
        unsafe_skip_associativity: bool = False,
    ):
        t = np.array(table, dtype=np.int64)
        if t.ndim != 2 or t.shape[0] != t.shape[1]:
            raise InvalidGroup(f"table shape {t.shape} is not square")
        n = int(t.shape[0])
        if n == 0:
            raise InvalidGroup("a group has at least the identity")
        if t.min() < 0 or t.max() >= n:
            raise InvalidGroup("table entries out of range")
        self.order = n
        self.table = t
        self.table.setflags(write=False)

        ident = None
        for e in range(n):
            if all(t[e, x] == x for x in range(n)) and all(t[x, e] == x for x in range(n)):
                ident = e
                break
        if ident is None:
            raise InvalidGroup("no two-sided identity in table")
        self.identity = ident

        inv = np.full(n, -1, dtype=np.int64)
        for a in range(n):
            hits = np.where(t[a] == ident)[0]
            if len(hits) != 1 or t[hits[0], a] != ident:
                raise InvalidGroup(f"element {a} lacks a unique two-sided inverse")
            inv[a] = hits[0]
        self.inverses = inv
        self.inverses.setflags(write=False)

        if not unsafe_skip_associativity:
            for a in range(n):
                if not np.array_equal(t[t[a]], t[a][t]):
                    raise InvalidGroup(f"associativity fails at element {a}")

        if generator_indices is None:
            generator_indices = tuple(x for x in range(n) if x != ident)
        self.generator_indices = tuple(int(g) for g in generator_indices)
        for g in self.generator_indices:
            if not 0 <= g < n:
                raise ElementOutOfRange(f"generator index {g} out of range", index=g)
        if _closure_from(self, self.generator_indices) != set(range(n)):
            raise InvalidGroup("generator_indices do not generate the group")

        if labels is not None:
            labels = tuple(str(s) for s in labels)
            if len(labels) != n:
                raise InvalidGroup(f"{len(labels)} labels for {n} elements")
        self.labels = labels
        self.name = name

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverses[a])

    def conjugate(self, x: int, by: int) -> int:
        return self.mul(self.mul(by, x), self.inv(by))

    def power(self, a: int, k: int) -> int:
        if k < 0:
            return self.power(self.inv(a), -k)
        out = self.identity
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def element_order(self, a: int) -> int:
        x, k = a, 1
        while x != self.identity:
            x = self.mul(x, a)
            k += 1
        return k

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def elements(self) -> range:
        return range(self.order)

    def label(self, a: int) -> str:
        if self.labels is not None:
            return self.labels[a]
        return str(a)

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash(self.table.tobytes())

    def __repr__(self):
        tag = f" {self.name}" if self.name else ""
        return f"FiniteGroup(order {self.order}{tag})"


def _closure_from(G: FiniteGroup, seeds) -> set[int]:
    """All products of the seed elements (and the identity)."""
    seen = {G.identity}
    frontier = [G.identity]
    seeds = tuple(seeds)
    while frontier:
        x = frontier.pop()
        for g in seeds:
            y = G.mul(x, g)
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return seen


@dataclass(frozen=True)
class Subgroup:
    """A subgroup of `parent`, stored as its sorted element indices."""

    parent: FiniteGroup
    elements: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def contains(self, x: int) -> bool:
        return x in self._as_set()

    def _as_set(self) -> frozenset:
        return frozenset(self.elements)

    def is_whole(self) -> bool:
        return self.order == self.parent.order

    def is_trivial(self) -> bool:
        return self.order == 1

    def is_normal(self) -> bool:
        G = self.parent
        members = self._as_set()
        return all(
            G.conjugate(h, g) in members for h in self.elements for g in G.elements()
        )

    def __repr__(self):
        return f"Subgroup(order {self.order} of {self.parent!r})"


def subgroup(G: FiniteGroup, elements) -> Subgroup:
    """Validated subgroup from an explicit element set."""
    elems = sorted(set(int(x) for x in elements))
    for x in elems:
        if not 0 <= x < G.order:
            raise ElementOutOfRange(f"element {x} out of range", index=x)
    s = set(elems)
    if G.identity not in s:
        raise InvalidGroup("subgroup must contain the identity")
    for a in elems:
        if G.inv(a) not in s:
            raise InvalidGroup(f"subgroup not closed under inversion at {a}")
        for b in elems:
            if G.mul(a, b) not in s:
                raise InvalidGroup(f"subgroup not closed at {a}*{b}")
    return Subgroup(G, tuple(elems))


def whole_group(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, tuple(range(G.order)))


def trivial_subgroup(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, (G.identity,))


def subgroup_closure(G: FiniteGroup, seeds) -> Subgroup:
    seeds = [int(x) for x in seeds]
    for x in seeds:
        if not 0 <= x < G.order:
            raise ElementOutOfRange(f"element {x} out of range", index=x)
    return Subgroup(G, tuple(sorted(_closure_from(G, seeds))))


def normal_closure(G: FiniteGroup, seeds) -> Subgroup:
    """Smallest normal subgroup of G containing the seeds."""
    conjugates = {
        G.conjugate(int(s), g) for s in seeds for g in G.elements()
    }
    return subgroup_closure(G, conjugates)


def commutator_subgroup(G: FiniteGroup, H: Subgroup, K: Subgroup) -> Subgroup:
    """[H, K]: normal closure in <H, K> of all commutators [h, k]."""
    if H.parent is not G or K.parent is not G:
        raise InvalidGroup("subgroups must live in the given group")
    coms = set()
    for h in H.elements:
        hi = G.inv(h)
        for k in K.elements:
            coms.add(G.mul(G.mul(h, k), G.mul(hi, G.inv(k))))
    joined = _closure_from(G, set(H.elements) | set(K.elements))
    conjugates = {G.conjugate(c, g) for c in coms for g in joined}
    return subgroup_closure(G, conjugates)


@dataclass(frozen=True)
class SeriesChain:
    """A descending chain of subgroups produced by an iterated commutator."""

    kind: str
    terms: tuple[Subgroup, ...]

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(t.order for t in self.terms)

    def stabilizes_trivial(self) -> bool:
        return self.terms[-1].is_trivial()


def series(G: FiniteGroup, kind: str = "derived") -> SeriesChain:
    """Derived or lower-central series, strictly descending until stable.

    A nontrivial stable term is repeated once to witness stabilization; the
    trivial term never is.
    """
    if kind not in ("derived", "lower-central"):
        raise InvalidGroup(f"unknown series kind {kind!r}")
    top = whole_group(G)
    terms = [top]
    while True:
        cur = terms[-1]
        if kind == "derived":
            nxt = commutator_subgroup(G, cur, cur)
        else:
            nxt = commutator_subgroup(G, top, cur)
        if nxt.elements == cur.elements:
            if not cur.is_trivial():
                terms.append(nxt)
            break
        terms.append(nxt)
        if nxt.is_trivial():
            break
    return SeriesChain(kind=kind, terms=tuple(terms))


def is_solvable(G: FiniteGroup) -> bool:
    return series(G, "derived").stabilizes_trivial()


def is_nilpotent(G: FiniteGroup) -> bool:
    return series(G, "lower-central").stabilizes_trivial()


def derived_length(G: FiniteGroup) -> int:
    """Number of strict steps in the derived series (0 for the trivial group)."""
    chain = series(G, "derived")
    if not chain.stabilizes_trivial():
        from .errors import NotSolvable

        raise NotSolvable(f"group of order {G.order} is not solvable")
    return len(chain.terms) - 1


def center(G: FiniteGroup) -> Subgroup:
    members = [
        x
        for x in G.elements()
        if all(G.mul(x, g) == G.mul(g, x) for g in G.elements())
    ]
    return Subgroup(G, tuple(sorted(members)))


def all_subgroups(G: FiniteGroup, cap: int = DEFAULT_LATTICE_CAP) -> list[Subgroup]:
    """Every subgroup of G, exhaustively. Guarded by the lattice cap."""
    if G.order > cap:
        raise ClosureCapExceeded(
            f"subgroup enumeration needs order <= {cap}, got {G.order}",
            cap=cap,
            order=G.order,
        )
    seen: dict[frozenset, tuple[int, ...]] = {}
    trivial = (G.identity,)
    seen[frozenset(trivial)] = trivial
    frontier = [trivial]
    while frontier:
        base = frontier.pop()
        base_set = set(base)
        for g in G.elements():
            if g in base_set:
                continue
            closed = tuple(sorted(_closure_from(G, base_set | {g})))
            key = frozenset(closed)
            if key not in seen:
                seen[key] = closed
                frontier.append(closed)
    return [Subgroup(G, elems) for elems in sorted(seen.values(), key=lambda e: (len(e), e))]


def maximal_subgroups(G: FiniteGroup, cap: int = DEFAULT_LATTICE_CAP) -> list[Subgroup]:
    subs = [s for s in all_subgroups(G, cap) if not s.is_whole()]
    out = []
    for s in subs:
        s_set = s._as_set()
        if not any(
            s is not t and s_set < t._as_set() for t in subs
        ):
            out.append(s)
    return out


def frattini(G: FiniteGroup, cap: int = DEFAULT_LATTICE_CAP) -> Subgroup:
    """Intersection of the maximal subgroups; the whole group if none exist."""
    maxes = maximal_subgroups(G, cap)
    if not maxes:
        return whole_group(G)
    common = set(maxes[0].elements)
    for m in maxes[1:]:
        common &= m._as_set()
    return Subgroup(G, tuple(sorted(common)))


@dataclass(frozen=True)
class GroupHom:
    """A verified homomorphism between finite groups, as a total image map."""

    source: FiniteGroup
    target: FiniteGroup
    images: tuple[int, ...]

    def __post_init__(self):
        if len(self.images) != self.source.order:
            raise NotAHomomorphism(
                f"{len(self.images)} images for {self.source.order} elements"
            )
        im = np.array(self.images, dtype=np.int64)
        if im.min() < 0 or im.max() >= self.target.order:
            raise ElementOutOfRange("image index out of range")
        lhs = im[self.source.table]
        rhs = self.target.table[im[:, None], im[None, :]]
        if not np.array_equal(lhs, rhs):
            bad = np.argwhere(lhs != rhs)[0]
            raise NotAHomomorphism(
                f"map is not multiplicative at pair ({int(bad[0])}, {int(bad[1])})"
            )

    def apply(self, x: int) -> int:
        return self.images[x]

    def then(self, other: GroupHom) -> GroupHom:
        if other.source is not self.target and other.source != self.target:
            raise NotAHomomorphism("composition target/source mismatch")
        return GroupHom(
            self.source, other.target, tuple(other.images[i] for i in self.images)
        )

    def kernel(self) -> Subgroup:
        e = self.target.identity
        return Subgroup(
            self.source,
            tuple(sorted(x for x in self.source.elements() if self.images[x] == e)),
        )

    def image_subgroup(self) -> Subgroup:
        return Subgroup(self.target, tuple(sorted(set(self.images))))

    def is_injective(self) -> bool:
        return len(set(self.images)) == self.source.order

    def is_surjective(self) -> bool:
        return len(set(self.images)) == self.target.order

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def inverse(self) -> GroupHom:
        if not self.is_isomorphism():
            raise NotAHomomorphism("only isomorphisms invert")
        back = [0] * self.target.order
        for x, y in enumerate(self.images):
            back[y] = x
        return GroupHom(self.target, self.source, tuple(back))


def identity_hom(G: FiniteGroup) -> GroupHom:
    return GroupHom(G, G, tuple(range(G.order)))


def hom_from_generator_images(
    source: FiniteGroup, target: FiniteGroup, gen_images: dict[int, int]
) -> GroupHom:
    """Extend images of a generating set to a full verified homomorphism.

    Extension proceeds by closure; any inconsistency means the images do not
    define a homomorphism.
    """
    for g in gen_images:
        if g not in source.generator_indices:
            raise NotAHomomorphism(f"{g} is not a declared generator")
    missing = [g for g in source.generator_indices if g not in gen_images]
    if missing:
        raise NotAHomomorphism(f"no image given for generator(s) {missing}")
    images: dict[int, int] = {source.identity: target.identity}
    frontier = [source.identity]
    while frontier:
        x = frontier.pop()
        for g in source.generator_indices:
            y = source.mul(x, g)
            img = target.mul(images[x], gen_images[g])
            if y in images:
                if images[y] != img:
                    raise NotAHomomorphism(
                        f"generator images are inconsistent at element {y}"
                    )
            else:
                images[y] = img
                frontier.append(y)
    return GroupHom(source, target, tuple(images[x] for x in source.elements()))


def subgroup_as_group(G: FiniteGroup, H: Subgroup) -> tuple[FiniteGroup, GroupHom]:
    """H as a standalone group plus its embedding back into G."""
    elems = list(H.elements)
    pos = {x: i for i, x in enumerate(elems)}
    table = [[pos[G.mul(a, b)] for b in elems] for a in elems]
    labels = tuple(G.label(x) for x in elems)
    sub = FiniteGroup(table, labels=labels, name=f"sub{H.order}of{G.name or G.order}")
    embed = GroupHom(sub, G, tuple(elems))
    return sub, embed


def quotient_group(G: FiniteGroup, N: Subgroup) -> tuple[FiniteGroup, GroupHom]:
    """G/N with the canonical projection. N must be normal."""
    if N.parent is not G and N.parent != G:
        raise InvalidGroup("subgroup belongs to a different group")
    if not N.is_normal():
        raise NotNormal(f"subgroup of order {N.order} is not normal")
    rep_of = [-1] * G.order
    for x in G.elements():
        if rep_of[x] != -1:
            continue
        coset = sorted(G.mul(x, n) for n in N.elements)
        for y in coset:
            rep_of[y] = coset[0]
    reps = sorted(set(rep_of))
    idx = {r: i for i, r in enumerate(reps)}
    table = [
        [idx[rep_of[G.mul(a, b)]] for b in reps] for a in reps
    ]
    gen_imgs = sorted(
        {idx[rep_of[g]] for g in G.generator_indices} - {0}
    )
    labels = tuple(f"[{G.label(r)}]" for r in reps)
    Q = FiniteGroup(
        table,
        generator_indices=tuple(gen_imgs) if len(reps) > 1 else (),
        labels=labels,
        name=f"{G.name or G.order}/{N.order}",
    )
    proj = GroupHom(G, Q, tuple(idx[rep_of[x]] for x in G.elements()))
    return Q, proj


def direct_product(
    groups, max_order: int = DEFAULT_MAX_ORDER
) -> tuple[FiniteGroup, list[GroupHom], list[GroupHom]]:
    """Direct product with its injections and projections."""
    groups = list(groups)
    if not groups:
        raise InvalidGroup("empty product")
    n = prod(g.order for g in groups)
    if n > max_order:
        raise ClosureCapExceeded(
            f"product order {n} exceeds cap {max_order}", cap=max_order, order=n
        )
    sizes = [g.order for g in groups]

    def encode(tup) -> int:
        out = 0
        for x, s in zip(tup, sizes):
            out = out * s + x
        return out

    decode = list(itertools.product(*[range(s) for s in sizes]))
    table = [
        [
            encode(tuple(g.mul(a[i], b[i]) for i, g in enumerate(groups)))
            for b in decode
        ]
        for a in decode
    ]
    labels = tuple(
        "(" + ",".join(g.label(x) for g, x in zip(groups, tup)) + ")" for tup in decode
    )
    gens = []
    for i, g in enumerate(groups):
        for gen in g.generator_indices:
            tup = [h.identity for h in groups]
            tup[i] = gen
            gens.append(encode(tuple(tup)))
    P = FiniteGroup(
        table,
        generator_indices=tuple(dict.fromkeys(gens)),
        labels=labels,
        name="x".join(g.name or str(g.order) for g in groups),
    )
    injections = []
    projections = []
    for i, g in enumerate(groups):
        imgs = []
        for x in g.elements():
            tup = [h.identity for h in groups]
            tup[i] = x
            imgs.append(encode(tuple(tup)))
        injections.append(GroupHom(g, P, tuple(imgs)))
        projections.append(GroupHom(P, g, tuple(tup[i] for tup in decode)))
    return P, injections, projections


def abelian_invariants(G: FiniteGroup) -> list[int]:
    """Invariant factors of G/[G,G] (unit factors dropped)."""
    D = commutator_subgroup(G, whole_group(G), whole_group(G))
    Q, _ = quotient_group(G, D)
    n = Q.order
    if n == 1:
        return []
    # present Q on all nonidentity elements; Cayley products are the relators
    relators = []
    for a in range(1, n):
        for b in range(1, n):
            row = [0] * (n - 1)
            row[a - 1] += 1
            row[b - 1] += 1
            c = Q.mul(a, b)
            if c != Q.identity:
                row[c - 1] -= 1
            relators.append(row)
    ab = abelianization_from_presentation(n - 1, relators)
    if ab.free_rank:
        raise InvalidGroup("finite group produced a free abelianization part")
    return list(ab.torsion)


def abelian_invariants_of_quotient(G: FiniteGroup, N: Subgroup) -> list[int]:
    Q, _ = quotient_group(G, N)
    return abelian_invariants(Q)


# -- constructors ------------------------------------------------------------

def perm_from_cycles(degree: int, cycles, one_based: bool = True) -> tuple[int, ...]:
    """Permutation (as an image tuple) from disjoint-or-not cycle notation.

    Cycles are applied right to left, matching composition p*q = "q then p".
    """
    images = list(range(degree))
    for cycle in reversed(list(cycles)):
        pts = [int(p) - (1 if one_based else 0) for p in cycle]
        for p in pts:
            if not 0 <= p < degree:
                raise NotAPermutation(
                    f"point {p + (1 if one_based else 0)} outside degree {degree}"
                )
        if len(set(pts)) != len(pts):
            raise NotAPermutation(f"repeated point in cycle {tuple(cycle)}")
        step = {pts[i]: pts[(i + 1) % len(pts)] for i in range(len(pts))}
        images = [step.get(images[i], images[i]) for i in range(degree)]
    return tuple(images)


def cycle_label(perm: tuple[int, ...]) -> str:
    """Cycle notation with 1-based points; the identity prints as ()."""
    seen = set()
    parts = []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            seen.add(start)
            continue
        cyc = [start]
        seen.add(start)
        nxt = perm[start]
        while nxt != start:
            cyc.append(nxt)
            seen.add(nxt)
            nxt = perm[nxt]
        parts.append("(" + " ".join(str(p + 1) for p in cyc) + ")")
    return "".join(parts) if parts else "()"


def _perm_mul(p, q):
    # (p*q)(x) = p(q(x))
    return tuple(p[q[i]] for i in range(len(p)))


def group_from_permutations(
    degree: int, generators, max_order: int = DEFAULT_MAX_ORDER, name: str = ""
) -> FiniteGroup:
    """Closure of the given permutations under composition, as a table group."""
    if degree < 1:
        raise NotAPermutation(f"degree {degree} must be positive")
    gens = []
    for g in generators:
        g = tuple(int(x) for x in g)
        if len(g) != degree or sorted(g) != list(range(degree)):
            raise NotAPermutation(f"{g} is not a permutation of degree {degree}")
        gens.append(g)
    ident = tuple(range(degree))
    elems = [ident]
    index = {ident: 0}
    queue = [ident]
    while queue:
        x = queue.pop(0)
        for g in gens:
            y = _perm_mul(x, g)
            if y not in index:
                if len(elems) >= max_order:
                    raise ClosureCapExceeded(
                        f"closure exceeded cap {max_order}", cap=max_order
                    )
                index[y] = len(elems)
                elems.append(y)
                queue.append(y)
    table = [[index[_perm_mul(a, b)] for b in elems] for a in elems]
    labels = tuple(cycle_label(p) for p in elems)
    gen_idx = tuple(dict.fromkeys(index[g] for g in gens))
    return FiniteGroup(table, generator_indices=gen_idx or None, labels=labels, name=name)


def cyclic_group(n: int, name: str = "") -> FiniteGroup:
    if n < 1:
        raise InvalidGroup(f"cyclic order {n} must be positive")
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    labels = tuple("e" if i == 0 else ("g" if i == 1 else f"g^{i}") for i in range(n))
    gens = (1,) if n > 1 else None
    return FiniteGroup(table, generator_indices=gens, labels=labels, name=name or f"C{n}")


def dihedral_group(n: int, name: str = "") -> FiniteGroup:
    """Dihedral group of order 2n: r of order n, s of order 2, s r s = r^-1."""
    if n < 1:
        raise InvalidGroup(f"dihedral parameter {n} must be positive")

    def idx(b, k):
        return b * n + k % n

    table = [[0] * (2 * n) for _ in range(2 * n)]
    for b1 in range(2):
        for k1 in range(n):
            for b2 in range(2):
                for k2 in range(n):
                    k = (k1 + (k2 if b1 == 0 else -k2)) % n
                    table[idx(b1, k1)][idx(b2, k2)] = idx(b1 ^ b2, k)
    labels = []
    for b in range(2):
        for k in range(n):
            if b == 0:
                labels.append("e" if k == 0 else f"r{k}")
            else:
                labels.append("s" if k == 0 else f"s.r{k}")
    return FiniteGroup(
        table, generator_indices=(1, n) if n > 1 else (n,), labels=tuple(labels),
        name=name or f"D{n}",
    )


def quaternion_group(name: str = "Q8") -> FiniteGroup:
    """The quaternion group {+-1, +-i, +-j, +-k}."""
    axis_mul = {}
    for x in range(4):
        axis_mul[(0, x)] = (0, x)
        axis_mul[(x, 0)] = (0, x)
    for x in (1, 2, 3):
        axis_mul[(x, x)] = (1, 0)
    axis_mul[(1, 2)] = (0, 3)
    axis_mul[(2, 1)] = (1, 3)
    axis_mul[(2, 3)] = (0, 1)
    axis_mul[(3, 2)] = (1, 1)
    axis_mul[(3, 1)] = (0, 2)
    axis_mul[(1, 3)] = (1, 2)

    def idx(sign, axis):
        return 2 * axis + sign

    table = [[0] * 8 for _ in range(8)]
    for a1 in range(4):
        for s1 in range(2):
            for a2 in range(4):
                for s2 in range(2):
                    s, a = axis_mul[(a1, a2)]
                    table[idx(s1, a1)][idx(s2, a2)] = idx(s1 ^ s2 ^ s, a)
    labels = ("1", "-1", "i", "-i", "j", "-j", "k", "-k")
    return FiniteGroup(table, generator_indices=(2, 4), labels=labels, name=name)


def abelian_group(divisors, name: str = "") -> FiniteGroup:
    """Finite abelian group as a direct product of cyclic groups."""
    divisors = [int(d) for d in divisors]
    if not divisors:
        return cyclic_group(1, name=name or "C1")
    if any(d < 1 for d in divisors):
        raise InvalidGroup(f"cyclic orders {divisors} must be positive")
    if len(divisors) == 1:
        return cyclic_group(divisors[0], name=name)
    P, _, _ = direct_product([cyclic_group(d) for d in divisors])
    return FiniteGroup(
        P.table,
        generator_indices=P.generator_indices,
        labels=P.labels,
        name=name or "x".join(f"C{d}" for d in divisors),
    )


def symmetric_group(n: int, name: str = "") -> FiniteGroup:
    if n == 1:
        return group_from_permutations(1, [], name=name or "S1")
    gens = [perm_from_cycles(n, [(1, 2)]), perm_from_cycles(n, [tuple(range(1, n + 1))])]
    return group_from_permutations(n, gens, name=name or f"S{n}")


def alternating_group(n: int, name: str = "") -> FiniteGroup:
    if n < 3:
        return group_from_permutations(max(n, 1), [], name=name or f"A{n}")
    gens = [perm_from_cycles(n, [(i, i + 1, i + 2)]) for i in range(1, n - 1)]
    return group_from_permutations(n, gens, name=name or f"A{n}")


def nonidentity(G: FiniteGroup, x: int) -> int:
    """Pass-through guard: raises if x is the identity."""
    if x == G.identity:
        raise IdentityElement("expected a nonidentity element")
    return x
