"""Theorem engines: one per separation strategy.

Each engine builds the quotient its strategy calls for, induces the
homomorphism out of the amalgam, runs the verification exhaustively, and
packages a Certificate. separate_element dispatches a word through every
engine whose hypotheses match the amalgam and returns the first witness
with a verified-solvable target, or NotSeparatedAtLevelOne.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import oracle as oracle_mod
from .certs import Certificate, Check, NotSeparatedAtLevelOne, WitnessResult
from .errors import (
    EmbeddingTypeMismatch,
    IdentityElement,
    IdentityWord,
    IncompatibleAmalgam,
    NotIsomorphism,
    NotProperSubgroup,
    NotSolvable,
    NotTorsionFree,
    OrderMismatch,
)
from .groups import (
    DEFAULT_LATTICE_CAP,
    DEFAULT_MAX_ORDER,
    FiniteGroup,
    GroupHom,
    Subgroup,
    abelian_invariants,
    center,
    cyclic_group,
    derived_length,
    direct_product,
    frattini,
    hom_from_generator_images,
    identity_hom,
    is_nilpotent,
    is_solvable,
    normal_closure,
    quotient_group,
    series,
    subgroup,
    subgroup_as_group,
    subgroup_closure,
    whole_group,
)
from .lattice import FGAbelian, IntMatrix, LatticeSubgroup, finite_index_split, snf
from .words import (
    AbelianToFiniteHom,
    AmalgamSpec,
    InducedHom,
    build_generalized_central_product,
    identified_direct_quotient,
    induce_hom,
    reduce,
    validate_spec,
    word_label,
)

ENGINE_ORDER = ("double", "central", "cyclic", "abelian-factor", "oracle")


def derived_depth(G: FiniteGroup, g: int) -> int:
    """The unique m >= 1 with g in the m-th derived term but not the next."""
    if g == G.identity:
        raise IdentityElement("the identity has no finite depth")
    chain = series(G, "derived")
    if not chain.stabilizes_trivial():
        raise NotSolvable(f"{G!r} is not solvable")
    depth = 0
    for idx, term in enumerate(chain.terms):
        if term.contains(g):
            depth = idx + 1
    return depth


def _derived2(G: FiniteGroup) -> Subgroup:
    terms = series(G, "derived").terms
    return terms[1] if len(terms) > 1 else terms[0]


def _gen_images(G: FiniteGroup, apply, label) -> list:
    return [[G.label(g), label(apply(g))] for g in G.generator_indices]


# -------------------------------------------------- abelianized product


def not_perfect_certificate(
    A: FiniteGroup,
    B: FiniteGroup,
    C_A: Subgroup,
    C_B: Subgroup,
    iso: dict,
    *,
    frattini_cap: int = DEFAULT_LATTICE_CAP,
) -> Certificate:
    """Nontrivial abelian quotient of an amalgam over proper subgroups.

    Each side is collapsed by the normal closure of its copy of C together
    with its commutator subgroup; the product of the two collapses is an
    abelian group D the amalgam maps onto. iso maps element indices of C_A
    to element indices of C_B.
    """
    if C_A.parent != A or C_B.parent != B:
        raise IncompatibleAmalgam("subgroups must live in the given factors")
    if C_A.is_whole():
        raise NotProperSubgroup("the amalgam copy in the first factor is not proper")
    if C_B.is_whole():
        raise NotProperSubgroup("the amalgam copy in the second factor is not proper")
    if C_A.order != C_B.order:
        raise IncompatibleAmalgam(
            f"subgroup orders {C_A.order} and {C_B.order} cannot be identified"
        )
    dom = set(C_A.elements)
    if set(iso.keys()) != dom or sorted(iso.values()) != sorted(C_B.elements):
        raise NotIsomorphism("iso is not a bijection between the two copies")
    for x in dom:
        for y in dom:
            if iso[A.mul(x, y)] != B.mul(iso[x], iso[y]):
                raise NotIsomorphism("iso does not preserve products")

    der_a = _derived2(A)
    der_b = _derived2(B)
    N_A = normal_closure(A, list(C_A.elements) + list(der_a.elements))
    N_B = normal_closure(B, list(C_B.elements) + list(der_b.elements))
    QA, proj_a = quotient_group(A, N_A)
    QB, proj_b = quotient_group(B, N_B)
    D_fin, injs, _ = direct_product([QA, QB])
    d_order = D_fin.order
    divisors = abelian_invariants(QA) + abelian_invariants(QB)
    if divisors:
        diag = IntMatrix.from_rows(
            [[d if i == j else 0 for j in range(len(divisors))] for i, d in enumerate(divisors)]
        )
        invariants = [d for d in snf(diag).invariant_factors if d > 1]
    else:
        invariants = []

    checks = [
        Check(
            "D_nontrivial",
            d_order > 1,
            f"|D| = {d_order}, invariant factors {invariants}",
        )
    ]
    # the induced map exists because both sides kill the amalgam copies
    map_a = proj_a.then(injs[0])
    map_b = proj_b.then(injs[1])
    agree = all(
        map_a.apply(x) == D_fin.identity and map_b.apply(iso[x]) == D_fin.identity
        for x in C_A.elements
    )
    checks.append(
        Check(
            "maps_agree_on_amalgam",
            agree,
            "both copies of the amalgam map to the identity of D",
        )
    )
    gens = [map_a.apply(x) for x in A.elements()] + [map_b.apply(x) for x in B.elements()]
    checks.append(
        Check(
            "epimorphism",
            subgroup_closure(D_fin, gens).order == d_order,
            "factor images generate D",
        )
    )
    if is_nilpotent(A):
        closure = subgroup_closure(A, list(C_A.elements) + list(der_a.elements))
        evidence = f"closure of C_A and the commutators has order {closure.order} of {A.order}"
        if A.order <= frattini_cap:
            phi = frattini(A, frattini_cap)
            inside = all(phi.contains(x) for x in closure.elements)
            evidence += f"; contained in the Frattini subgroup: {inside}"
        checks.append(Check("frattini_argument", closure.order < A.order, evidence))

    return Certificate(
        kind="not_perfect",
        quotient_description={
            "order": d_order,
            "abelian_invariants": invariants,
            "left_quotient_order": QA.order,
            "right_quotient_order": QB.order,
        },
        hom_data={
            "factor_0": _gen_images(A, map_a.apply, D_fin.label),
            "factor_1": _gen_images(B, map_b.apply, D_fin.label),
        },
        checks=checks,
    )


# ---------------------------------------------- cyclic identification


@dataclass
class _EngineParts:
    certificate: Certificate
    target: FiniteGroup
    hom: InducedHom


def _cyclic_parts(
    A: FiniteGroup, B: FiniteGroup, a: int, b: int, max_order: int
) -> _EngineParts:
    if a == A.identity or b == B.identity:
        raise IdentityElement("amalgam generators must be nonidentity")
    k = A.element_order(a)
    if k != B.element_order(b):
        raise OrderMismatch(
            f"generator orders {k} and {B.element_order(b)} differ",
            left=k,
            right=B.element_order(b),
        )
    if not is_solvable(A):
        raise NotSolvable("left factor is not solvable")
    if not is_solvable(B):
        raise NotSolvable("right factor is not solvable")
    m = derived_depth(A, a)
    n = derived_depth(B, b)
    Abar, proj_a = quotient_group(A, series(A, "derived").terms[m])
    Bbar, proj_b = quotient_group(B, series(B, "derived").terms[n])
    abar = proj_a.apply(a)
    bbar = proj_b.apply(b)
    D, proj_d = identified_direct_quotient(Abar, Bbar, abar, bbar, max_order)
    P = proj_d.source
    inj_a = GroupHom(Abar, P, tuple(x * Bbar.order for x in Abar.elements()))
    inj_b = GroupHom(Bbar, P, tuple(range(Bbar.order)))
    map_a = proj_a.then(inj_a).then(proj_d)
    map_b = proj_b.then(inj_b).then(proj_d)

    C = cyclic_group(k)
    e_a = hom_from_generator_images(C, A, {1: a})
    e_b = hom_from_generator_images(C, B, {1: b})
    spec = validate_spec(AmalgamSpec([A, B], C, [e_a, e_b]))
    hom = induce_hom(spec, D, [map_a, map_b])

    dying = [j for j in range(1, k) if map_a.apply(A.power(a, j)) == D.identity]
    separates = not dying
    evidence = (
        f"all powers 1..{k - 1} of the amalgam generator survive"
        if separates
        else f"power {dying[0]} of the amalgam generator maps to the identity"
    )
    cert = Certificate(
        kind="cyclic_amalgam",
        quotient_description={
            "order": D.order,
            "derived_length": derived_length(D),
            "left_depth": m,
            "right_depth": n,
            "left_quotient_order": Abar.order,
            "right_quotient_order": Bbar.order,
        },
        hom_data={
            "factor_0": _gen_images(A, map_a.apply, D.label),
            "factor_1": _gen_images(B, map_b.apply, D.label),
        },
        checks=[
            Check("separates_C", separates, evidence),
            Check(
                "images_agree_on_amalgam",
                True,
                "induced map verified on every amalgam element",
            ),
        ],
        claims=[
            "the kernel meets the amalgam trivially only when separates_C holds",
            "the kernel is a free group (classical subgroup theory, not machine-verified)",
        ],
    )
    return _EngineParts(cert, D, hom)


def cyclic_amalgam_quotient(
    A: FiniteGroup, B: FiniteGroup, a: int, b: int, max_order: int = DEFAULT_MAX_ORDER
) -> Certificate:
    """Identify the images of a and b across the two depth-truncated factors."""
    return _cyclic_parts(A, B, a, b, max_order).certificate


# ------------------------------------------------ central identification


def _central_parts(factors, C, embeddings, max_order: int) -> _EngineParts:
    S, mus = build_generalized_central_product(factors, C, embeddings, max_order)
    spec = validate_spec(AmalgamSpec(list(factors), C, list(embeddings))) if len(factors) > 1 else None
    hom = induce_hom(spec, S, mus) if spec is not None else None

    inj_evidence = []
    all_inj = True
    for i, mu in enumerate(mus):
        ok, pair = oracle_mod.exhaustive_injectivity(mu, whole_group(factors[i]))
        all_inj = all_inj and ok
        if not ok:
            inj_evidence.append(
                f"factor {i}: {factors[i].label(pair[0])} and {factors[i].label(pair[1])} collide"
            )
    solvable = is_solvable(S)
    order_product = 1
    for f in factors:
        order_product *= f.order
    expected = order_product // C.order ** (len(factors) - 1) if len(factors) else 1
    checks = [
        Check(
            "mu_injective_on_factors",
            all_inj,
            "; ".join(inj_evidence) if inj_evidence else "exhaustive scan per factor",
        ),
        Check(
            "S_solvable",
            solvable,
            f"derived length {derived_length(S)}" if solvable else "derived series stabilizes nontrivially",
        ),
        Check(
            "order_count",
            S.order == expected,
            f"|S| = {S.order}, factor orders give {expected}",
        ),
    ]
    cert = Certificate(
        kind="central_amalgam",
        quotient_description={
            "order": S.order,
            "derived_length": derived_length(S) if solvable else None,
        },
        hom_data={
            f"factor_{i}": _gen_images(factors[i], mus[i].apply, S.label)
            for i in range(len(factors))
        },
        checks=checks,
        claims=[
            "the kernel of the induced map is free, making the amalgam (solvable)-by-free (not machine-verified)"
        ],
    )
    return _EngineParts(cert, S, hom)


def central_amalgam_quotient(
    factors, C: FiniteGroup, embeddings, max_order: int = DEFAULT_MAX_ORDER
) -> Certificate:
    """Collapse the product of the factors along their shared central subgroup."""
    return _central_parts(list(factors), C, list(embeddings), max_order).certificate


# ------------------------------------------------------- double retraction


def _double_parts(factors, isos, C_sub: Subgroup) -> _EngineParts:
    factors = list(factors)
    isos = list(isos)
    if len(factors) < 2:
        raise IncompatibleAmalgam("a double needs at least two copies")
    if len(isos) != len(factors):
        raise IncompatibleAmalgam(f"{len(isos)} isomorphisms for {len(factors)} copies")
    A0 = factors[0]
    if C_sub.parent != A0:
        raise IncompatibleAmalgam("the amalgam subgroup must live in the first copy")
    for i, (f, iso) in enumerate(zip(factors, isos)):
        if not isinstance(iso, GroupHom) or iso.source != A0 or iso.target != f:
            raise NotIsomorphism(f"map {i} must go from the first copy to copy {i}", factor=i)
        if not iso.is_isomorphism():
            raise NotIsomorphism(f"map {i} is not an isomorphism", factor=i)

    C_grp, incl = subgroup_as_group(A0, C_sub)
    embeds = [incl.then(iso) for iso in isos]
    spec = validate_spec(AmalgamSpec(factors, C_grp, embeds))
    psi = induce_hom(spec, A0, [iso.inverse() for iso in isos])

    retract = all(
        psi.apply_word([(0, isos[0].apply(x))]) == x for x in A0.elements()
    )
    inj_all = True
    inj_evidence = []
    for i, f in enumerate(factors):
        restricted = GroupHom(f, A0, tuple(psi.apply_word([(i, y)]) for y in f.elements()))
        ok, pair = oracle_mod.exhaustive_injectivity(restricted, whole_group(f))
        inj_all = inj_all and ok
        if not ok:
            inj_evidence.append(f"copy {i}: {f.label(pair[0])} vs {f.label(pair[1])}")
    kernel_ok = True
    nontrivial_kernel_words = 0
    for i in range(1, len(factors)):
        for x in A0.elements():
            w = [(0, isos[0].apply(x)), (i, factors[i].inv(isos[i].apply(x)))]
            if psi.apply_word(w) != A0.identity:
                kernel_ok = False
            if reduce(spec, w).length > 0:
                nontrivial_kernel_words += 1
    solvable = is_solvable(A0)
    cert = Certificate(
        kind="double",
        quotient_description={
            "order": A0.order,
            "derived_length": derived_length(A0) if solvable else None,
            "copies": len(factors),
        },
        hom_data={
            f"factor_{i}": _gen_images(factors[i], isos[i].inverse().apply, A0.label)
            for i in range(len(factors))
        },
        checks=[
            Check("retraction", retract, "identity on the first copy, exhaustively"),
            Check(
                "injective_on_each_factor",
                inj_all,
                "; ".join(inj_evidence) if inj_evidence else "exhaustive scan per copy",
            ),
            Check(
                "kernel_generators",
                kernel_ok,
                f"every word x * iso_i(x)^-1 maps to the identity; "
                f"{nontrivial_kernel_words} of them have nontrivial normal form",
            ),
        ],
        claims=[
            "the kernel is the normal closure of the words x * iso_i(x)^-1 (not machine-verified)"
        ],
    )
    return _EngineParts(cert, A0, psi)


def double_retraction(factors, isos, C_sub: Subgroup) -> Certificate:
    """Collapse isomorphic copies glued along a common subgroup onto copy 0."""
    return _double_parts(factors, isos, C_sub).certificate


# -------------------------------------------------- lattice factor quotient


@dataclass
class _AbelianParts:
    certificate: Certificate
    target: FiniteGroup
    split: object
    basis_images: list


def _quotient_of_lattice(split) -> FiniteGroup:
    reps = list(split.coset_reps)
    n = len(reps)
    table = [
        [split.coset_index(tuple(a + b for a, b in zip(u, v))) for v in reps]
        for u in reps
    ]
    labels = tuple("(" + ",".join(str(x) for x in v) + ")" for v in reps)
    return FiniteGroup(table, labels=labels, name=f"lattice-quotient-{n}")


def _abelian_parts(A: FGAbelian, C) -> _AbelianParts:
    if not isinstance(A, FGAbelian):
        raise NotTorsionFree("the split factor must be a finitely generated abelian group")
    if A.torsion:
        raise NotTorsionFree("the split factor must be torsion-free")
    if isinstance(C, FGAbelian):
        raise EmbeddingTypeMismatch(
            "pass the amalgam as a sublattice (its embedded image), not a bare group"
        )
    if isinstance(C, IntMatrix):
        C = LatticeSubgroup(A.ngens, C)
    if not isinstance(C, LatticeSubgroup):
        C = LatticeSubgroup.from_vectors(A.ngens, list(C))
    if C.ambient_rank != A.ngens:
        raise EmbeddingTypeMismatch(
            f"sublattice lives in rank {C.ambient_rank}, factor has rank {A.ngens}"
        )
    split = finite_index_split(A.ngens, C)
    Q = _quotient_of_lattice(split)
    basis_images = []
    for j in range(A.ngens):
        e_j = tuple(1 if t == j else 0 for t in range(A.ngens))
        basis_images.append(split.coset_index(e_j))
    kills = all(
        split.contains(C.basis.column(j)) for j in range(C.basis.cols)
    )
    expected = 1
    for d in split.divisors:
        expected *= d
    gen_ok = subgroup_closure(Q, basis_images).order == Q.order
    claims = [
        "the kernel is generated by the conjugates of the other factor together "
        "with the finite-index subgroup (not machine-verified)",
        "the amalgam is (residually solvable)-by-abelian (not machine-verified)",
    ]
    if split.index == 1:
        claims.insert(0, "vacuous quotient")
    cert = Certificate(
        kind="abelian_factor",
        quotient_description={
            "order": split.index,
            "abelian_invariants": [d for d in split.divisors if d > 1],
        },
        hom_data={
            "basis_images": [
                [f"e{j + 1}", Q.label(basis_images[j])] for j in range(A.ngens)
            ]
        },
        checks=[
            Check("kills_C", kills, "every sublattice basis vector has zero digits"),
            Check(
                "image_order",
                Q.order == split.index and split.index == expected,
                f"index {split.index} = product of divisors {list(split.divisors)}",
            ),
            Check("epimorphism", gen_ok, "basis images generate the quotient"),
        ],
        claims=claims,
    )
    return _AbelianParts(cert, Q, split, basis_images)


def abelian_factor_quotient(A: FGAbelian, C, B=None) -> Certificate:
    """Finite quotient of the lattice factor that kills the amalgam (and B)."""
    return _abelian_parts(A, C).certificate


# ---------------------------------------------------------------- dispatcher


def _witness(engine, cert, target, word, label, image):
    dl = derived_length(target)
    return WitnessResult(
        word=list(word),
        word_label=label,
        engine=engine,
        target_description={
            "order": target.order,
            "name": target.name,
            "derived_length": dl,
        },
        hom_data=cert.hom_data,
        image=image,
        image_label=target.label(image),
        target_derived_length=dl,
        certificate=cert,
    )


def separate_element(
    spec: AmalgamSpec,
    w,
    *,
    engines=ENGINE_ORDER,
    budget: int = oracle_mod.DEFAULT_BUDGET,
    catalog_max: int = oracle_mod.DEFAULT_CATALOG_MAX,
    max_order: int = DEFAULT_MAX_ORDER,
):
    """First engine whose solvable quotient keeps the word alive.

    Engines run in the fixed order double, central, cyclic, abelian-factor,
    then the oracle's catalog search. Returns a WitnessResult, or
    NotSeparatedAtLevelOne carrying every attempted certificate.
    """
    unknown = [e for e in engines if e not in ENGINE_ORDER]
    if unknown:
        raise ValueError(f"unknown engines: {unknown}")
    validate_spec(spec)
    nf = reduce(spec, w)
    if nf.is_identity():
        raise IdentityWord("the word reduces to the identity")
    label = word_label(spec, w)
    attempts = []
    notes = []
    factors = spec.factors
    C = spec.amalgam
    all_finite = all(isinstance(f, FiniteGroup) for f in factors)
    finite_c = isinstance(C, FiniteGroup)

    if "double" in engines and all_finite and finite_c:
        tables_match = all(f == factors[0] for f in factors[1:])
        images_match = all(
            e.images == spec.embeddings[0].images for e in spec.embeddings[1:]
        )
        if tables_match and images_match:
            C_sub = subgroup(factors[0], spec.embeddings[0].images)
            isos = [identity_hom(factors[0]) for _ in factors]
            parts = _double_parts(factors, isos, C_sub)
            image = parts.hom.apply_word(w)
            if image != parts.target.identity and is_solvable(parts.target):
                return _witness("double", parts.certificate, parts.target, w, label, image)
            attempts.append(parts.certificate)
            notes.append("double: word maps to the identity under the retraction")

    if "central" in engines and all_finite and finite_c:
        central_ok = all(
            set(e.images) <= set(center(f).elements)
            for f, e in zip(factors, spec.embeddings)
        )
        if central_ok:
            parts = _central_parts(factors, C, spec.embeddings, max_order)
            image = parts.hom.apply_word(w)
            if image != parts.target.identity and is_solvable(parts.target):
                return _witness(
                    "central_amalgam", parts.certificate, parts.target, w, label, image
                )
            attempts.append(parts.certificate)
            notes.append("central: word maps to the identity in the central product")

    if "cyclic" in engines and all_finite and finite_c and len(factors) == 2:
        gen = next(
            (c for c in C.elements() if C.element_order(c) == C.order), None
        )
        applicable = (
            gen is not None
            and C.order > 1
            and is_solvable(factors[0])
            and is_solvable(factors[1])
        )
        if applicable:
            a = spec.embeddings[0].apply(gen)
            b = spec.embeddings[1].apply(gen)
            parts = _cyclic_parts(factors[0], factors[1], a, b, max_order)
            image = parts.hom.apply_word(w)
            if image != parts.target.identity and is_solvable(parts.target):
                return _witness(
                    "cyclic_amalgam", parts.certificate, parts.target, w, label, image
                )
            attempts.append(parts.certificate)
            notes.append("cyclic: word maps to the identity in the depth quotient")

    if "abelian-factor" in engines and not finite_c:
        for ai, f in enumerate(factors):
            if not isinstance(f, FGAbelian) or f.torsion:
                continue
            e = spec.embeddings[ai]
            cols = [e.column(j) for j in range(e.cols)] if e is not None else []
            parts = _abelian_parts(f, LatticeSubgroup.from_vectors(f.ngens, cols))
            Q = parts.target
            maps = []
            for bi, g in enumerate(factors):
                if bi == ai:
                    maps.append(AbelianToFiniteHom(g, Q, parts.basis_images))
                elif isinstance(g, FiniteGroup):
                    maps.append(GroupHom(g, Q, tuple([Q.identity] * g.order)))
                else:
                    maps.append(AbelianToFiniteHom(g, Q, (Q.identity,) * g.ngens))
            hom = induce_hom(spec, Q, maps)
            image = hom.apply_word(w)
            if image != Q.identity:
                return _witness("abelian_factor", parts.certificate, Q, w, label, image)
            attempts.append(parts.certificate)
            notes.append(
                f"abelian-factor (factor {ai}): not separated at level 1"
            )

    if "oracle" in engines and all_finite and finite_c:
        pres = oracle_mod.presentation_of_amalgam(spec)
        gw = oracle_mod.amalgam_word_to_generators(pres, w)
        hit = oracle_mod.hom_search(
            pres,
            oracle_mod.solvable_catalog(catalog_max),
            gw,
            budget,
            word=w,
            word_label=label,
        )
        if isinstance(hit, WitnessResult):
            return hit
        notes.append(
            f"oracle: exhausted {hit.nodes} nodes over {hit.targets_tried} targets"
        )

    return NotSeparatedAtLevelOne(
        word=list(w),
        word_label=label,
        reason="; ".join(notes) if notes else "no engine was applicable",
        certificates=attempts,
    )
