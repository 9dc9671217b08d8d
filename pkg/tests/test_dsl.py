"""Text format: parsing, canonical printing, and resolution."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from amalgam.dsl import (
    MAX_WORD_SYLLABLES,
    AmalgamDecl,
    EmbedDecl,
    GroupDecl,
    SpecFile,
    WordDecl,
    format_specfile,
    parse,
    resolve,
)
from amalgam.errors import (
    EmbeddingTypeMismatch,
    NotAHomomorphism,
    ParseError,
    ResolutionError,
    WordTooLong,
)
from amalgam.groups import FiniteGroup
from amalgam.lattice import FGAbelian, IntMatrix
from amalgam.words import reduce, word_label

S3_PAIR = """\
group S3 = perm 3 { (1 2); (1 2 3) }
group C3 = cyclic 3
embed ea : C3 -> S3 { g -> (1 2 3) }
embed eb : C3 -> S3 { g1 -> (1 2 3) }
amalgam G = S3, S3 over C3 via ea, eb
word t in G = 0:(1 2) * 1:(1 2 3)
"""

LATTICE_PAIR = """\
group A = free-abelian 2
group B = free-abelian 1
group C = free-abelian 1
embed ea : C -> A { g -> g1^2 }
embed eb : C -> B { g -> g1 }
amalgam M = A, B over C via ea, eb
word wa in M = A:g1
word wb in M = B:g1
"""


def test_parse_declaration_kinds():
    sf = parse(S3_PAIR)
    kinds = [type(d) for d in sf.declarations]
    assert kinds == [GroupDecl, GroupDecl, EmbedDecl, EmbedDecl, AmalgamDecl, WordDecl]
    assert sf.by_name("G").factors == ("S3", "S3")
    assert sf.by_name("missing") is None


def test_empty_input_parses_to_empty_file():
    assert parse("") == SpecFile()
    assert parse("\n  \n# only a comment\n") == SpecFile()
    assert format_specfile(SpecFile()) == ""


def test_comments_and_blank_lines_are_skipped():
    sf = parse("# header\n\ngroup C2 = cyclic 2  # trailing note\n")
    assert len(sf.declarations) == 1
    assert sf.declarations[0].order == 2


def test_bare_g_is_generator_one():
    sf = parse("group C4 = cyclic 4\ngroup C2 = cyclic 2\n"
               "embed e : C2 -> C4 { g -> g^2 }\n")
    decl = sf.by_name("e")
    assert decl.images[0][0] == 1


def test_word_syllables_and_inverse_power():
    sf = parse(S3_PAIR + "word w in G = 0:(1 2) * 1:(1 2 3)^-1\n")
    w = sf.by_name("w")
    assert len(w.syllables) == 2
    assert w.syllables[1][1].atoms[0].power == -1


def test_round_trip_on_the_sample_files():
    for text in (S3_PAIR, LATTICE_PAIR):
        printed = format_specfile(parse(text))
        assert parse(printed) == parse(text)
        assert format_specfile(parse(printed)) == printed


def test_print_normalizes_bare_g():
    printed = format_specfile(parse("group C6 = cyclic 6\n"
                                    "group C3 = cyclic 3\n"
                                    "embed e : C3 -> C6 { g -> g^2 }\n"))
    assert "g1 -> g1^2" in printed


# ---------------------------------------------------------------- errors


def test_unknown_statement_location():
    with pytest.raises(ParseError) as exc:
        parse("group C2 = cyclic 2\nfnord x = 1\n")
    assert (exc.value.line, exc.value.col) == (2, 1)
    assert "group, embed, amalgam, or word" in exc.value.expected


def test_duplicate_name_rejected():
    with pytest.raises(ParseError, match="already declared"):
        parse("group X = cyclic 2\ngroup X = cyclic 3\n")


def test_forward_reference_rejected():
    with pytest.raises(ResolutionError) as exc:
        parse("group C2 = cyclic 2\n"
              "embed e : C2 -> S3 { g -> g }\n"
              "group S3 = perm 3 { (1 2); (1 2 3) }\n")
    assert exc.value.name == "S3"


def test_unknown_amalgam_in_word():
    with pytest.raises(ResolutionError) as exc:
        parse("word w in Nope = 0:g\n")
    assert exc.value.name == "Nope"


def test_generator_symbol_out_of_range():
    with pytest.raises(ParseError, match="out of range"):
        parse("group C2 = cyclic 2\ngroup C4 = cyclic 4\n"
              "embed e : C2 -> C4 { g2 -> g }\n")


def test_cycle_point_outside_degree():
    with pytest.raises(ParseError) as exc:
        parse("group S3 = perm 3 { (1 4) }")
    assert exc.value.line == 1
    assert "degree 3" in str(exc.value)


def test_cycle_atom_rejected_outside_perm_groups():
    with pytest.raises(ParseError, match="only valid in permutation groups"):
        parse("group C4 = cyclic 4\ngroup C2 = cyclic 2\n"
              "embed e : C2 -> C4 { g -> (1 2) }\n")


def test_free_factor_before_torsion_rejected():
    with pytest.raises(ParseError, match="torsion divisors must precede"):
        parse("group A = abelian [0,2]\n")


def test_divisor_one_rejected():
    with pytest.raises(ParseError, match="at least 2"):
        parse("group A = abelian [1,2]\n")


def test_missing_generator_image():
    with pytest.raises(ParseError, match="no image for generator"):
        parse("group V = abelian [2,2]\ngroup C2 = cyclic 2\n"
              "embed e : V -> C2 { g1 -> g }\n")


def test_repeated_generator_image():
    with pytest.raises(ParseError, match="mapped twice"):
        parse("group C2 = cyclic 2\ngroup C4 = cyclic 4\n"
              "embed e : C2 -> C4 { g1 -> g^2; g1 -> g^2 }\n")


def test_trailing_tokens_rejected():
    with pytest.raises(ParseError) as exc:
        parse("group A = cyclic 2 extra")
    assert exc.value.col == 20


def test_unterminated_line_points_past_the_end():
    with pytest.raises(ParseError) as exc:
        parse("group A = perm 3 { (1 2)")
    assert exc.value.col == len("group A = perm 3 { (1 2)") + 1


def test_factor_name_ambiguous_in_doubled_amalgam():
    with pytest.raises(ResolutionError, match="use a 0-based index"):
        parse(S3_PAIR + "word w in G = S3:(1 2)\n")


def test_factor_index_out_of_range():
    with pytest.raises(ParseError, match="factor index 2 out of range"):
        parse(S3_PAIR + "word w in G = 2:(1 2)\n")


def test_word_cap_enforced():
    body = " * ".join(f"{i % 2}:(1 2)" for i in range(MAX_WORD_SYLLABLES + 1))
    with pytest.raises(WordTooLong):
        parse(S3_PAIR + f"word w in G = {body}\n")


def test_cap_boundary_still_parses():
    body = " * ".join(f"{i % 2}:(1 2)" for i in range(MAX_WORD_SYLLABLES))
    sf = parse(S3_PAIR + f"word w in G = {body}\n")
    assert len(sf.by_name("w").syllables) == MAX_WORD_SYLLABLES


# ------------------------------------------------------------- resolution


def test_resolve_builds_the_permutation_group():
    ctx = resolve(parse(S3_PAIR))
    S3 = ctx.groups["S3"]
    assert isinstance(S3, FiniteGroup)
    assert S3.order == 6
    assert ctx.groups["C3"].order == 3


def test_resolve_embedding_is_a_hom():
    ctx = resolve(parse(S3_PAIR))
    e = ctx.embeds["ea"]
    C3, S3 = ctx.groups["C3"], ctx.groups["S3"]
    g = e.apply(1)
    assert S3.label(g) == "(1 2 3)"
    assert e.apply(C3.mul(1, 1)) == S3.mul(g, g)


def test_resolve_amalgam_word_and_reduce():
    ctx = resolve(parse(S3_PAIR))
    spec = ctx.amalgams["G"]
    name, w = ctx.words["t"]
    assert name == "G"
    assert word_label(spec, w) == "0:(1 2) * 1:(1 2 3)"
    assert not reduce(spec, w).is_identity()


def test_resolve_abelian_groups_and_matrix_embedding():
    ctx = resolve(parse(LATTICE_PAIR))
    A = ctx.groups["A"]
    assert isinstance(A, FGAbelian)
    assert (A.free_rank, A.torsion) == (2, ())
    ea = ctx.embeds["ea"]
    assert isinstance(ea, IntMatrix)
    assert ea.to_rows() == [[2], [0]]
    _, wa = ctx.words["wa"]
    assert wa == [(0, (1, 0))]


def test_resolve_mixed_divisor_list():
    ctx = resolve(parse("group T = abelian [2,4,0]\n"))
    T = ctx.groups["T"]
    assert (T.free_rank, T.torsion) == (1, (2, 4))


def test_resolve_trivial_abelian_into_finite_factor():
    ctx = resolve(parse("group S3 = perm 3 { (1 2); (1 2 3) }\n"
                        "group Z0 = free-abelian 0\n"
                        "embed e : Z0 -> S3 { }\n"))
    assert ctx.embeds["e"] is None


def test_resolve_rejects_abelian_into_finite():
    sf = parse("group S3 = perm 3 { (1 2); (1 2 3) }\n"
               "group Z = free-abelian 1\n"
               "embed e : Z -> S3 { g -> (1 2 3) }\n")
    with pytest.raises(EmbeddingTypeMismatch):
        resolve(sf)


def test_resolve_rejects_finite_into_abelian():
    sf = parse("group Z = free-abelian 1\ngroup C2 = cyclic 2\n"
               "embed e : C2 -> Z { g -> g1 }\n")
    with pytest.raises(EmbeddingTypeMismatch):
        resolve(sf)


def test_resolve_rejects_non_hom_images():
    sf = parse("group C2 = cyclic 2\ngroup C4 = cyclic 4\n"
               "embed e : C2 -> C4 { g -> g }\n")
    with pytest.raises(NotAHomomorphism):
        resolve(sf)


def test_resolve_word_element_not_in_group():
    sf = parse("group V = perm 4 { (1 2)(3 4); (1 3)(2 4) }\n"
               "group C2 = cyclic 2\n"
               "embed ea : C2 -> V { g -> (1 2)(3 4) }\n"
               "embed eb : C2 -> V { g -> (1 3)(2 4) }\n"
               "amalgam G = V, V over C2 via ea, eb\n"
               "word w in G = 0:(1 2)\n")
    with pytest.raises(ResolutionError) as exc:
        resolve(sf)
    assert exc.value.name == "(1 2)"


# -------------------------------------------------------------- property


@st.composite
def random_specfiles(draw):
    lines = ["group S3 = perm 3 { (1 2); (1 2 3) }",
             "group C3 = cyclic 3",
             "embed ea : C3 -> S3 { g -> (1 2 3) }",
             "embed eb : C3 -> S3 { g -> (1 2 3)^-1 }",
             "amalgam G = S3, S3 over C3 via ea, eb"]
    atoms = ["(1 2)", "(1 3)", "(2 3)", "(1 2 3)^-1", "(1 2)(1 3)", "e"]
    n_words = draw(st.integers(min_value=0, max_value=3))
    for k in range(n_words):
        syls = draw(st.lists(
            st.tuples(st.integers(0, 1), st.sampled_from(atoms)),
            min_size=1, max_size=6))
        body = " * ".join(f"{i}:{a}" for i, a in syls)
        lines.append(f"word w{k} in G = {body}")
    return "\n".join(lines) + "\n"


@settings(max_examples=60, deadline=None)
@given(random_specfiles())
def test_property_print_parse_round_trip(text):
    sf = parse(text)
    printed = format_specfile(sf)
    assert parse(printed) == sf
    assert format_specfile(parse(printed)) == printed


@settings(max_examples=30, deadline=None)
@given(random_specfiles())
def test_property_resolution_survives_round_trip(text):
    before = resolve(parse(text))
    after = resolve(parse(format_specfile(parse(text))))
    spec_b = before.amalgams["G"]
    for name, (_, w) in before.words.items():
        _, w2 = after.words[name]
        assert w == w2
        assert reduce(spec_b, w).is_identity() == reduce(
            after.amalgams["G"], w2).is_identity()
