import pytest

from KernelLab.core.errors import DotBudgetError, WindowError
from KernelLab.core.fields import FieldSpec
from KernelLab.categories.diagrams import (
    BLACK,
    FILLED,
    HOLLOW,
    WHITE,
    build_EN,
    build_MO,
    build_OB,
    build_Seq,
    co_diagram,
    ev_diagram,
    format_word,
    iota_morphism,
    mu_morphism,
    parse_word,
    seq_letter,
    words_up_to,
)
from KernelLab.categories.presentation import (
    AddObject,
    compose,
    identity_morphism,
    is_monic_on_window,
    scale_morphism,
    snake_composites,
    tensor,
    validate_category,
)

Q = FieldSpec.rationals()
F2 = FieldSpec.prime(2)


def closed_loop(C):
    """ev_∘ after co_•: ∅ → •∘ → ∅."""
    cup = C.morphism(co_diagram(C.rules, (BLACK,)))
    cap = C.morphism(ev_diagram(C.rules, (WHITE,)))
    return cup, cap


class TestWords:
    @pytest.mark.parametrize("text,word", [
        ("bw", (BLACK, WHITE)),
        ("•∘", (BLACK, WHITE)),
        ("∅", ()),
        ("X0 X1", (seq_letter(0), seq_letter(1))),
        ("X-1X2", (seq_letter(-1), seq_letter(2))),
    ])
    def test_parse(self, text, word):
        assert parse_word(text) == word

    def test_format_round_trip(self):
        assert parse_word(format_word((WHITE, BLACK, BLACK))) == (WHITE, BLACK, BLACK)
        assert format_word(()) == "∅"

    def test_unknown_letter(self):
        with pytest.raises(ValueError):
            parse_word("bq")

    def test_word_count(self):
        assert len(words_up_to((BLACK, WHITE), 3)) == 1 + 2 + 4 + 8


class TestOrientedBrauer:
    @pytest.mark.parametrize("field,delta", [(Q, 0), (Q, 2), (Q, -1), (F2, 0), (F2, 2), (F2, -1)])
    def test_loop_evaluates_to_delta(self, field, delta):
        C = build_OB(delta, 2, field)
        cup, cap = closed_loop(C)
        unit = identity_morphism(C, AddObject.of(()))
        assert compose(C, cap, cup) == scale_morphism(C, delta, unit)

    def test_loops_multiply(self):
        C = build_OB(3, 4, Q)
        cup, cap = closed_loop(C)
        two_loops = compose(C, tensor(C, cap, cap), tensor(C, cup, cup))
        assert two_loops == scale_morphism(C, 9, identity_morphism(C, AddObject.of(())))

    @pytest.mark.parametrize("letter", [BLACK, WHITE])
    def test_snake_relations(self, letter):
        C = build_OB(2, 3, Q)
        first, second = snake_composites(C, (letter,))
        assert first == identity_morphism(C, AddObject.of((letter,)))
        assert second == identity_morphism(C, AddObject.of((C.monoidal.dual((letter,)))))

    def test_hom_dimensions(self):
        C = build_OB(2, 4, Q)
        assert C.hom_dim((BLACK, WHITE), (BLACK, WHITE)) == 2
        assert C.hom_dim((BLACK, BLACK), (BLACK, BLACK)) == 2
        assert C.hom_dim((BLACK,), (WHITE,)) == 0
        assert C.hom_dim((), (BLACK, WHITE)) == 1

    def test_window_is_a_category(self):
        assert validate_category(build_OB(2, 3, Q)).valid

    def test_export_agrees_with_diagram_composition(self):
        C = build_OB(-1, 3, Q)
        words = words_up_to((BLACK, WHITE), 2)
        table = C.to_table(words)
        for x in words:
            for y in words:
                for z in words:
                    for f in C.hom_basis(x, y):
                        for g in C.hom_basis(y, z):
                            assert table.compose_basis(g, f) == C.compose_basis(g, f)

    def test_long_word_outside_window(self):
        C = build_OB(0, 2, Q)
        with pytest.raises(WindowError):
            C.hom_basis((BLACK,) * 3, (BLACK,) * 3)


class TestMarked:
    def test_mu_is_unique(self):
        C = build_MO(2, 3, 3, Q)
        assert C.hom_dim((BLACK,), (FILLED,)) == 1
        assert C.hom_dim((FILLED,), (BLACK,)) == 0

    def test_marked_loop_evaluates_to_t(self):
        C = build_MO(2, 5, 2, Q)
        cup = C.morphism(co_diagram(C.rules, (FILLED,)))
        cap = C.morphism(ev_diagram(C.rules, (HOLLOW,)))
        assert compose(C, cap, cup) == scale_morphism(C, 5, identity_morphism(C, AddObject.of(())))

    @pytest.mark.parametrize("delta,t", [(0, 0), (2, 3), (-1, 1)])
    def test_mu_is_monic(self, delta, t):
        C = build_MO(delta, t, 4, Q)
        window = words_up_to(C.rules.alphabet(), 3)
        assert is_monic_on_window(C, mu_morphism(C), window)

    @pytest.mark.slow
    def test_mu_is_monic_length_four(self):
        C = build_MO(1, 1, 5, Q)
        window = words_up_to(C.rules.alphabet(), 4)
        assert is_monic_on_window(C, mu_morphism(C), window)


class TestDotted:
    def test_dots_add(self):
        C = build_EN([2, 1, 0], 2, 3, Q)
        one = C.morphism(C.diagram((BLACK,), (BLACK,), [(0, 1)], dots=[1]))
        two = C.morphism(C.diagram((BLACK,), (BLACK,), [(0, 1)], dots=[2]))
        assert compose(C, one, one) == two

    def test_dotted_loop(self):
        C = build_EN([2, 7], 2, 1, Q)
        dotted_cup = C.morphism(C.diagram((), (BLACK, WHITE), [(0, 1)], dots=[1]))
        cap = C.morphism(ev_diagram(C.rules, (WHITE,)))
        assert compose(C, cap, dotted_cup) == scale_morphism(C, 7, identity_morphism(C, AddObject.of(())))

    def test_endomorphisms_count_dots(self):
        C = build_EN([0, 0, 0, 0], 2, 3, Q)
        assert C.hom_dim((BLACK,), (BLACK,)) == 4

    def test_dot_budget_overflow(self):
        C = build_EN([0, 0], 2, 1, Q)
        one = C.morphism(C.diagram((BLACK,), (BLACK,), [(0, 1)], dots=[1]))
        with pytest.raises(DotBudgetError):
            compose(C, one, one)


class TestSequence:
    def test_only_identity_on_x0x1(self):
        C = build_Seq(4, 2, Q)
        x01 = (seq_letter(0), seq_letter(1))
        assert C.hom_dim(x01, x01) == 1

    def test_cap_then_cup(self):
        C = build_Seq(4, 2, Q)
        x01, x10 = (seq_letter(0), seq_letter(1)), (seq_letter(1), seq_letter(0))
        assert C.hom_dim(x10, x01) == 1
        assert C.hom_dim(x01, x10) == 0

    def test_crossing_rejected(self):
        C = build_Seq(4, 2, Q)
        x0 = seq_letter(0)
        with pytest.raises(ValueError):
            C.diagram((x0, x0), (x0, x0), [(0, 3), (1, 2)])

    def test_iota_is_monic(self):
        C = build_Seq(4, 2, Q)
        window = words_up_to(C.rules.alphabet(), 2)
        assert is_monic_on_window(C, iota_morphism(C), window)
