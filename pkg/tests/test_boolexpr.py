import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from groverwild.boolexpr import (
    And,
    AnfForm,
    Const,
    Not,
    Or,
    TruthTable,
    Var,
    Xor,
    anf,
    canonicalize,
    conj,
    disj,
    evaluate,
    expand,
    max_var_index,
    parse,
    parse_dimacs_cnf,
    render,
    truth_table,
    xorj,
)
from groverwild.errors import InputError, ParseError

N_VARS = 5


def ast_strategy():
    leaves = st.one_of(
        st.builds(Var, st.integers(0, N_VARS - 1)),
        st.builds(Const, st.integers(0, 1)),
    )

    def extend(children):
        lists = st.lists(children, min_size=2, max_size=4)
        return st.one_of(
            st.builds(Not, children),
            st.builds(lambda cs: And(tuple(cs)), lists),
            st.builds(lambda cs: Or(tuple(cs)), lists),
            st.builds(lambda cs: Xor(tuple(cs)), lists),
        )

    return st.recursive(leaves, extend, max_leaves=25)


class TestParse:
    def test_precedence_or_over_and(self):
        assert parse("x0|x1&x2", 3) == Or((Var(0), And((Var(1), Var(2)))))

    def test_parenthesized_not(self):
        assert parse("(~x0 & x1)", 3) == And((Not(Var(0)), Var(1)))

    def test_xor_between_and_and_or(self):
        assert parse("x0&x1^x2|x3", 4) == Or(
            (Xor((And((Var(0), Var(1))), Var(2))), Var(3))
        )

    def test_chain_flattens(self):
        assert parse("x0&x1&x2", 3) == And((Var(0), Var(1), Var(2)))

    def test_constants_and_double_not(self):
        assert parse("~~x0 ^ 1", 1) == Xor((Not(Not(Var(0))), Const(1)))

    def test_var_out_of_range(self):
        with pytest.raises(ParseError) as err:
            parse("x3", 3)
        assert err.value.position == 0

    def test_unbalanced_paren(self):
        with pytest.raises(ParseError):
            parse("(x0 & x1", 2)

    def test_bad_character(self):
        with pytest.raises(ParseError) as err:
            parse("x0 + x1", 2)
        assert err.value.position == 3

    def test_trailing_garbage(self):
        with pytest.raises(ParseError):
            parse("x0 x1", 2)

    def test_empty_text(self):
        with pytest.raises(ParseError):
            parse("", 2)

    @settings(max_examples=300)
    @given(ast_strategy())
    def test_render_parse_roundtrip(self, expr):
        assert parse(render(expr), N_VARS) == canonicalize(expr)

    def test_render_parse_roundtrip_1000_seeded(self):
        rng = random.Random(61)

        def random_expr(depth):
            pick = rng.random()
            if depth <= 0 or pick < 0.3:
                if rng.random() < 0.8:
                    return Var(rng.randrange(N_VARS))
                return Const(rng.randint(0, 1))
            if pick < 0.45:
                return Not(random_expr(depth - 1))
            node = rng.choice((And, Or, Xor))
            width = rng.randint(2, 4)
            return node(tuple(random_expr(depth - 1) for _ in range(width)))

        for _ in range(1000):
            expr = random_expr(rng.randint(1, 5))
            assert parse(render(expr), N_VARS) == canonicalize(expr)


class TestDimacs:
    def test_single_clause(self):
        expr, n = parse_dimacs_cnf("p cnf 2 1\n1 -2 0")
        assert n == 2
        assert expr == Or((Var(0), Not(Var(1))))

    def test_no_clauses_is_vacuous_truth(self):
        expr, n = parse_dimacs_cnf("p cnf 1 0")
        assert (expr, n) == (Const(1), 1)

    def test_literal_out_of_range(self):
        with pytest.raises(InputError):
            parse_dimacs_cnf("p cnf 2 1\n3 0")

    def test_clause_count_mismatch(self):
        with pytest.raises(InputError):
            parse_dimacs_cnf("p cnf 2 2\n1 2 0")

    def test_comments_and_multiline_clauses(self):
        text = "c a comment\np cnf 3 2\n1 2\n3 0\nc mid comment\n-1 -3 0\n"
        expr, n = parse_dimacs_cnf(text)
        assert expr == And(
            (Or((Var(0), Var(1), Var(2))), Or((Not(Var(0)), Not(Var(2)))))
        )

    def test_empty_clause_is_false(self):
        expr, _ = parse_dimacs_cnf("p cnf 1 1\n0")
        assert expr == Const(0)

    def test_unterminated_clause(self):
        with pytest.raises(InputError):
            parse_dimacs_cnf("p cnf 2 1\n1 2")

    def test_missing_header(self):
        with pytest.raises(InputError):
            parse_dimacs_cnf("1 2 0")

    def test_malformed_header(self):
        with pytest.raises(InputError):
            parse_dimacs_cnf("p dnf 2 1\n1 0")


class TestEvaluate:
    def test_simple_conjunction(self):
        e = And((Not(Var(0)), Var(1)))
        assert evaluate(e, [0, 1, 0]) == 1
        assert evaluate(e, [1, 1, 0]) == 0

    def test_xor_and_const(self):
        e = Xor((Var(0), Var(1), Const(1)))
        assert evaluate(e, [0, 0]) == 1
        assert evaluate(e, [1, 0]) == 0

    def test_assignment_too_short(self):
        with pytest.raises(InputError):
            evaluate(Var(2), [0, 1])


class TestTruthTable:
    def test_and_rows(self):
        t = truth_table(And((Var(0), Var(1))), 2)
        assert list(t.rows) == [0, 0, 0, 1]
        assert t.marked_count == 1
        assert t.marked_states() == (3,)

    def test_const_zero(self):
        t = truth_table(Const(0), 3)
        assert t.marked_count == 0

    def test_x0_is_most_significant(self):
        t = truth_table(Var(0), 2)
        assert list(t.rows) == [0, 0, 1, 1]

    def test_var_out_of_declared_range(self):
        with pytest.raises(InputError):
            truth_table(Var(3), 3)

    def test_rows_are_read_only(self):
        t = truth_table(Var(0), 2)
        with pytest.raises(ValueError):
            t.rows[0] = 1

    def test_bad_row_values_rejected(self):
        with pytest.raises(InputError):
            TruthTable(1, np.array([0, 2], dtype=np.uint8))

    @settings(max_examples=150, deadline=None)
    @given(ast_strategy(), st.integers(0, (1 << N_VARS) - 1))
    def test_matches_recursive_evaluation(self, expr, row):
        t = truth_table(expr, N_VARS)
        bits = [(row >> (N_VARS - 1 - i)) & 1 for i in range(N_VARS)]
        assert int(t.rows[row]) == evaluate(expr, bits)

    def test_matches_recursive_evaluation_exhaustive_n10(self):
        n = 10
        expr = parse("x0&~x9 | x3^x5^x7 | ~(x1|x2)&x4", n)
        t = truth_table(expr, n)
        for row in range(1 << n):
            bits = [(row >> (n - 1 - i)) & 1 for i in range(n)]
            assert int(t.rows[row]) == evaluate(expr, bits)


def expand_by_evaluation(form: AnfForm, var_count: int) -> list[int]:
    # Independent oracle: evaluate the XOR-of-monomials directly per row.
    out = []
    for row in range(1 << var_count):
        bits = [(row >> (var_count - 1 - i)) & 1 for i in range(var_count)]
        acc = 0
        for mono in form.monomials:
            acc ^= int(all(bits[i] for i in mono))
        out.append(acc)
    return out


class TestAnf:
    def test_or_of_two(self):
        form = anf(truth_table(Or((Var(0), Var(1))), 2))
        assert form.monomials == frozenset(
            {frozenset({0}), frozenset({1}), frozenset({0, 1})}
        )

    def test_and_is_single_monomial(self):
        form = anf(truth_table(And((Var(0), Var(1))), 2))
        assert form.monomials == frozenset({frozenset({0, 1})})

    def test_const_one_is_empty_monomial(self):
        form = anf(truth_table(Const(1), 2))
        assert form.monomials == frozenset({frozenset()})

    def test_not_x0(self):
        form = anf(truth_table(Not(Var(0)), 1))
        assert form.monomials == frozenset({frozenset(), frozenset({0})})

    def test_expansion_matches_independent_evaluation(self):
        rng = random.Random(5)
        for n in range(1, 7):
            for _ in range(20):
                rows = [rng.randint(0, 1) for _ in range(1 << n)]
                t = TruthTable(n, np.array(rows, dtype=np.uint8))
                form = anf(t)
                assert expand_by_evaluation(form, n) == rows

    def test_involution_up_to_n12(self):
        rng = random.Random(17)
        for n in (1, 3, 6, 9, 12):
            rows = np.array(
                [rng.randint(0, 1) for _ in range(1 << n)], dtype=np.uint8
            )
            t = TruthTable(n, rows)
            assert expand(anf(t), n) == t

    def test_expand_rejects_out_of_range_monomial(self):
        with pytest.raises(InputError):
            expand(AnfForm(frozenset({frozenset({4})})), 3)


class TestJoins:
    def test_singleton_collapse(self):
        assert conj([Var(0)]) == Var(0)
        assert disj([Var(1)]) == Var(1)
        assert xorj([Var(2)]) == Var(2)

    def test_empty_join_rejected(self):
        with pytest.raises(InputError):
            conj([])

    def test_nary_nodes_require_two_children(self):
        with pytest.raises(InputError):
            And((Var(0),))

    def test_max_var_index(self):
        assert max_var_index(Const(1)) is None
        assert max_var_index(parse("x0 | ~x4 & x2", 5)) == 4
