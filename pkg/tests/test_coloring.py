import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import SIG, SIG2, terms
from multihyp import (
    AddressDepth,
    Enumeration,
    FormatError,
    InvalidAddressError,
    LeftmostSpecial,
    MultiHypersubstitution,
    OneVariableSplit,
    RBFirstLast,
    Singleton,
    SquarePair,
    TableRule,
    TermEquals,
    Uniform,
    Var,
    addresses,
    apply_hyp,
    apply_mhyp,
    builtin_rules,
    color_of,
    enumerate_hyps,
    identity_hyp,
    load_mhyp,
    named_hyp,
    parse_coloration,
    parse_term,
    substitute,
    term_rank,
    term_unrank,
    term_weight,
    uniform_color,
)
from multihyp.terms import format_term

POOL2 = enumerate_hyps(SIG, 2)
RULES = builtin_rules(SIG)


def T(text):
    return parse_term(text, SIG)


def reference(rho, rule, t):
    # node-by-node rewriting driven by the colours of the original term
    if isinstance(t, Var):
        return t
    cs = {a: color_of(rule, t, a) for a in addresses(t)}

    def go(s, addr):
        if isinstance(s, Var):
            return s
        return substitute(rho(cs[addr])[s.symbol], {i: go(a, addr + (i,)) for i, a in enumerate(s.args, 1)})

    return go(t, ())


mhyps = st.builds(
    lambda table, d: MultiHypersubstitution({c: POOL2[i] for c, i in table.items()}, POOL2[d]),
    st.dictionaries(st.integers(0, 6), st.integers(0, len(POOL2) - 1), max_size=5),
    st.integers(0, len(POOL2) - 1),
)


class TestColours:
    def test_rb_first_last(self):
        rule = RBFirstLast()
        t = T("f(x1,f(x2,x1))")
        assert {color_of(rule, t, a) for a in addresses(t)} == {1}
        assert uniform_color(rule, T("f(x1,x2)")) == 2

    def test_singleton(self):
        s = T("f(f(x,x),f(f(x,x),f(x,x)))")
        rule = Singleton(s, 1, 0)
        assert {color_of(rule, s, a) for a in addresses(s)} == {1}
        assert color_of(rule, T("f(x,x)"), ()) == 0

    def test_uniform(self):
        assert color_of(Uniform(7), T("f(f(x,y),z)"), (1,)) == 7
        assert uniform_color(Uniform(3), T("f(x,y)")) == 3

    def test_leftmost_special(self):
        s = T("f(y,f(y,x))")
        rule = LeftmostSpecial(s, 0, 1, 0)
        assert color_of(rule, s, ()) == 0 and color_of(rule, s, (2,)) == 1
        assert uniform_color(rule, s) is None
        assert uniform_color(rule, T("f(f(x,y),y)")) == 0

    def test_variables_have_no_colour(self):
        assert uniform_color(Uniform(0), Var(1)) is None
        assert occurring(Uniform(0), Var(1)) == frozenset()

    def test_invalid_address(self):
        with pytest.raises(InvalidAddressError):
            color_of(Uniform(0), T("f(x,y)"), (1,))

    def test_square_pair(self):
        rule = SquarePair("f", 2)
        assert rule.s == T("f(f(x1,x1),x2)") and rule.t == T("f(f(x1,x1),x1)")
        assert uniform_color(rule, rule.s) == uniform_color(rule, rule.t) == 0
        assert uniform_color(rule, T("f(x1,x2)")) == 1
        assert uniform_color(rule, T("f(x1,x1)")) == 1

    def test_one_variable_split(self):
        rule = OneVariableSplit(AddressDepth())
        t = T("f(f(x,x),x)")
        assert [color_of(rule, t, a) for a in addresses(t)] == [0, 1]
        assert uniform_color(rule, T("f(f(x,y),x)")) == 1

    def test_table_rule(self):
        t = T("f(f(x,y),y)")
        rule = TableRule({t: {(): 5, (1,): 6}}, Uniform(2))
        assert color_of(rule, t, (1,)) == 6
        assert uniform_color(rule, T("f(x,x)")) == 2
        bad = TableRule({t: {(): 5}}, Uniform(2))
        with pytest.raises(InvalidAddressError):
            bad.colors(t)

    @given(terms())
    def test_colourings_are_total_and_deterministic(self, t):
        for rule in RULES:
            cs = rule.colors(t)
            assert set(cs) == set(addresses(t))
            assert cs == rule.colors(t)


def occurring(rule, t):
    from multihyp import occurring_colors

    return occurring_colors(rule, t)


class TestApply:
    def test_worked_example(self):
        s, t = T("f(y,f(y,x))"), T("f(f(x,y),y)")
        rule = LeftmostSpecial(s, 0, 1, 0)
        rho = MultiHypersubstitution({0: named_hyp("swap", SIG)}, identity_hyp(SIG))
        assert apply_mhyp(rho, rule, t) == s
        assert apply_mhyp(rho, rule, s) == T("f(f(y,x),y)")

    def test_no_pool_member_reaches_the_swapped_term(self):
        s, t = T("f(y,f(y,x))"), T("f(f(x,y),y)")
        rule = LeftmostSpecial(s, 0, 1, 0)
        for h in enumerate_hyps(SIG, 1):
            for d in enumerate_hyps(SIG, 1):
                rho = MultiHypersubstitution({0: h}, d)
                assert apply_mhyp(rho, rule, t) != T("f(f(y,x),y)")

    def test_collapse(self):
        s = T("f(f(x,x),f(f(x,x),f(x,x)))")
        rho = MultiHypersubstitution({0: identity_hyp(SIG)}, named_hyp("proj-first", SIG))
        assert apply_mhyp(rho, Singleton(s, 1, 0), s) == Var(1)
        assert apply_mhyp(rho, Singleton(s, 1, 0), T("f(f(x,x),y)")) == T("f(f(x,x),y)")

    def test_colours_read_from_the_original_term(self):
        # root coloured swap, inner node identity; the inner node's colour
        # must come from address (1,) of t, not of an intermediate result
        t = T("f(f(x,y),z)")
        rule = TableRule({t: {(): 0, (1,): 1}})
        rho = MultiHypersubstitution({0: named_hyp("swap", SIG), 1: identity_hyp(SIG)}, identity_hyp(SIG))
        assert apply_mhyp(rho, rule, t) == T("f(z,f(x,y))")

    @given(terms(), mhyps)
    def test_matches_nodewise_reference(self, t, rho):
        for rule in RULES:
            assert apply_mhyp(rho, rule, t) == reference(rho, rule, t)

    @given(terms(), mhyps, st.integers(0, 5))
    def test_uniform_reduces_to_single_hyp(self, t, rho, n):
        assert apply_mhyp(rho, Uniform(n), t) == apply_hyp(rho(n), t)
        c = uniform_color(RBFirstLast(), t)
        if c is not None:
            assert apply_mhyp(rho, RBFirstLast(), t) == apply_hyp(rho(c), t)

    @given(terms(), st.integers(0, len(POOL2) - 1))
    def test_constant_and_identity(self, t, i):
        for rule in RULES:
            assert apply_mhyp(MultiHypersubstitution.constant(POOL2[i]), rule, t) == apply_hyp(POOL2[i], t)
            assert apply_mhyp(MultiHypersubstitution({}, identity_hyp(SIG)), rule, t) == t


class TestEnumeration:
    def test_first_terms(self):
        first = [format_term(term_unrank(r, SIG)) for r in range(12)]
        assert first == [
            "x1", "x2", "x3", "f(x1,x1)", "x4", "f(x1,x2)", "f(x2,x1)",
            "x5", "f(x1,x3)", "f(x1,f(x1,x1))", "f(x2,x2)", "f(x3,x1)",
        ]

    def test_bijection_on_prefix(self):
        for r in range(3000):
            assert term_rank(term_unrank(r, SIG), SIG) == r

    @given(terms(SIG2, 3, 4))
    def test_rank_inverts(self, t):
        assert term_unrank(term_rank(t, SIG2), SIG2) == t

    def test_weight(self):
        assert term_weight(T("f(x1,x3)")) == 5

    def test_rule_colours_distinct_terms_apart(self):
        rule = Enumeration(SIG)
        assert uniform_color(rule, T("f(x,y)")) != uniform_color(rule, T("f(y,x)"))


class TestParsing:
    @pytest.mark.parametrize(
        "spec",
        [
            "uniform:3",
            "rb-firstlast",
            "enumeration",
            "address-depth",
            "one-var-split:address-depth",
            "prop63:f",
            "singleton:f(x1,x1):1:0",
            "term-equals:f(x1,x1):1:2",
            "leftmost-special:f(x2,f(x2,x1)):0:1:0",
        ],
    )
    def test_round_trip(self, spec):
        assert parse_coloration(spec, SIG).spec == spec

    @pytest.mark.parametrize(
        "spec", ["uniform", "uniform:x", "singleton:f(x1):1:0", "prop63:g", "bogus", "singleton:x1:1"]
    )
    def test_rejects(self, spec):
        with pytest.raises(FormatError):
            parse_coloration(spec, SIG)

    def test_prop63_needs_arity_two(self):
        with pytest.raises(FormatError):
            parse_coloration("prop63:h", SIG2)

    def test_mhyp_file(self, tmp_path):
        (tmp_path / "mine").write_text("f -> f(x2,f(x1,x2))\n")
        p = tmp_path / "rho.txt"
        p.write_text("default id\ncolor 0 swap\ncolor 3 mine\n")
        rho = load_mhyp(str(p), SIG)
        assert rho(0) == named_hyp("swap", SIG)
        assert rho(3)["f"] == T("f(x2,f(x1,x2))")
        assert rho(9) == identity_hyp(SIG)

    @pytest.mark.parametrize(
        "text", ["color 0 swap\n", "default id\ndefault swap\n", "default id\ncolor 1 swap\ncolor 1 id\n", "colour 1 id\n"]
    )
    def test_bad_mhyp_files(self, tmp_path, text):
        p = tmp_path / "rho.txt"
        p.write_text(text)
        with pytest.raises(FormatError):
            load_mhyp(str(p), SIG)

    def test_describe(self):
        rho = MultiHypersubstitution({0: named_hyp("swap", SIG)}, identity_hyp(SIG))
        assert rho.describe() == "{0: swap, default: id}"
        assert "color 0 swap" in rho.to_text()
