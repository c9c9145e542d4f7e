import pickle
import random

import pytest
from hypothesis import given

from conftest import SIG, SIG2, terms
from multihyp import (
    App,
    ArityError,
    InvalidAddressError,
    Signature,
    SignatureError,
    TermSyntaxError,
    UnknownSymbolError,
    Var,
    addresses,
    depth,
    first_variable,
    format_term,
    last_variable,
    parse_equation,
    parse_term,
    random_term,
    size,
    subterm_at,
    substitute,
    variables,
    word,
)
from multihyp.terms import count_terms_up_to_depth, subterms, terms_up_to_depth


def T(text, sig=SIG):
    return parse_term(text, sig)


class TestSignature:
    def test_parse_and_text_round_trip(self):
        sig = Signature.parse("f:2, g:3 ,h:1")
        assert sig.symbols == (("f", 2), ("g", 3), ("h", 1))
        assert Signature.from_text(sig.to_text()) == sig
        assert str(sig) == "f:2,g:3,h:1"
        assert "g" in sig and "k" not in sig
        assert sig.arity("g") == 3

    @pytest.mark.parametrize(
        "text",
        ["f:0", "f:2,f:3", "x1:2", "y:2", ":2", "f", "", "f:two"],
    )
    def test_rejects_bad_signatures(self, text):
        with pytest.raises(SignatureError):
            Signature.parse(text)

    def test_file_errors_name_the_line(self):
        with pytest.raises(SignatureError, match="line 2"):
            Signature.from_text("op f 2\nfunction g 3\n")

    def test_unknown_arity_lookup(self):
        with pytest.raises(UnknownSymbolError):
            SIG.arity("g")


class TestParsing:
    def test_nested(self):
        t = T("f(x1,f(x2,x1))")
        assert t == App("f", [Var(1), App("f", [Var(2), Var(1)])])

    def test_aliases_and_whitespace(self):
        assert T(" f( y , f(y,x) ) ") == T("f(x2,f(x2,x1))")
        assert T("z") == Var(3)

    def test_arity_mismatch(self):
        with pytest.raises(ArityError) as info:
            T("f(x1)")
        assert info.value.position == 0

    def test_bare_symbol_is_arity_error(self):
        with pytest.raises(ArityError):
            T("f(f,x1)")

    def test_unknown_symbol_position(self):
        with pytest.raises(UnknownSymbolError) as info:
            T("f(x1,g(x1,x2))")
        assert info.value.position == 5

    @pytest.mark.parametrize("text", ["f(x1,x2", "f(x1,,x2)", "f(x1,x2))", "", "x0", "f x1"])
    def test_syntax_errors(self, text):
        with pytest.raises(TermSyntaxError):
            T(text)

    def test_equation_separators(self):
        e = parse_equation("f(x,y) ≈ f(y,x)", SIG)
        assert e == parse_equation("f(x,y) = f(y,x)", SIG) == parse_equation("f(x,y) ~ f(y,x)", SIG)
        assert str(e) == "f(x1,x2) = f(x2,x1)"
        assert e.format(named=True) == "f(x,y) = f(y,x)"
        assert e.flipped().lhs == e.rhs

    def test_mixed_signature(self):
        t = T("g(h(x1),f(x2,x3),x4)", SIG2)
        assert format_term(t) == "g(h(x1),f(x2,x3),x4)"

    @given(terms(SIG2, max_depth=6, nvars=5))
    def test_round_trip(self, t):
        assert parse_term(format_term(t), SIG2) == t

    def test_round_trip_random_depth_6(self):
        rng = random.Random(0)
        for _ in range(1000):
            t = random_term(rng, SIG, rng.randint(0, 6), 4)
            assert parse_term(format_term(t), SIG) == t

    def test_named_printing(self):
        assert format_term(T("f(x1,f(x2,x4))"), named=True) == "f(x,f(y,x4))"


class TestAddresses:
    def test_variable_has_none(self):
        assert addresses(Var(1)) == ()

    def test_examples(self):
        assert set(addresses(T("f(f(x,y),y)"))) == {(), (1,)}
        s = T("f(y,f(y,x))")
        assert set(addresses(s)) == {(), (2,)}
        assert min(addresses(s)) == ()

    def test_preorder(self):
        assert addresses(T("f(f(f(x,x),x),f(x,x))")) == ((), (1,), (1, 1), (2,))

    def test_subterm_at(self):
        t = T("f(f(x,y),y)")
        assert subterm_at(t, ()) == t
        assert subterm_at(t, (1,)) == T("f(x,y)")
        assert subterm_at(t, (1, 2)) == Var(2)
        with pytest.raises(InvalidAddressError):
            subterm_at(T("f(x,y)"), (3,))
        with pytest.raises(InvalidAddressError):
            subterm_at(T("f(x,y)"), (1, 1))

    @given(terms())
    def test_count_and_prefix_closure(self, t):
        addrs = addresses(t)
        apps = sum(1 for _, s in subterms(t) if isinstance(s, App))
        assert len(addrs) == len(set(addrs)) == apps
        aset = set(addrs)
        for a in addrs:
            assert all(a[:k] in aset for k in range(len(a)))
            assert isinstance(subterm_at(t, a), App)


class TestQueries:
    def test_first_last(self):
        assert (first_variable(T("f(f(x2,x1),x3)")), last_variable(T("f(f(x2,x1),x3)"))) == (2, 3)
        assert first_variable(Var(5)) == last_variable(Var(5)) == 5
        assert (first_variable(T("f(x1,f(x2,x1))")), last_variable(T("f(x1,f(x2,x1))"))) == (1, 1)

    def test_substitute(self):
        a, b = T("f(x3,x3)"), T("x4")
        assert substitute(T("f(x1,x2)"), {1: a, 2: b}) == App("f", [a, b])
        assert substitute(Var(3), {1: a}) == Var(3)
        assert substitute(T("f(x2,x1)"), {1: T("y"), 2: T("f(y,x)")}) == T("f(f(y,x),y)")

    def test_depth_size_variables(self):
        t = T("f(f(x3,x1),x3)")
        assert depth(Var(1)) == 0 and depth(t) == 2
        assert size(t) == 5
        assert variables(t) == (1, 3)

    def test_word_is_left_associated(self):
        assert word("x1 x2 x1") == T("f(f(x1,x2),x1)")
        assert word("x1") == Var(1)

    @given(terms(), terms(), terms())
    def test_substitution_composes(self, t, a, b):
        # substituting in two steps equals substituting the composed binding
        first = {1: a, 2: b}
        second = {1: b, 3: a}
        composed = {i: substitute(first.get(i, Var(i)), second) for i in (1, 2, 3)}
        assert substitute(substitute(t, first), second) == substitute(t, composed)


class TestSharing:
    def test_equal_terms_are_shared(self):
        assert T("f(x,f(y,x))") is T("f(x1,f(x2,x1))")

    def test_immutable(self):
        with pytest.raises(AttributeError):
            T("f(x,y)").symbol = "g"
        with pytest.raises(AttributeError):
            Var(1).index = 2

    def test_pickle(self):
        t = T("f(f(x,y),z)")
        assert pickle.loads(pickle.dumps(t)) == t

    def test_deep_shared_terms_stay_cheap(self):
        t = Var(1)
        for _ in range(200):
            t = App("f", [t, t])
        assert depth(t) == 200
        assert size(t) == 2 ** 201 - 1
        assert variables(t) == (1,)
        u = Var(1)
        for _ in range(200):
            u = App("f", [u, u])
        assert u == t


class TestUniverseEnumeration:
    def test_counts(self):
        # levels: 2, 2+2^2, 2+6^2, 2+38^2, 2+1446^2
        assert [count_terms_up_to_depth(SIG, d, 2) for d in range(5)] == [2, 6, 38, 1446, 2090918]
        assert count_terms_up_to_depth(SIG, 3, 3) == 21612

    def test_listing_is_duplicate_free(self):
        ts = terms_up_to_depth(SIG, 3, 2)
        assert len(ts) == len(set(ts)) == 1446
        assert max(depth(t) for t in ts) == 3

    def test_mixed_arity(self):
        ts = terms_up_to_depth(SIG2, 2, 1)
        assert len(ts) == len(set(ts)) == count_terms_up_to_depth(SIG2, 2, 1)
