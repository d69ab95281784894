#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "common.hpp"
#include "oracles/generator.hpp"

using namespace seb;

namespace {

std::set<DiagCode> codes(const std::vector<Diagnostic>& ds) {
    std::set<DiagCode> out;
    for (const auto& d : ds) out.insert(d.code);
    return out;
}

}  // namespace

TEST_CASE("syntax::parse atomic activity with fields") {
    auto a = parse_activity("(inv s0 notFound :tgt (l6 l8) :jcd (and l6 l8))");
    CHECK(a.kind() == Kind::Inv);
    CHECK(a.session() == "s0");
    CHECK(a.op() == "notFound");
    CHECK(a.vars().empty());
    CHECK(a.tgt() == LinkSet{"l6", "l8"});
    CHECK(a.src().empty());
    CHECK(a.jcd() == JoinExpr::conj(JoinExpr::link("l6"), JoinExpr::link("l8")));
}

TEST_CASE("syntax::parse seq with defaults") {
    auto a = parse_activity("(seq (ses s EZshop) (inv s getQuote (desc)))");
    REQUIRE(a.kind() == Kind::Seq);
    REQUIRE(a.children().size() == 2);
    CHECK(a.children()[0].kind() == Kind::Ses);
    CHECK(a.children()[0].partner() == "EZshop");
    CHECK(a.children()[1].vars() == std::vector<std::string>{"desc"});
    CHECK(a.tgt().empty());
    CHECK(a.jcd().is_true());
}

TEST_CASE("syntax::comments and whitespace are ignored") {
    auto a = parse_activity("; header\n(flo :lnk (l) ; declared\n  (inv s a () :src (l))\n  (rec s b (x) :tgt (l) :jcd l))\n");
    CHECK(a.kind() == Kind::Flo);
    CHECK(a.lnk() == LinkSet{"l"});
}

TEST_CASE("syntax::parse errors carry positions") {
    try {
        parse_activity("(seq\n  (inv s a ()) (bogus))");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 17);
        CHECK(e.detail().find("unknown keyword") != std::string::npos);
    }
    try {
        parse_activity("(pic (on (inv s x ()) (nil)))");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(e.column() == 10);
    }
    CHECK_THROWS_AS(parse_activity("(inv s $x ())"), ParseError);
    CHECK_THROWS_AS(parse_activity("(seq :lnk (l) (nil))"), ParseError);
    CHECK_THROWS_AS(parse_activity("(inv s a () :foo (l))"), ParseError);
    CHECK_THROWS_AS(parse_activity("(seq (nil)"), ParseError);
    CHECK_THROWS_AS(parse_activity("(nil) (nil)"), ParseError);
    CHECK_THROWS_AS(parse_activity("(rep (do (nil)) (until (nil)))"), ParseError);
    CHECK_THROWS_AS(parse_activity("(inv s a () :jcd (xor l m))"), ParseError);
}

TEST_CASE("syntax::printing round-trips through the parser") {
    for (const auto& f : testing::corpus_files()) {
        auto a = testing::load(f);
        CHECK(parse_activity(to_string(a)) == a);
    }
    testing::Generator gen(7);
    for (int i = 0; i < 300; ++i) {
        auto a = gen.next();
        auto printed = to_string(a);
        INFO(printed);
        CHECK(parse_activity(printed) == a);
        CHECK(to_string(parse_activity(printed)) == printed);
    }
}

TEST_CASE("syntax::subactivities") {
    auto a = parse_activity("(flo (inv s a ()) (pic (on (rec s b ()) (inv s c ()))))");
    CHECK(subacts(a).size() == 5);
    CHECK(strict_subacts(a).size() == 4);
    CHECK(resolve(a, {1, 0}).op() == "b");
    CHECK(resolve(a, {1, 1}).op() == "c");
    CHECK_THROWS_AS(resolve(a, {3}), ContractError);
}

TEST_CASE("syntax::precedence pairs") {
    auto a = parse_activity("(flo :lnk (l) (seq (inv s a ()) (inv s b ()) (inv s c ())) (inv s d () :src (l)) (inv s e () :tgt (l) :jcd l))");
    auto p = pred_pairs(a);
    std::vector<std::pair<Path, Path>> expected = {{{0, 0}, {0, 1}}, {{0, 1}, {0, 2}}, {{1}, {2}}};
    std::sort(expected.begin(), expected.end());
    CHECK(p == expected);
}

TEST_CASE("syntax::validator accepts the corpus") {
    for (const auto& f : testing::corpus_files()) {
        INFO(f);
        CHECK(validate_well_formed(testing::load(f)).empty());
    }
}

TEST_CASE("syntax::validator flags each seeded violation with its code") {
    const std::vector<std::pair<std::string, DiagCode>> cases = {
        {"fixtures/dup_link.seb", DiagCode::DupLink},
        {"fixtures/unscoped_link.seb", DiagCode::UnscopedLink},
        {"fixtures/cycle.seb", DiagCode::Cycle},
        {"fixtures/containment_cross.seb", DiagCode::ContainmentCross},
        {"fixtures/rep_incoming.seb", DiagCode::RepIncoming},
        {"fixtures/rep_outgoing.seb", DiagCode::RepOutgoing},
        {"fixtures/rep_escape.seb", DiagCode::RepEscape},
    };
    for (const auto& [file, code] : cases) {
        INFO(file);
        auto ds = validate_well_formed(testing::load(file));
        REQUIRE_FALSE(ds.empty());
        CHECK(codes(ds) == std::set<DiagCode>{code});
    }
}

TEST_CASE("syntax::validator reports every violation") {
    auto a = parse_activity(
        "(flo :lnk (l m)"
        " (inv s a () :src (l)) (inv s b () :src (l)) (inv s c () :tgt (l) :jcd l)"
        " (inv s d () :src (k)) (inv s e () :jcd m))");
    auto c = codes(validate_well_formed(a));
    CHECK(c == std::set<DiagCode>{DiagCode::DupLink, DiagCode::UnscopedLink, DiagCode::JoinLink});
}

TEST_CASE("syntax::variable kind clashes") {
    CHECK(codes(validate_well_formed(parse_activity("(flo (ses s p) (inv p s ()))"))) == std::set<DiagCode>{DiagCode::KindClash});
    CHECK(codes(validate_well_formed(parse_activity("(inv s a (s0))"))) == std::set<DiagCode>{DiagCode::KindClash});
    CHECK(validate_well_formed(parse_activity("(flo (ses s p) (inv s a (p)))")).empty());
}

TEST_CASE("syntax::desugaring a seq chains its children") {
    auto a = parse_activity("(seq (inv s a ()) (inv s b ()))");
    auto d = desugar_seq(a);
    REQUIRE(d.kind() == Kind::Flo);
    CHECK(d.lnk() == LinkSet{"$seq0"});
    CHECK(d.children()[0].src() == LinkSet{"$seq0"});
    CHECK(d.children()[1].tgt() == LinkSet{"$seq0"});
    CHECK(d.children()[1].jcd() == JoinExpr::link("$seq0"));

    auto single = desugar_seq(parse_activity("(seq (inv s a ()))"));
    CHECK(single.kind() == Kind::Flo);
    CHECK(single.lnk().empty());

    auto kept = desugar_seq(parse_activity("(flo :lnk (l) (inv s z () :src (l)) (seq :tgt (l) :jcd l (inv s a ()) (inv s b () :jcd true)))"));
    const auto& inner = kept.children()[1];
    CHECK(inner.kind() == Kind::Flo);
    CHECK(inner.tgt() == LinkSet{"l"});
    CHECK(inner.jcd() == JoinExpr::link("l"));

    auto joined = desugar_seq(parse_activity(
        "(flo :lnk (l) (inv s z () :src (l)) (seq (inv s a ()) (inv s b () :tgt (l) :jcd (not l))))"));
    CHECK(joined.children()[1].children()[1].jcd() ==
          JoinExpr::conj(JoinExpr::neg(JoinExpr::link("l")), JoinExpr::link("$seq0")));
}

TEST_CASE("syntax::desugaring preserves well-formedness and removes every seq") {
    testing::Generator gen(11);
    for (int i = 0; i < 300; ++i) {
        auto a = gen.next();
        auto d = desugar_seq(a);
        INFO(to_string(a));
        CHECK(validate_well_formed(d).empty());
        bool seq = false;
        for_each_subact(d, [&](const Activity& x) { seq = seq || x.kind() == Kind::Seq; });
        CHECK_FALSE(seq);
        CHECK(desugar_seq(d) == d);
    }
}
