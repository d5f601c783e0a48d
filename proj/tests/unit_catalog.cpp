#include "tanalg/catalog.hpp"

#include <gtest/gtest.h>

using namespace tanalg;

namespace {

AlgebraPtr gen(const std::string& family, int n = 0, std::uint64_t seed = 0) {
    GeneratorSpec s;
    s.family = family;
    s.n = n;
    s.seed = seed;
    return generate(s);
}

TEST(Generators, GroupFamiliesSatisfyTheGroupLaws) {
    struct Case {
        std::string family;
        int n;
        int size;
    };
    for (const Case& c : std::vector<Case>{{"cyclic_group", 6, 6},
                                           {"klein4", 0, 4},
                                           {"symmetric", 3, 6},
                                           {"symmetric", 4, 24},
                                           {"dihedral", 4, 8},
                                           {"quaternion8", 0, 8}}) {
        auto a = gen(c.family, c.n);
        EXPECT_EQ(a->size, c.size) << c.family;
        LawReport r = check_variety_laws(*a);
        EXPECT_TRUE(r.ok()) << c.family << ": " << (r.ok() ? "" : r.failures[0]);
    }
    EXPECT_THROW(gen("symmetric", 5), Error);  // capped
}

TEST(Generators, LeftZeroMonoidIsNoncommutativeBeyondOneGenerator) {
    auto m3 = gen("leftzero_monoid_plus_identity", 2);
    EXPECT_EQ(m3->size, 3);
    EXPECT_TRUE(check_variety_laws(*m3).ok());
    int mul = m3->signature.index_of("mul");
    auto w = check_commutative(*m3, mul);
    ASSERT_TRUE(w.has_value());
    EXPECT_EQ(m3->apply2(mul, 1, 2), 1);
    EXPECT_EQ(m3->apply2(mul, 2, 1), 2);
    // The one-generator case collapses to the idempotent commutative monoid.
    auto m2 = gen("leftzero_monoid_plus_identity", 1);
    EXPECT_FALSE(check_commutative(*m2, m2->signature.index_of("mul")).has_value());
    EXPECT_EQ(m2->apply2(m2->signature.index_of("mul"), 1, 1), 1);
}

TEST(Generators, RandomMagmaIsSeedDeterministicWithTwoSidedUnit) {
    auto a = gen("random_jt_magma", 5, 11);
    auto b = gen("random_jt_magma", 5, 11);
    EXPECT_EQ(a->tables, b->tables);
    EXPECT_NE(a->tables, gen("random_jt_magma", 5, 12)->tables);
    int plus = a->signature.index_of("plus");
    for (int x = 0; x < a->size; ++x) {
        EXPECT_EQ(a->apply2(plus, 0, x), x);
        EXPECT_EQ(a->apply2(plus, x, 0), x);
    }
}

TEST(Generators, Loop5IsANonassociativeLoopWithAFrozenTable) {
    auto a = gen("nonassoc_loop5", 0, 0);
    EXPECT_EQ(a->size, 5);
    LawReport r = check_variety_laws(*a);
    EXPECT_TRUE(r.ok()) << (r.ok() ? "" : r.failures[0]);
    int mul = a->signature.index_of("mul");
    EXPECT_TRUE(check_associative(*a, mul).has_value());
    // First square found by the deterministic backtracking order.
    const std::vector<int> frozen = {
        0, 1, 2, 3, 4,
        1, 0, 3, 4, 2,
        2, 3, 4, 0, 1,
        3, 4, 1, 2, 0,
        4, 2, 0, 1, 3,
    };
    EXPECT_EQ(a->tables[static_cast<std::size_t>(mul)], frozen);
    // A different seed still yields a nonassociative loop.
    auto b = gen("nonassoc_loop5", 0, 3);
    EXPECT_TRUE(check_variety_laws(*b).ok());
    EXPECT_TRUE(check_associative(*b, b->signature.index_of("mul")).has_value());
}

TEST(Generators, RingFamiliesSatisfyTheRingLaws) {
    auto r6 = gen("ring_zn_modmul", 6);
    EXPECT_TRUE(check_variety_laws(*r6).ok());
    GeneratorSpec s;
    s.family = "ring_trivial_mul";
    s.orders = {2, 3};
    auto t = generate(s);
    EXPECT_EQ(t->size, 6);
    EXPECT_TRUE(check_variety_laws(*t).ok());
    int mul = t->signature.index_of("mul");
    for (int x = 0; x < 6; ++x)
        for (int y = 0; y < 6; ++y) EXPECT_EQ(t->apply2(mul, x, y), t->jt_zero());
}

TEST(Generators, DirectProductsAndUnknownFamilies) {
    GeneratorSpec s;
    s.family = "direct_product";
    GeneratorSpec f1, f2;
    f1.family = "cyclic_group";
    f1.n = 2;
    f2.family = "cyclic_group";
    f2.n = 3;
    s.factors = {f1, f2};
    auto p = generate(s);
    EXPECT_EQ(p->size, 6);
    EXPECT_TRUE(check_variety_laws(*p).ok());
    try {
        gen("octonions", 0);
        FAIL() << "expected unsupported-spec";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), "unsupported-spec");
    }
}

TEST(Laws, DetectorsReportTheFirstWitness) {
    FiniteAlgebra a = *gen("cyclic_group", 4);
    a.tables[1][static_cast<std::size_t>(1) * 4 + 2] = 0;  // break 1+2 without touching units
    LawReport r = check_variety_laws(a);
    ASSERT_FALSE(r.ok());
    EXPECT_NE(r.failures[0].find("associativity"), std::string::npos);
}

TEST(Json, SerializationRoundTripIsByteStable) {
    for (const auto& a : {gen("symmetric", 3), gen("nonassoc_loop5", 0, 0), gen("ring_zn_modmul", 4)}) {
        std::string text = serialize_algebra(*a);
        AlgebraPtr back = parse_algebra(text);
        EXPECT_EQ(serialize_algebra(*back), text);
        EXPECT_EQ(back->tables, a->tables);
        EXPECT_TRUE(back->signature.same_as(a->signature));
        EXPECT_EQ(serialize_algebra(*parse_algebra(serialize_algebra(*a, true))), text);
    }
}

TEST(Json, ParseErrorsNameTheOffendingPath) {
    auto expect_parse_error = [](const std::string& text, const std::string& kind,
                                 const std::string& fragment) {
        try {
            parse_algebra(text);
            FAIL() << "expected " << kind << " for " << fragment;
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), kind) << fragment;
            EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos)
                << "got: " << e.what();
        }
    };
    expect_parse_error("{", "parse", "malformed JSON");
    expect_parse_error("[]", "parse", "top level");
    expect_parse_error(R"({"size": 2, "operations": {}})", "parse", "name");
    expect_parse_error(R"({"name": "x", "operations": {}})", "parse", "size");
    expect_parse_error(R"({"name": "x", "size": 2})", "parse", "operations");
    expect_parse_error(R"({"name": "x", "size": 2, "operations": {"mul": {"table": [[0,0],[0,0]]}}})",
                       "parse", "operations.mul: missing integer 'arity'");
    expect_parse_error(
        R"({"name": "x", "size": 2, "operations": {"mul": {"arity": 2, "table": [[0,0],[0]]}}})",
        "parse", "operations.mul.table[1]: expected array of length 2");
    expect_parse_error(
        R"({"name": "x", "size": 2, "operations": {"mul": {"arity": 2, "table": [[0,0],[0,5]]}}})",
        "table-out-of-range", "operations.mul.table[1][1] is 5, carrier size 2");
    expect_parse_error(
        R"({"name": "x", "size": 2, "operations": {"e": {"arity": 0, "table": 0}}, "jt": {"zero": "e"}})",
        "parse", "jt");
}

TEST(Json, JtUnitViolationIsAWarningUnlessStrict) {
    // 0 is declared the unit but 1+0 = 0.
    const std::string text =
        R"({"name": "x", "size": 2, "operations": {"e": {"arity": 0, "table": 0},)"
        R"( "plus": {"arity": 2, "table": [[0,1],[0,1]]}}, "jt": {"zero": "e", "plus": "plus"}})";
    std::vector<std::string> warnings;
    AlgebraPtr a = parse_algebra(text, false, &warnings);
    ASSERT_EQ(warnings.size(), 1u);
    EXPECT_NE(warnings[0].find("unit"), std::string::npos);
    EXPECT_EQ(a->jt_zero(), 0);
    try {
        parse_algebra(text, true);
        FAIL() << "expected jt-unit-violation";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), "jt-unit-violation");
    }
}

}  // namespace
