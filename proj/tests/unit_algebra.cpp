#include <gtest/gtest.h>

#include "tanalg/algebra.hpp"
#include "tanalg/catalog.hpp"
#include "test_util.hpp"

using namespace tanalg;

TEST(FiniteAlgebra, CyclicGroupTablesAndLaws) {
    auto z4 = generate({.family = "cyclic_group", .n = 4});
    EXPECT_EQ(z4->size, 4);
    int mul = z4->signature.index_of("mul");
    EXPECT_EQ(z4->apply2(mul, 3, 2), 1);
    EXPECT_EQ(z4->apply1(z4->signature.index_of("inv"), 3), 1);
    EXPECT_EQ(z4->jt_zero(), 0);
    EXPECT_TRUE(check_group_laws(*z4).ok());
}

TEST(FiniteAlgebra, ValidateRejectsOutOfRangeEntry) {
    FiniteAlgebra a;
    a.name = "bad";
    a.signature = pointed_magma_signature();
    a.size = 2;
    a.tables = {{0}, {0, 1, 1, 7}};
    try {
        a.validate();
        FAIL() << "expected table-out-of-range";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), "table-out-of-range");
        ASSERT_EQ(e.witness().size(), 2u);
        EXPECT_EQ(e.witness()[0], 3);  // flat index
        EXPECT_EQ(e.witness()[1], 7);  // offending value
    }
}

TEST(FiniteAlgebra, ValidateRejectsBrokenUnit) {
    FiniteAlgebra a;
    a.name = "nounit";
    a.signature = pointed_magma_signature();
    a.size = 2;
    a.tables = {{0}, {0, 1, 1, 0}};  // plus(1,1)=0 fine, but plus(1,0)=1 ok... unit holds
    a.tables[1] = {0, 1, 0, 0};      // plus(1,0) = 0 != 1
    EXPECT_THROW(a.validate(), Error);
    try {
        a.validate();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), "jt-unit-violation");
    }
    // Tolerated when the unit law is not required.
    EXPECT_NO_THROW(a.validate(false));
}

TEST(FiniteFunction, ComposeInverseBijection) {
    FiniteFunction f{3, 3, {2, 0, 1}};
    EXPECT_TRUE(f.is_bijective());
    auto g = f.inverse();
    EXPECT_EQ(compose(g, f), FiniteFunction::identity(3));
    EXPECT_EQ(compose(f, g), FiniteFunction::identity(3));
    FiniteFunction h{3, 3, {2, 2, 1}};
    EXPECT_FALSE(h.is_bijective());
    EXPECT_THROW(h.inverse(), Error);
    EXPECT_THROW(compose(f, FiniteFunction{2, 2, {0, 1}}), Error);
}

TEST(Homomorphism, DetectsViolationWithOperation) {
    auto z4 = generate({.family = "cyclic_group", .n = 4});
    auto z2 = generate({.family = "cyclic_group", .n = 2});
    Homomorphism good{FiniteFunction{4, 2, {0, 1, 0, 1}}, z4, z2};
    EXPECT_FALSE(good.first_violation().has_value());
    EXPECT_NO_THROW(good.check());
    Homomorphism bad{FiniteFunction{4, 2, {0, 1, 1, 0}}, z4, z2};
    auto v = bad.first_violation();
    ASSERT_TRUE(v.has_value());
    EXPECT_THROW(bad.check(), Error);
}

// product(Z2, Z3) is isomorphic to Z6. Oracle: exhaustive search over all
// 720 bijections of the 6-element carrier.
TEST(Product, Z2TimesZ3IsZ6) {
    auto z2 = generate({.family = "cyclic_group", .n = 2});
    auto z3 = generate({.family = "cyclic_group", .n = 3});
    auto z6 = generate({.family = "cyclic_group", .n = 6});
    auto w = product(z2, z3);
    EXPECT_EQ(w.product->size, 6);
    EXPECT_NO_THROW(w.projections[0].check());
    EXPECT_NO_THROW(w.projections[1].check());
    EXPECT_TRUE(testutil::isomorphic(*w.product, *z6));
    // Row-major encoding: (x, y) -> x*3 + y, projections recover components.
    EXPECT_EQ(w.pair_index(1, 2), 5);
    EXPECT_EQ(w.first(5), 1);
    EXPECT_EQ(w.second(5), 2);
    EXPECT_EQ(w.projections[0](5), 1);
    EXPECT_EQ(w.projections[1](5), 2);
}

TEST(Product, MediatingMapIsUniqueCone) {
    auto z2 = generate({.family = "cyclic_group", .n = 2});
    auto z4 = generate({.family = "cyclic_group", .n = 4});
    auto w = product(z2, z2);
    // Cone from Z4: reduction mod 2 on both legs.
    FiniteFunction f{4, 2, {0, 1, 0, 1}};
    FiniteFunction g{4, 2, {0, 1, 0, 1}};
    auto m = mediating(f, g);
    EXPECT_EQ(compose(w.projections[0].map, m), f);
    EXPECT_EQ(compose(w.projections[1].map, m), g);
    // Uniqueness: every function Z4 -> Z2*Z2 satisfying both leg equations
    // equals m. 4^4 = 256 candidates, scan them all.
    int count = 0;
    std::vector<int> vals(4, 0);
    for (int enc = 0; enc < 256; ++enc) {
        int rest = enc;
        for (int i = 0; i < 4; ++i) {
            vals[static_cast<std::size_t>(i)] = rest % 4;
            rest /= 4;
        }
        FiniteFunction cand{4, 4, vals};
        if (compose(w.projections[0].map, cand) == f && compose(w.projections[1].map, cand) == g) {
            ++count;
            EXPECT_EQ(cand, m);
        }
    }
    EXPECT_EQ(count, 1);
    (void)z4;
}

TEST(Product, BudgetCapRejectsHugeTables) {
    FiniteAlgebra big;
    big.name = "big";
    big.signature.operations = {{"u", 1}};
    big.size = 20000;
    big.tables.resize(1);
    big.tables[0].assign(20000, 0);
    auto bp = make_algebra(std::move(big));
    try {
        product(bp, bp);
        FAIL() << "expected budget error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), "budget");
        ASSERT_EQ(e.witness().size(), 1u);
        EXPECT_EQ(e.witness()[0], 400000000);
    }
}

TEST(Terminal, OnePointAlgebraAndMap) {
    auto s3 = generate({.family = "symmetric", .n = 3});
    auto star = terminal(s3->signature);
    EXPECT_EQ(star->size, 1);
    EXPECT_NO_THROW(terminal_map(s3, star).check());
}

TEST(QuasiInjections, GroupInjectionsAreHomomorphisms) {
    auto s3 = generate({.family = "symmetric", .n = 3});
    auto qi = quasi_injections(s3);
    EXPECT_NO_THROW(qi.i1.check());
    EXPECT_NO_THROW(qi.i2.check());
    for (int x = 0; x < s3->size; ++x) {
        EXPECT_EQ(qi.square.first(qi.i1(x)), x);
        EXPECT_EQ(qi.square.second(qi.i1(x)), s3->jt_zero());
        EXPECT_EQ(qi.square.first(qi.i2(x)), s3->jt_zero());
        EXPECT_EQ(qi.square.second(qi.i2(x)), x);
    }
}

TEST(QuasiInjections, FailsWhenOperationMovesZero) {
    // Pointed magma with an extra unary operation u(0) = 1: <1,0> cannot be a
    // homomorphism because u does not fix the unit.
    FiniteAlgebra a;
    a.name = "movedzero";
    a.signature = pointed_magma_signature();
    a.signature.operations.push_back({"u", 1});
    a.size = 2;
    a.tables = {{0}, {0, 1, 1, 0}, {1, 0}};
    auto ap = make_algebra(std::move(a));
    try {
        quasi_injections(ap);
        FAIL() << "expected quasi-injection error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), "quasi-injection");
        EXPECT_NE(std::string(e.what()).find("'u'"), std::string::npos);
    }
}

TEST(Combinators, SymmetryAndInterchangeInvolutions) {
    auto s = symmetry_sigma(3, 4);
    auto s_back = symmetry_sigma(4, 3);
    EXPECT_EQ(compose(s_back, s), FiniteFunction::identity(12));
    auto t = interchange_tau(2, 3, 4, 5);
    auto t_back = interchange_tau(2, 4, 3, 5);
    EXPECT_EQ(compose(t_back, t), FiniteFunction::identity(120));
    EXPECT_EQ(assoc_alpha(2, 3, 4), FiniteFunction::identity(24));
}

TEST(Combinators, InterchangeComponentwise) {
    // ((xa,xb),(xc,xd)) -> ((xa,xc),(xb,xd)) on sizes (2,3,4,5).
    auto t = interchange_tau(2, 3, 4, 5);
    for (int xa = 0; xa < 2; ++xa)
        for (int xb = 0; xb < 3; ++xb)
            for (int xc = 0; xc < 4; ++xc)
                for (int xd = 0; xd < 5; ++xd) {
                    int src = ((xa * 3 + xb) * 4 + xc) * 5 + xd;
                    int dst = ((xa * 4 + xc) * 3 + xb) * 5 + xd;
                    EXPECT_EQ(t(src), dst);
                }
}

// Interchange satisfies the Yang-Baxter identity: on an eight-factor product,
// the two ways of shuffling middle pairs agree.
TEST(Combinators, InterchangeYangBaxter) {
    const int a = 2, b = 3, c = 2, d = 3, e = 2, f = 2, g = 3, h = 3;
    auto lhs = compose(product_map(interchange_tau(a, c, e, g), interchange_tau(b, d, f, h)),
                       compose(interchange_tau(a * c, b * d, e * g, f * h),
                               product_map(interchange_tau(a, b, c, d), interchange_tau(e, f, g, h))));
    auto rhs = compose(interchange_tau(a * e, b * f, c * g, d * h),
                       compose(product_map(interchange_tau(a, b, e, f), interchange_tau(c, d, g, h)),
                               interchange_tau(a * b, c * d, e * f, g * h)));
    EXPECT_EQ(lhs, rhs);
}

TEST(Signature, ValidationCatchesBadDesignation) {
    Signature s;
    s.operations = {{"e", 0}, {"plus", 2}};
    s.jt = JtDesignation{"plus", "plus"};  // zero must be arity 0
    EXPECT_THROW(s.validate(), Error);
    s.jt = JtDesignation{"e", "e"};  // plus must be arity 2
    EXPECT_THROW(s.validate(), Error);
    s.operations.push_back({"e", 1});
    s.jt.reset();
    EXPECT_THROW(s.validate(), Error);  // duplicate name
}
