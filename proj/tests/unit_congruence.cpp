#include <gtest/gtest.h>

#include <random>

#include "tanalg/catalog.hpp"
#include "tanalg/congruence.hpp"
#include "test_util.hpp"

using namespace tanalg;

namespace {

std::vector<std::pair<int, int>> commutator_seeds(const AlgebraPtr& X) {
    int plus = X->jt_plus_op();
    std::vector<std::pair<int, int>> seeds;
    for (int x = 0; x < X->size; ++x)
        for (int y = 0; y < X->size; ++y)
            seeds.emplace_back(X->apply2(plus, x, y), X->apply2(plus, y, x));
    return seeds;
}

}  // namespace

// Expected classes frozen from the brute-force partition enumeration oracle,
// which is also run inline for the same inputs.
TEST(GenerateCongruence, Z4SingleSeed) {
    auto z4 = generate({.family = "cyclic_group", .n = 4});
    auto c = generate_congruence(z4, {{1, 3}});
    EXPECT_EQ(c.partition.classes(), (std::vector<std::vector<int>>{{0, 2}, {1, 3}}));
    auto oracle = brute_force_least_congruence(z4, {{1, 3}});
    EXPECT_TRUE(c.partition == oracle.partition);
}

TEST(GenerateCongruence, EmptySeedsGiveDiscretePartition) {
    auto s3 = generate({.family = "symmetric", .n = 3});
    auto c = generate_congruence(s3, {});
    EXPECT_EQ(c.partition.class_count(), 6);
}

TEST(GenerateCongruence, S3CommutatorPairsGiveSignPartition) {
    auto s3 = generate({.family = "symmetric", .n = 3});
    auto c = generate_congruence(s3, commutator_seeds(s3));
    // Even permutations (ranks 0, 3, 4 in lexicographic order) form one
    // class, odd permutations the other.
    EXPECT_EQ(c.partition.classes(), (std::vector<std::vector<int>>{{0, 3, 4}, {1, 2, 5}}));
    EXPECT_TRUE(c.partition == brute_force_least_congruence(s3, commutator_seeds(s3)).partition);
}

TEST(GenerateCongruence, SeedOutOfRange) {
    auto z2 = generate({.family = "cyclic_group", .n = 2});
    EXPECT_THROW(generate_congruence(z2, {{0, 2}}), Error);
    try {
        generate_congruence(z2, {{-1, 0}});
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), "seed-out-of-range");
    }
}

// Engine vs oracle on every small catalog algebra with randomized seed sets.
TEST(GenerateCongruence, MatchesBruteForceOracle) {
    std::vector<AlgebraPtr> algebras = {
        generate({.family = "cyclic_group", .n = 4}),
        generate({.family = "cyclic_group", .n = 6}),
        generate({.family = "symmetric", .n = 3}),
        generate({.family = "klein4"}),
        generate({.family = "nonassoc_loop5"}),
        generate({.family = "leftzero_monoid_plus_identity", .n = 2}),
        generate({.family = "random_jt_magma", .n = 5, .seed = 11}),
        generate({.family = "random_jt_magma", .n = 6, .seed = 12}),
        generate({.family = "ring_zn_modmul", .n = 6}),
    };
    std::mt19937 rng(20260815);
    int cases = 0;
    for (const auto& X : algebras) {
        for (int pairs = 0; pairs <= 3; ++pairs) {
            for (int rep = 0; rep < (pairs == 0 ? 1 : 4); ++rep) {
                auto seeds = testutil::random_pairs(rng, X->size, pairs);
                auto fast = generate_congruence(X, seeds);
                auto slow = brute_force_least_congruence(X, seeds);
                ASSERT_TRUE(fast.partition == slow.partition)
                    << X->name << " with " << pairs << " seed pairs";
                EXPECT_FALSE(fast.first_violation().has_value());
                ++cases;
            }
        }
    }
    EXPECT_GE(cases, 100);
}

TEST(Congruence, DetectsIncompatiblePartition) {
    auto z4 = generate({.family = "cyclic_group", .n = 4});
    Partition p(4);
    p.merge(0, 1);  // {0,1},{2},{3} is not compatible with addition
    Congruence c{p, z4};
    EXPECT_TRUE(c.first_violation().has_value());
    EXPECT_THROW(c.check(), Error);
    EXPECT_THROW(quotient(z4, c), Error);
}

TEST(Quotient, Z4ByTwoClassCongruence) {
    auto z4 = generate({.family = "cyclic_group", .n = 4});
    auto z2 = generate({.family = "cyclic_group", .n = 2});
    auto q = quotient(z4, generate_congruence(z4, {{1, 3}}));
    EXPECT_EQ(q.algebra->size, 2);
    EXPECT_NO_THROW(q.projection.check());
    EXPECT_TRUE(check_group_laws(*q.algebra).ok());
    EXPECT_TRUE(testutil::isomorphic(*q.algebra, *z2));
    // Classes indexed by least representative: class 0 = {0,2}, class 1 = {1,3}.
    EXPECT_EQ(q.class_of, (std::vector<int>{0, 1, 0, 1}));
    EXPECT_EQ(q.representative, (std::vector<int>{0, 1}));
}

TEST(Quotient, ProjectionIsCoequalizerMediator) {
    // Universal property on a small case: any homomorphism that identifies
    // the congruent pairs factors uniquely through the projection.
    auto z4 = generate({.family = "cyclic_group", .n = 4});
    auto z2 = generate({.family = "cyclic_group", .n = 2});
    auto q = quotient(z4, generate_congruence(z4, {{1, 3}}));
    Homomorphism f{FiniteFunction{4, 2, {0, 1, 0, 1}}, z4, z2};
    f.check();
    // Factorization g with g . proj = f exists and is unique because proj is
    // surjective: g(class) = f(representative).
    FiniteFunction g{q.algebra->size, 2, {}};
    g.values.resize(static_cast<std::size_t>(q.algebra->size));
    for (int cls = 0; cls < q.algebra->size; ++cls)
        g.values[static_cast<std::size_t>(cls)] = f(q.representative[static_cast<std::size_t>(cls)]);
    EXPECT_EQ(compose(g, q.projection.map), f.map);
    EXPECT_NO_THROW((Homomorphism{g, q.algebra, z2}.check()));
}

TEST(Kernel, SignHomomorphismKernelIsAlternatingGroup) {
    auto s3 = generate({.family = "symmetric", .n = 3});
    auto z2 = generate({.family = "cyclic_group", .n = 2});
    auto z3 = generate({.family = "cyclic_group", .n = 3});
    // Parity of each permutation in lexicographic rank order.
    Homomorphism sign{FiniteFunction{6, 2, {0, 1, 1, 0, 0, 1}}, s3, z2};
    sign.check();
    auto k = kernel(sign);
    EXPECT_EQ(k.elements, (std::vector<int>{0, 3, 4}));
    EXPECT_NO_THROW(k.inclusion.check());
    EXPECT_TRUE(check_group_laws(*k.algebra).ok());
    EXPECT_TRUE(testutil::isomorphic(*k.algebra, *z3));
}

TEST(Kernel, RejectsNonClosedSubset) {
    // A map that is not a homomorphism can have a kernel subset that is not
    // closed; the constructor must say which operation escapes.
    auto z4 = generate({.family = "cyclic_group", .n = 4});
    auto z2 = generate({.family = "cyclic_group", .n = 2});
    Homomorphism f{FiniteFunction{4, 2, {0, 1, 1, 1}}, z4, z2};  // kernel {0}: mul closed; fine
    EXPECT_NO_THROW(kernel(f));
    Homomorphism g{FiniteFunction{4, 2, {0, 1, 0, 0}}, z4, z2};  // kernel {0,2,3}: 2+3=1 escapes
    EXPECT_THROW(kernel(g), Error);
}

TEST(Partition, ClassIndexingAndRefinement) {
    Partition p(5);
    p.merge(4, 2);
    p.merge(1, 3);
    EXPECT_EQ(p.class_count(), 3);
    EXPECT_EQ(p.classes(), (std::vector<std::vector<int>>{{0}, {1, 3}, {2, 4}}));
    EXPECT_EQ(p.class_indices(), (std::vector<int>{0, 1, 2, 1, 2}));
    Partition coarser(5);
    coarser.merge(4, 2);
    coarser.merge(1, 3);
    coarser.merge(0, 1);
    EXPECT_TRUE(p.refines(coarser));
    EXPECT_FALSE(coarser.refines(p));
    EXPECT_FALSE(p == coarser);
}

TEST(PartitionEnumeration, BellNumbers) {
    const int bell[] = {1, 1, 2, 5, 15, 52, 203};
    for (int n = 1; n <= 6; ++n) {
        int count = 0;
        tanalg::detail::for_each_partition(n, [&](const std::vector<int>&) { ++count; });
        EXPECT_EQ(count, bell[n]) << "n=" << n;
    }
}
