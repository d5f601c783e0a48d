#include "tanalg/reflect.hpp"

#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace tanalg;

namespace {

AlgebraPtr gen(const std::string& family, int n = 0, std::uint64_t seed = 0) {
    GeneratorSpec s;
    s.family = family;
    s.n = n;
    s.seed = seed;
    return generate(s);
}

AlgebraPtr renamed_product(const AlgebraPtr& a, const AlgebraPtr& b, const std::string& name) {
    FiniteAlgebra copy = *product(a, b).product;
    copy.name = name;
    return std::make_shared<const FiniteAlgebra>(std::move(copy));
}

// Z_n with its loop signature: ldiv(a, b) = b - a, rdiv(a, b) = a - b.
AlgebraPtr cyclic_as_loop(int n) {
    FiniteAlgebra a;
    a.name = "zloop" + std::to_string(n);
    a.signature = loop_signature();
    a.size = n;
    a.tables.resize(4);
    a.tables[0] = {0};
    a.tables[1].resize(static_cast<std::size_t>(n) * n);
    a.tables[2].resize(static_cast<std::size_t>(n) * n);
    a.tables[3].resize(static_cast<std::size_t>(n) * n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            a.tables[1][static_cast<std::size_t>(x) * n + y] = (x + y) % n;
            a.tables[2][static_cast<std::size_t>(x) * n + y] = ((y - x) % n + n) % n;
            a.tables[3][static_cast<std::size_t>(x) * n + y] = ((x - y) % n + n) % n;
        }
    return make_algebra(std::move(a));
}

// The engine reflects through X*X while the oracles quotient X directly; the
// only candidate comparison sends the class of (x, y) to unit(x) + unit(y) on
// the oracle side. Returns it when it is a well-defined bijective
// homomorphism agreeing with the units, nullopt otherwise.
std::optional<FiniteFunction> mediating_iso(const ReflectionResult& e, const OracleReflection& o) {
    int plus = o.reflected->jt_plus_op();
    int n = o.input->size;
    std::vector<int> val(static_cast<std::size_t>(e.reflected->size), -1);
    for (int w = 0; w < e.square->size; ++w) {
        int cls = e.class_of[static_cast<std::size_t>(w)];
        int img = o.reflected->apply2(plus, o.unit(w / n), o.unit(w % n));
        if (val[static_cast<std::size_t>(cls)] < 0)
            val[static_cast<std::size_t>(cls)] = img;
        else if (val[static_cast<std::size_t>(cls)] != img)
            return std::nullopt;
    }
    FiniteFunction phi{e.reflected->size, o.reflected->size, std::move(val)};
    if (!phi.is_bijective()) return std::nullopt;
    if (Homomorphism{phi, e.reflected, o.reflected}.first_violation()) return std::nullopt;
    if (!(compose(phi, e.unit.map) == o.unit.map)) return std::nullopt;
    return phi;
}

TEST(Reflect, S3AbelianizationIsParity) {
    AssignmentEngine eng(ReflectMode::ab);
    AlgebraPtr s3 = gen("symmetric", 3);
    const ReflectionResult& r = eng.reflect_of(s3);
    EXPECT_EQ(r.reflected->size, 2);
    // Permutations are lex-ranked, so the unit is the parity map.
    EXPECT_EQ(r.unit.map.values, (std::vector<int>{0, 1, 1, 0, 0, 1}));
    ASSERT_TRUE(r.group.has_value());
    EXPECT_EQ(r.group->neg, (std::vector<int>{0, 1}));
    EXPECT_NO_THROW(r.witness.check());
}

TEST(Reflect, EngineCachesByContent) {
    AssignmentEngine eng(ReflectMode::ab);
    AlgebraPtr z4 = gen("cyclic_group", 4);
    const ReflectionResult* first = &eng.reflect_of(z4);
    EXPECT_EQ(first, &eng.reflect_of(z4));
    // A distinct shared_ptr with identical content hits the same entry.
    AlgebraPtr copy = std::make_shared<const FiniteAlgebra>(*z4);
    EXPECT_EQ(first, &eng.reflect_of(copy));
}

TEST(Reflect, AbelianInputReflectsBijectively) {
    AssignmentEngine eng(ReflectMode::ab);
    AlgebraPtr z6 = gen("cyclic_group", 6);
    const ReflectionResult& r = eng.reflect_of(z6);
    EXPECT_EQ(r.reflected->size, 6);
    EXPECT_TRUE(r.unit.map.is_bijective());
    auto structure = eng.is_l_algebra(z6);
    ASSERT_TRUE(structure.has_value());
    EXPECT_EQ(*structure, r.unit.map.inverse());
}

TEST(Reflect, NonAbelianInputHasNoStructureMap) {
    AssignmentEngine eng(ReflectMode::ab);
    EXPECT_EQ(eng.is_l_algebra(gen("symmetric", 3)), std::nullopt);
}

TEST(Reflect, GroupOracleAgreesWithEngine) {
    AssignmentEngine eng(ReflectMode::ab);
    struct Case {
        std::string family;
        int n;
        int expected_size;
    };
    const Case cases[] = {
        {"cyclic_group", 2, 2}, {"cyclic_group", 3, 3}, {"cyclic_group", 4, 4},
        {"cyclic_group", 6, 6}, {"klein4", 0, 4},       {"symmetric", 3, 2},
        {"dihedral", 4, 4},     {"quaternion8", 0, 4},
    };
    for (const Case& c : cases) {
        AlgebraPtr g = gen(c.family, c.n);
        const ReflectionResult& r = eng.reflect_of(g);
        OracleReflection o = group_commutator_oracle(g);
        EXPECT_EQ(r.reflected->size, c.expected_size) << g->name;
        EXPECT_EQ(o.reflected->size, c.expected_size) << g->name;
        EXPECT_TRUE(mediating_iso(r, o).has_value()) << g->name;
    }
}

TEST(Reflect, RingOracleAgreesWithEngine) {
    AssignmentEngine eng(ReflectMode::ab);
    // Modular multiplication on Z4: 1*1 = 1 collapses everything to 0.
    AlgebraPtr zn = gen("ring_zn_modmul", 4);
    const ReflectionResult& rz = eng.reflect_of(zn);
    OracleReflection oz = ring_square_oracle(zn);
    EXPECT_EQ(rz.reflected->size, 1);
    EXPECT_EQ(oz.reflected->size, 1);
    EXPECT_TRUE(mediating_iso(rz, oz).has_value());

    // Trivial multiplication: the reflection is the ring itself.
    GeneratorSpec spec;
    spec.family = "ring_trivial_mul";
    spec.orders = {2, 3};
    AlgebraPtr tr = generate(spec);
    const ReflectionResult& rt = eng.reflect_of(tr);
    OracleReflection ot = ring_square_oracle(tr);
    EXPECT_EQ(rt.reflected->size, 6);
    EXPECT_EQ(ot.reflected->size, 6);
    EXPECT_TRUE(rt.unit.map.is_bijective());
    EXPECT_TRUE(mediating_iso(rt, ot).has_value());
}

TEST(Reflect, LoopOracleAgreesWithEngine) {
    AssignmentEngine eng(ReflectMode::ab);
    // The nonassociative order-5 loop has no proper quotients, so its
    // reflection collapses to a point.
    AlgebraPtr q5 = gen("nonassoc_loop5", 0, 1);
    const ReflectionResult& r5 = eng.reflect_of(q5);
    OracleReflection o5 = loop_commutator_oracle(q5);
    EXPECT_EQ(r5.reflected->size, 1);
    EXPECT_EQ(o5.reflected->size, 1);
    EXPECT_TRUE(mediating_iso(r5, o5).has_value());

    // An associative commutative loop reflects onto itself.
    AlgebraPtr z5 = cyclic_as_loop(5);
    const ReflectionResult& rz = eng.reflect_of(z5);
    OracleReflection oz = loop_commutator_oracle(z5);
    EXPECT_EQ(rz.reflected->size, 5);
    EXPECT_EQ(oz.reflected->size, 5);
    EXPECT_TRUE(rz.unit.map.is_bijective());
    EXPECT_TRUE(mediating_iso(rz, oz).has_value());
}

TEST(Reflect, LeftzeroMonoidReflectsToBooleanOr) {
    AssignmentEngine cmon(ReflectMode::cmon);
    AlgebraPtr lz = gen("leftzero_monoid_plus_identity", 2);
    const ReflectionResult& r = cmon.reflect_of(lz);
    // {class of (e,e), class of everything else}; the nonzero class is a
    // non-invertible idempotent.
    EXPECT_EQ(r.reflected->size, 2);
    EXPECT_EQ(r.witness.add(1, 1), 1);
    EXPECT_FALSE(r.group.has_value());

    AssignmentEngine ab(ReflectMode::ab);
    try {
        ab.reflect_of(lz);
        FAIL() << "ab mode must reject a non-invertible reflection";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), "missing-inverse");
        ASSERT_FALSE(e.witness().empty());
        EXPECT_EQ(e.witness()[0], 1);
    }
}

TEST(Reflect, IdentityModeOnAbelianGroup) {
    AssignmentEngine eng(ReflectMode::identity);
    AlgebraPtr z4 = gen("cyclic_group", 4);
    const ReflectionResult& r = eng.reflect_of(z4);
    EXPECT_EQ(r.reflected.get(), z4.get());
    EXPECT_EQ(r.unit.map, FiniteFunction::identity(4));
    ASSERT_TRUE(r.group.has_value());
    AssignmentReport rep = verify_assignment(eng, {z4});
    EXPECT_TRUE(rep.all_ok());
}

TEST(Reflect, IdentityModeRejectsNoncommutativeWitness) {
    AssignmentEngine eng(ReflectMode::identity);
    try {
        eng.reflect_of(gen("leftzero_monoid_plus_identity", 2));
        FAIL() << "leftzero multiplication is not commutative";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), "identity-mode-invalid");
        EXPECT_EQ(e.witness(), (std::vector<std::int64_t>{1, 2}));
    }
}

TEST(Reflect, IdentityModeRejectsNonadditiveOperation) {
    AssignmentEngine eng(ReflectMode::identity);
    try {
        eng.reflect_of(gen("ring_zn_modmul", 4));
        FAIL() << "ring multiplication is bilinear, not additive";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), "identity-mode-invalid");
        EXPECT_NE(std::string(e.what()).find("'mul'"), std::string::npos);
    }
}

TEST(Reflect, TerminalModeCollapses) {
    AssignmentEngine eng(ReflectMode::terminal);
    AlgebraPtr s3 = gen("symmetric", 3);
    EXPECT_EQ(eng.reflect_of(s3).reflected->size, 1);
    AssignmentReport rep = verify_assignment(eng, {s3});
    EXPECT_TRUE(rep.all_ok());
}

TEST(Reflect, AssignmentBatteryPasses) {
    AssignmentEngine eng(ReflectMode::ab);
    AlgebraPtr z2 = gen("cyclic_group", 2);
    AlgebraPtr z4 = gen("cyclic_group", 4);
    AlgebraPtr s3 = gen("symmetric", 3);
    AlgebraPtr s3z2 = renamed_product(s3, z2, "s3xz2");

    std::vector<Homomorphism> homs;
    homs.push_back(Homomorphism{FiniteFunction{6, 2, {0, 1, 1, 0, 0, 1}}, s3, z2});  // sign
    homs.push_back(Homomorphism{FiniteFunction{2, 4, {0, 2}}, z2, z4});              // doubling
    {
        std::vector<int> proj(12);
        for (int i = 0; i < 12; ++i) proj[static_cast<std::size_t>(i)] = i / 2;
        homs.push_back(Homomorphism{FiniteFunction{12, 6, std::move(proj)}, s3z2, s3});
    }
    homs.push_back(Homomorphism{FiniteFunction::constant(4, 2, 0), z4, z2});  // zero map

    AssignmentReport rep = verify_assignment(eng, {z2, z4, s3, s3z2}, homs);
    for (const auto& c : rep.checks)
        EXPECT_TRUE(c.ok) << c.id << " on " << c.subject << ": " << c.detail;
    EXPECT_TRUE(rep.all_ok());

    // The omega check on the 12-element product would need the square of its
    // square; that overruns the table cap and must skip, not fail.
    int skipped = 0;
    for (const auto& c : rep.checks)
        if (c.detail.rfind("skipped:", 0) == 0) {
            ++skipped;
            EXPECT_EQ(c.id, "omega-iso");
            EXPECT_EQ(c.subject, "s3xz2");
        }
    EXPECT_EQ(skipped, 1);

    // The composable chain s3xz2 -> s3 -> z2 must have been exercised.
    int composed = 0;
    for (const auto& c : rep.checks)
        if (c.id == "functor-compose") ++composed;
    EXPECT_GE(composed, 1);

    EXPECT_EQ(eng.reflect_of(s3z2).reflected->size, 4);
}

TEST(Reflect, InducedSignMapMatchesParity) {
    AssignmentEngine eng(ReflectMode::ab);
    AlgebraPtr s3 = gen("symmetric", 3);
    AlgebraPtr z2 = gen("cyclic_group", 2);
    Homomorphism sign{FiniteFunction{6, 2, {0, 1, 1, 0, 0, 1}}, s3, z2};
    Homomorphism L = eng.induced(sign);
    EXPECT_EQ(L.map, FiniteFunction::identity(2));
}

TEST(Reflect, InducedZeroMorphismPicksZero) {
    AssignmentEngine eng(ReflectMode::ab);
    AlgebraPtr z4 = gen("cyclic_group", 4);
    AlgebraPtr z2 = gen("cyclic_group", 2);
    Homomorphism zero{FiniteFunction::constant(4, 2, 0), z4, z2};
    Homomorphism L = eng.induced(zero);
    int target_zero = eng.reflect_of(z2).witness.zero;
    for (int v : L.map.values) EXPECT_EQ(v, target_zero);
}

TEST(Reflect, OmegaOnMixedProduct) {
    AssignmentEngine eng(ReflectMode::ab);
    ProductWitness w = product(gen("cyclic_group", 4), gen("symmetric", 3));
    OmegaResult om = eng.omega(w);
    EXPECT_EQ(om.forward.domain_size, 8);  // |L(Z4 x S3)| = 4 * 2
    EXPECT_TRUE(om.forward.is_bijective());
    EXPECT_EQ(compose(om.inverse, om.forward), FiniteFunction::identity(8));
}

TEST(Reflect, NuIsMonoidIsoWithCoherence) {
    AssignmentEngine eng(ReflectMode::ab);
    AlgebraPtr s3 = gen("symmetric", 3);
    NuResult n = eng.nu(s3, true);
    EXPECT_EQ(n.forward.domain_size, 2);
    EXPECT_EQ(compose(n.forward, n.eta_l), FiniteFunction::identity(2));
}

TEST(Reflect, RejectsOperationMovingZero) {
    // An extra unary operation with u(e) != e breaks the quasi-injections.
    FiniteAlgebra a;
    a.name = "badzero";
    a.signature.operations = {{"e", 0}, {"mul", 2}, {"u", 1}};
    a.signature.jt = JtDesignation{"e", "mul"};
    a.size = 2;
    a.tables = {{0}, {0, 1, 1, 0}, {1, 0}};
    AlgebraPtr bad = make_algebra(std::move(a));
    AssignmentEngine eng(ReflectMode::cmon);
    try {
        eng.reflect_of(bad);
        FAIL() << "operation moving the zero must be rejected";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), "quasi-injection");
        EXPECT_NE(std::string(e.what()).find("'u'"), std::string::npos);
    }
}

TEST(Reflect, ModeNamesRoundTrip) {
    for (ReflectMode m : {ReflectMode::cmon, ReflectMode::ab, ReflectMode::identity,
                          ReflectMode::terminal})
        EXPECT_EQ(mode_from_name(mode_name(m)), m);
    EXPECT_THROW(mode_from_name("abelian"), Error);
}

}  // namespace
