#pragma once
// Fixed points of the assignment (structure maps a : L(A) -> A with
// L(a) = nu_A), differential objects, and differential bundles, with the two
// constructions between them: the product bundle X x A out of a fixed point,
// and the kernel-of-the-projection fixed point out of a bundle. All axioms
// are checked by exhaustive evaluation on the finite carriers; reports reuse
// the tangent module's AxiomReport.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tanalg/catalog.hpp"
#include "tanalg/tangent.hpp"

namespace tanalg {

// --- L-algebras -----------------------------------------------------------------

// (A, a) with a : L(A) -> A invertible and L(a) = nu_A, plus the commutative
// monoid transported onto A along a: x + y = a(a^{-1}(x) + a^{-1}(y)),
// zero = a(0). When the reflection carries negatives the transported abelian
// group rides along.
struct LAlgebra {
    AlgebraPtr carrier;  // A
    FiniteFunction a;    // L(A) -> A
    FiniteFunction a_inv;
    CommutativeMonoidWitness witness;          // the transported monoid on A
    std::optional<AbelianGroupWitness> group;  // transported negation, when available
};

// Validates the pair and transports the monoid structure. Throws
// "l-algebra-invalid" when a is not an invertible homomorphism or when the
// induced map on L(A) disagrees with nu.
inline LAlgebra make_l_algebra(AssignmentEngine& eng, const AlgebraPtr& A,
                               const FiniteFunction& a) {
    const ReflectionResult& RA = eng.reflect_of(A);
    if (a.domain_size != RA.reflected->size || a.codomain_size != A->size)
        throw Error("l-algebra-invalid",
                    "structure map of '" + A->name + "' has the wrong shape",
                    {a.domain_size, a.codomain_size});
    if (!a.is_bijective())
        throw Error("l-algebra-invalid",
                    "structure map of '" + A->name + "' is not invertible");
    Homomorphism aH{a, RA.reflected, A};
    aH.check();
    Homomorphism La = eng.induced(aH);
    NuResult nuA = eng.nu(A, false);
    for (int w = 0; w < La.map.domain_size; ++w)
        if (La.map(w) != nuA.forward(w))
            throw Error("l-algebra-invalid",
                        "induced structure map differs from nu on '" + A->name + "'", {w});
    LAlgebra out;
    out.carrier = A;
    out.a = a;
    out.a_inv = a.inverse();
    const int n = A->size;
    std::vector<int> plus(static_cast<std::size_t>(n) * n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            plus[static_cast<std::size_t>(static_cast<std::int64_t>(x) * n + y)] =
                a(RA.witness.add(out.a_inv(x), out.a_inv(y)));
    out.witness = CommutativeMonoidWitness{A, std::move(plus), a(RA.witness.zero)};
    out.witness.check();
    if (RA.group) {
        std::vector<int> neg(static_cast<std::size_t>(n));
        for (int x = 0; x < n; ++x)
            neg[static_cast<std::size_t>(x)] =
                a(RA.group->neg[static_cast<std::size_t>(out.a_inv(x))]);
        out.group = AbelianGroupWitness{out.witness, std::move(neg)};
        out.group->check();
    }
    return out;
}

// The canonical structure map eta^{-1} on a fixed point of the assignment.
inline LAlgebra canonical_l_algebra(AssignmentEngine& eng, const AlgebraPtr& A) {
    auto a = eng.is_l_algebra(A);
    if (!a)
        throw Error("l-algebra-invalid",
                    "unit of '" + A->name + "' is not invertible; not a fixed point");
    return make_l_algebra(eng, A, *a);
}

// --- bundle and object types ----------------------------------------------------

// Additive bundle data over a base algebra plus a lift into T(E) = E x L(E).
// sigma is indexed by the set pullback of q with itself (lexicographic pairs).
struct DifferentialBundle {
    AlgebraPtr base;   // X
    AlgebraPtr total;  // E
    FiniteFunction q;       // E -> X
    SetPullback e2;         // pairs of E over a common base point
    FiniteFunction sigma;   // e2.size -> E
    FiniteFunction zeta;    // X -> E
    FiniteFunction lambda;  // E -> T(E)
    std::optional<FiniteFunction> iota;  // fibrewise negation, when present

    AdditiveBundle bundle() const { return AdditiveBundle{q, e2, sigma, zeta, iota}; }
};

// A commutative monoid with a lift into its tangent carrier; the lift must
// embed A as the zero fibre of the projection.
struct DifferentialObject {
    CommutativeMonoidWitness witness;  // on the carrier A
    FiniteFunction lambda;             // A -> T(A) = A x L(A)

    const AlgebraPtr& carrier() const { return witness.algebra; }
};

namespace detail {

// The n-fold pullback of q as a subalgebra of E^n carried by the tuple index
// set; operations act componentwise and stay inside because q commutes with
// them.
inline AlgebraPtr pullback_algebra(const Homomorphism& q, const NFoldPullback& pn,
                                   const std::string& name) {
    const AlgebraPtr& E = q.source;
    const int n = pn.n;
    std::unordered_map<std::int64_t, int> index;
    index.reserve(static_cast<std::size_t>(pn.size) * 2);
    auto key = [&](const int* tuple) {
        std::int64_t k = 0;
        for (int i = 0; i < n; ++i) k = k * E->size + tuple[static_cast<std::size_t>(i)];
        return k;
    };
    for (int i = 0; i < pn.size; ++i)
        index.emplace(key(&pn.components[static_cast<std::size_t>(i) * static_cast<std::size_t>(n)]), i);
    FiniteAlgebra P;
    P.name = name;
    P.signature = E->signature;
    P.size = pn.size;
    P.tables.resize(P.signature.operations.size());
    std::vector<int> image(static_cast<std::size_t>(n));
    std::vector<int> args;
    for (std::size_t op = 0; op < P.signature.operations.size(); ++op) {
        const int ar = P.signature.operations[op].arity;
        check_table_budget(P.size, ar, name);
        std::int64_t tuples = table_entries(P.size, ar);
        P.tables[op].resize(static_cast<std::size_t>(tuples));
        std::vector<int> operands(static_cast<std::size_t>(ar));
        args.assign(static_cast<std::size_t>(ar), 0);
        for (std::int64_t t = 0; t < tuples; ++t) {
            std::int64_t rest = t;
            for (int i = ar - 1; i >= 0; --i) {
                operands[static_cast<std::size_t>(i)] = static_cast<int>(rest % P.size);
                rest /= P.size;
            }
            for (int k = 0; k < n; ++k) {
                for (int i = 0; i < ar; ++i)
                    args[static_cast<std::size_t>(i)] =
                        pn.component(operands[static_cast<std::size_t>(i)], k);
                image[static_cast<std::size_t>(k)] = E->apply(static_cast<int>(op), args);
            }
            auto it = index.find(key(image.data()));
            if (it == index.end())
                throw Error("pullback-not-closed",
                            "operation '" + P.signature.operations[op].name +
                                "' leaves the pullback of '" + E->name + "'",
                            {static_cast<std::int64_t>(op), t});
            P.tables[op][static_cast<std::size_t>(t)] = it->second;
        }
    }
    if (P.signature.jt)
        P.zero_element =
            P.tables[static_cast<std::size_t>(P.signature.index_of(P.signature.jt->zero_name))][0];
    return std::make_shared<const FiniteAlgebra>(std::move(P));
}

// Projection onto the k-th component of an n-fold pullback algebra.
inline Homomorphism pullback_projection(const AlgebraPtr& P, const NFoldPullback& pn, int k,
                                        const AlgebraPtr& E) {
    FiniteFunction f{pn.size, E->size, std::vector<int>(static_cast<std::size_t>(pn.size))};
    for (int i = 0; i < pn.size; ++i) f.values[static_cast<std::size_t>(i)] = pn.component(i, k);
    return Homomorphism{std::move(f), P, E};
}

}  // namespace detail

// --- construction: fixed point to bundle ------------------------------------------

// E = X x A with q = pi1, the fibrewise sum and zero of the transported
// monoid, and the lift (1 x omega^{-1}) . (<1, 0_a . t> x <0 . t, a^{-1}>)
// assembled verbatim from its factors.
inline DifferentialBundle build_diff_bundle(AssignmentEngine& eng, const AlgebraPtr& X,
                                            const LAlgebra& alg) {
    const AlgebraPtr& A = alg.carrier;
    ProductWitness XA = product(X, A);
    const ReflectionResult& RX = eng.reflect_of(X);
    OmegaResult om = eng.omega(XA);
    const int nx = X->size, na = A->size, ne = nx * na;
    const int nlx = RX.reflected->size;
    DifferentialBundle d;
    d.base = X;
    d.total = XA.product;
    d.q = XA.projections[0].map;
    d.zeta = pairing(FiniteFunction::identity(nx),
                     FiniteFunction::constant(nx, na, alg.witness.zero));
    d.e2 = set_pullback(d.q, d.q);
    std::vector<int> sv(static_cast<std::size_t>(d.e2.size));
    for (int i = 0; i < d.e2.size; ++i) {
        int u = d.e2.first[static_cast<std::size_t>(i)];
        int v = d.e2.second[static_cast<std::size_t>(i)];
        sv[static_cast<std::size_t>(i)] = (u / na) * na + alg.witness.add(u % na, v % na);
    }
    d.sigma = FiniteFunction{d.e2.size, ne, std::move(sv)};
    FiniteFunction pre = product_map(
        d.zeta, pairing(FiniteFunction::constant(na, nlx, RX.witness.zero), alg.a_inv));
    d.lambda = compose(product_map(FiniteFunction::identity(ne), om.inverse), pre);
    if (alg.group) {
        std::vector<int> iv(static_cast<std::size_t>(ne));
        for (int e = 0; e < ne; ++e)
            iv[static_cast<std::size_t>(e)] =
                (e / na) * na + alg.group->neg[static_cast<std::size_t>(e % na)];
        d.iota = FiniteFunction{ne, ne, std::move(iv)};
    }
    return d;
}

// The tangent carrier of X with its vertical lift is itself a differential
// bundle over X.
inline DifferentialBundle tangent_diff_bundle(const TangentSpace& tx) {
    AdditiveBundle b = tx.bundle();
    DifferentialBundle d;
    d.base = tx.base;
    d.total = tx.algebra();
    d.q = std::move(b.q);
    d.e2 = std::move(b.e2);
    d.sigma = std::move(b.bullet);
    d.zeta = std::move(b.unit);
    d.iota = std::move(b.iota);
    d.lambda = tx.ell;
    return d;
}

// --- construction: fixed point to differential object -----------------------------

// lambda_a(v) = (zero_a, a^{-1}(v)).
inline DifferentialObject build_diff_object(AssignmentEngine& eng, const LAlgebra& alg) {
    const AlgebraPtr& A = alg.carrier;
    const int na = A->size;
    const int nla = eng.reflect_of(A).reflected->size;
    std::vector<int> lv(static_cast<std::size_t>(na));
    for (int v = 0; v < na; ++v)
        lv[static_cast<std::size_t>(v)] = alg.witness.zero * nla + alg.a_inv(v);
    return DifferentialObject{alg.witness, FiniteFunction{na, na * nla, std::move(lv)}};
}

// Monoid laws plus the equalizer property of the lift: injective with image
// exactly the zero fibre of the tangent projection.
inline void check_diff_object(AssignmentEngine& eng, const DifferentialObject& d) {
    d.witness.check();
    const AlgebraPtr& A = d.carrier();
    const ReflectionResult& RA = eng.reflect_of(A);
    const int na = A->size, nla = RA.reflected->size;
    if (d.lambda.domain_size != na ||
        d.lambda.codomain_size != static_cast<std::int64_t>(na) * nla)
        throw Error("diff-object-invalid",
                    "lift of '" + A->name + "' has the wrong shape",
                    {d.lambda.domain_size, d.lambda.codomain_size});
    std::vector<int> hit(static_cast<std::size_t>(na) * nla, -1);
    for (int v = 0; v < na; ++v) {
        int t = d.lambda(v);
        if (t / nla != d.witness.zero)
            throw Error("diff-object-invalid",
                        "lift of '" + A->name + "' leaves the zero fibre", {v, t});
        if (hit[static_cast<std::size_t>(t)] >= 0)
            throw Error("diff-object-invalid", "lift of '" + A->name + "' is not injective",
                        {hit[static_cast<std::size_t>(t)], v});
        hit[static_cast<std::size_t>(t)] = v;
    }
    for (int w = 0; w < nla; ++w)
        if (hit[static_cast<std::size_t>(static_cast<std::int64_t>(d.witness.zero) * nla + w)] < 0)
            throw Error("diff-object-invalid",
                        "zero fibre element of '" + A->name + "' missed by the lift", {w});
}

// --- inverse construction: differential object to fixed point ---------------------

// a^{-1} = pi2 . lambda must be invertible, its inverse must induce nu, and
// the monoid transported back along it must be the given witness.
inline LAlgebra diff_object_to_l_algebra(AssignmentEngine& eng, const DifferentialObject& d) {
    check_diff_object(eng, d);
    const AlgebraPtr& A = d.carrier();
    const ReflectionResult& RA = eng.reflect_of(A);
    const int na = A->size, nla = RA.reflected->size;
    FiniteFunction a_inv{na, nla, std::vector<int>(static_cast<std::size_t>(na))};
    for (int v = 0; v < na; ++v) a_inv.values[static_cast<std::size_t>(v)] = d.lambda(v) % nla;
    if (!a_inv.is_bijective()) {
        std::vector<int> seen(static_cast<std::size_t>(nla), -1);
        for (int v = 0; v < na; ++v) {
            int w = a_inv(v);
            if (seen[static_cast<std::size_t>(w)] >= 0)
                throw Error("diff-object-invalid",
                            "second lift component on '" + A->name + "' is not invertible",
                            {seen[static_cast<std::size_t>(w)], v});
            seen[static_cast<std::size_t>(w)] = v;
        }
        throw Error("diff-object-invalid",
                    "second lift component on '" + A->name + "' is not invertible",
                    {na, nla});
    }
    LAlgebra out = make_l_algebra(eng, A, a_inv.inverse());
    if (out.witness.plus != d.witness.plus || out.witness.zero != d.witness.zero)
        throw Error("diff-object-invalid",
                    "monoid transported along the recovered structure map differs on '" +
                        A->name + "'");
    return out;
}

// --- inverse construction: differential bundle to fixed point ---------------------

struct BundleFibre {
    AlgebraPtr base;
    KernelResult kernel;          // ker(q) with its inclusion into E
    LAlgebra algebra;             // the fixed-point structure on ker(q)
    FiniteFunction lambda_tilde;  // L(ker(q)) -> E, the fill-in along the kernel inclusion
    std::vector<int> l_class_of;  // L(E) -> L(ker(q)), or -1 off the kernel of L(q)
};

// The universal fill-in lands on the cone (zero, inclusion), which commutes
// only over the kernel of L(q); lambda_tilde(u) is the unique e with
// q(e) = 0 and lambda(e) = (0, Lk(u)). The scan doubles as a check of the
// universality property, and L must carry the kernel of q onto the kernel of
// L(q) for the structure map to close up.
inline BundleFibre diff_bundle_to_l_algebra(AssignmentEngine& eng, const DifferentialBundle& d) {
    const int zx = d.base->jt_zero();
    const int ze = d.total->jt_zero();
    const ReflectionResult& RE = eng.reflect_of(d.total);
    const int ne = d.total->size, nle = RE.reflected->size;
    if (d.lambda.domain_size != ne ||
        d.lambda.codomain_size != static_cast<std::int64_t>(ne) * nle)
        throw Error("bundle-invalid", "lift of '" + d.total->name + "' has the wrong shape",
                    {d.lambda.domain_size, d.lambda.codomain_size});
    // (q, lambda) jointly injective; the fill-in below is then unique.
    for (int e = 0; e < ne; ++e)
        for (int f = e + 1; f < ne; ++f)
            if (d.q(e) == d.q(f) && d.lambda(e) == d.lambda(f))
                throw Error("universality",
                            "projection and lift of '" + d.total->name +
                                "' are not jointly injective",
                            {e, f});
    Homomorphism qH{d.q, d.total, d.base};
    qH.check();
    FiniteFunction Lq = eng.induced(qH).map;
    const int zlx = eng.reflect_of(d.base).witness.zero;
    KernelResult ker = kernel(qH);
    FiniteFunction Lk = eng.induced(ker.inclusion).map;
    std::vector<int> l_class_of(static_cast<std::size_t>(nle), -1);
    for (int u = 0; u < Lk.domain_size; ++u) {
        int w = Lk(u);
        if (l_class_of[static_cast<std::size_t>(w)] >= 0)
            throw Error("kernel-preservation",
                        "kernel inclusion of '" + d.total->name +
                            "' is not injective after reflection",
                        {l_class_of[static_cast<std::size_t>(w)], u});
        l_class_of[static_cast<std::size_t>(w)] = u;
    }
    for (int w = 0; w < nle; ++w)
        if ((Lq(w) == zlx) != (l_class_of[static_cast<std::size_t>(w)] >= 0))
            throw Error("kernel-preservation",
                        "reflection of '" + d.total->name +
                            "' does not carry ker(q) onto ker(L(q))",
                        {w});
    FiniteFunction lt{Lk.domain_size, ne, std::vector<int>(static_cast<std::size_t>(Lk.domain_size))};
    FiniteFunction a{Lk.domain_size, ker.algebra->size,
                     std::vector<int>(static_cast<std::size_t>(Lk.domain_size))};
    for (int u = 0; u < Lk.domain_size; ++u) {
        int found = -1;
        const int target = ze * nle + Lk(u);
        for (int e = 0; e < ne; ++e)
            if (d.q(e) == zx && d.lambda(e) == target) {
                found = e;
                break;
            }
        if (found < 0)
            throw Error("universality",
                        "no fill-in over '" + d.total->name + "' at lift value " +
                            std::to_string(Lk(u)),
                        {u});
        int pos = ker.position_of[static_cast<std::size_t>(found)];
        if (pos < 0)
            throw Error("universality",
                        "fill-in leaves the kernel of '" + d.total->name + "'", {u, found});
        lt.values[static_cast<std::size_t>(u)] = found;
        a.values[static_cast<std::size_t>(u)] = pos;
    }
    LAlgebra alg = make_l_algebra(eng, ker.algebra, a);
    return BundleFibre{d.base, std::move(ker), std::move(alg), std::move(lt),
                       std::move(l_class_of)};
}

// --- bundle verification ----------------------------------------------------------

inline const std::vector<std::string>& bundle_axiom_registry() {
    static const std::vector<std::string> ids = {
        "01-bundle-structure",   "02-image-bundle-morphism",
        "03-tangent-bundle-morphism", "04-lift-coherence",
        "05-lift-universality",  "06-pullback-preservation",
        "07-rosicky-square",     "08-fibre-negation",
    };
    return ids;
}

// Verifier for one differential bundle. Tangent data over the total space is
// built lazily and shared; budget overflows demote the entries that needed
// the data to skipped.
class BundleVerifier {
public:
    AssignmentEngine& eng;
    const DifferentialBundle& d;
    std::int64_t budget;

    BundleVerifier(AssignmentEngine& engine, const DifferentialBundle& bundle,
                   std::int64_t budget_limit)
        : eng(engine), d(bundle), budget(budget_limit) {
        check_shapes();
    }

    AxiomReport run() {
        AxiomReport rep;
        try {
            TangentSpace& t = tx();
            rep.t_size = t.t_size();
            rep.t2_size = t.t2_size();
        } catch (const Error& e) {
            if (e.kind() != "budget") throw;
        }
        rep.entries.push_back(detail::run_axiom("01-bundle-structure",
                                                [&](std::int64_t& c) { return bundle_structure(c); }));
        rep.entries.push_back(detail::run_axiom("02-image-bundle-morphism",
                                                [&](std::int64_t& c) { return image_morphism(c); }));
        rep.entries.push_back(detail::run_axiom("03-tangent-bundle-morphism",
                                                [&](std::int64_t& c) { return tangent_morphism(c); }));
        rep.entries.push_back(detail::run_axiom("04-lift-coherence",
                                                [&](std::int64_t& c) { return lift_coherence(c); }));
        rep.entries.push_back(detail::run_axiom("05-lift-universality",
                                                [&](std::int64_t& c) { return lift_universality(c); }));
        rep.entries.push_back(detail::run_axiom("06-pullback-preservation",
                                                [&](std::int64_t& c) { return pullback_preservation(c); }));
        rep.entries.push_back(detail::run_axiom("07-rosicky-square",
                                                [&](std::int64_t& c) { return rosicky_square(c); }));
        rep.entries.push_back(detail::run_axiom("08-fibre-negation",
                                                [&](std::int64_t& c) { return fibre_negation(c); }));
        return rep;
    }

private:
    std::shared_ptr<TangentSpace> tx_;
    AlgebraPtr e2alg_;
    std::optional<AdditiveBundle> image_;
    std::optional<FiniteFunction> z_x_;

    void check_shapes() const {
        const int ne = d.total->size, nx = d.base->size;
        bool ok = d.q.domain_size == ne && d.q.codomain_size == nx &&
                  d.zeta.domain_size == nx && d.zeta.codomain_size == ne &&
                  d.sigma.domain_size == d.e2.size && d.sigma.codomain_size == ne &&
                  d.e2.domain_a == ne && d.e2.domain_b == ne &&
                  d.lambda.domain_size == ne && d.lambda.codomain_size % ne == 0;
        if (d.iota) ok = ok && d.iota->domain_size == ne && d.iota->codomain_size == ne;
        if (!ok)
            throw Error("bundle-invalid",
                        "structural tables of '" + d.total->name + "' have inconsistent shapes");
    }

    TangentSpace& tx() {
        if (!tx_) {
            tx_ = build_tangent(eng, d.total, budget);
            if (d.lambda.codomain_size != tx_->t_size())
                throw Error("bundle-invalid",
                            "lift codomain of '" + d.total->name +
                                "' does not match the tangent carrier",
                            {d.lambda.codomain_size, tx_->t_size()});
        }
        return *tx_;
    }

    FiniteFunction tof(const Homomorphism& f) {
        f.check();
        return tangent_of_function(eng, f);
    }

    Homomorphism q_hom() const { return Homomorphism{d.q, d.total, d.base}; }
    Homomorphism zeta_hom() const { return Homomorphism{d.zeta, d.base, d.total}; }

    Homomorphism lambda_hom() { return Homomorphism{d.lambda, d.total, tx().algebra()}; }

    // z over the base: X -> T(X) = X x L(X).
    const FiniteFunction& z_x() {
        if (!z_x_) {
            const ReflectionResult& RX = eng.reflect_of(d.base);
            z_x_ = pairing(FiniteFunction::identity(d.base->size),
                           FiniteFunction::constant(d.base->size, RX.reflected->size,
                                                    RX.witness.zero));
        }
        return *z_x_;
    }

    // The pullback of q with itself as an algebra; its tuple order coincides
    // with the set pullback's.
    const AlgebraPtr& e2_algebra() {
        if (!e2alg_) {
            NFoldPullback p2 = n_fold_pullback(d.q, 2);
            if (p2.size != d.e2.size)
                throw Error("bundle-invalid", "pullback index mismatch on '" + d.total->name + "'",
                            {p2.size, d.e2.size});
            e2alg_ = detail::pullback_algebra(q_hom(), p2, d.total->name + "_2");
        }
        return e2alg_;
    }

    // The image of the bundle under T: projection T(q), sum T(sigma)
    // transported through the comparison with the pullback of T(q), zero
    // T(zeta). Throws "pullback-preservation" when the comparison is not a
    // bijection.
    const AdditiveBundle& image(std::int64_t& cost) {
        if (image_) return *image_;
        AdditiveBundle b;
        b.q = tof(q_hom());
        b.e2 = set_pullback(b.q, b.q);
        b.unit = tof(zeta_hom());
        const AlgebraPtr& P = e2_algebra();
        NFoldPullback p2 = n_fold_pullback(d.q, 2);
        FiniteFunction t_rho1 = tof(detail::pullback_projection(P, p2, 0, d.total));
        FiniteFunction t_rho2 = tof(detail::pullback_projection(P, p2, 1, d.total));
        std::vector<int> back(static_cast<std::size_t>(b.e2.size), -1);
        for (int u = 0; u < t_rho1.domain_size; ++u) {
            ++cost;
            int j = b.e2.pair(t_rho1(u), t_rho2(u));
            if (j < 0)
                throw Error("pullback-preservation",
                            "tangent pair leaves the pullback of the lifted projection", {u});
            if (back[static_cast<std::size_t>(j)] >= 0)
                throw Error("pullback-preservation",
                            "comparison onto the pullback is not injective",
                            {back[static_cast<std::size_t>(j)], u});
            back[static_cast<std::size_t>(j)] = u;
        }
        if (t_rho1.domain_size != b.e2.size)
            throw Error("pullback-preservation", "comparison onto the pullback is not surjective",
                        {t_rho1.domain_size, b.e2.size});
        FiniteFunction Ts = tof(Homomorphism{d.sigma, P, d.total});
        std::vector<int> bullet(static_cast<std::size_t>(b.e2.size));
        for (int j = 0; j < b.e2.size; ++j)
            bullet[static_cast<std::size_t>(j)] = Ts(back[static_cast<std::size_t>(j)]);
        b.bullet = FiniteFunction{b.e2.size, tx().t_size(), std::move(bullet)};
        image_ = std::move(b);
        return *image_;
    }

    detail::Witness bundle_structure(std::int64_t& cost) {
        AdditiveBundle b = d.bundle();
        if (auto v = additive_bundle_violation(b, cost)) return v->second;
        return std::nullopt;
    }

    // (lambda, z_X) from the bundle into its image under T.
    detail::Witness image_morphism(std::int64_t& cost) {
        const AdditiveBundle& timg = image(cost);
        if (auto v = additive_bundle_violation(timg, cost)) return v->second;
        if (auto v = bundle_morphism_violation(d.bundle(), timg, d.lambda, z_x(), cost))
            return v->second;
        return std::nullopt;
    }

    // (lambda, zeta) from the bundle into the tangent bundle of E.
    detail::Witness tangent_morphism(std::int64_t& cost) {
        AdditiveBundle dst = tx().bundle();
        if (auto v = bundle_morphism_violation(d.bundle(), dst, d.lambda, d.zeta, cost))
            return v->second;
        return std::nullopt;
    }

    // T(lambda) . lambda = ell_E . lambda.
    detail::Witness lift_coherence(std::int64_t& cost) {
        FiniteFunction Tl = tof(lambda_hom());
        const FiniteFunction& ell = tx().ell;
        for (int e = 0; e < d.total->size; ++e) {
            ++cost;
            if (Tl(d.lambda(e)) != ell(d.lambda(e))) return std::vector<std::int64_t>{e};
        }
        return std::nullopt;
    }

    // T(sigma) . <lambda . rho1, z_E . rho2> against T(q) over z_X is a set
    // pullback: the canonical map from the bundle's pullback is a bijection.
    detail::Witness lift_universality(std::int64_t& cost) {
        const AdditiveBundle& timg = image(cost);
        SetPullback sp = set_pullback(timg.q, z_x());
        std::vector<char> seen(static_cast<std::size_t>(sp.size), 0);
        for (int i = 0; i < d.e2.size; ++i) {
            ++cost;
            int u = d.e2.first[static_cast<std::size_t>(i)];
            int v = d.e2.second[static_cast<std::size_t>(i)];
            int j = timg.e2.pair(d.lambda(u), tx().z(v));
            if (j < 0) return std::vector<std::int64_t>{u, v};
            int k = sp.pair(timg.bullet(j), d.q(u));
            if (k < 0 || seen[static_cast<std::size_t>(k)]) return std::vector<std::int64_t>{u, v};
            seen[static_cast<std::size_t>(k)] = 1;
        }
        if (d.e2.size != sp.size)
            return std::vector<std::int64_t>{d.e2.size, sp.size};
        return std::nullopt;
    }

    // T carries the two- and three-fold pullbacks of q onto the matching
    // pullbacks of T(q).
    detail::Witness pullback_preservation(std::int64_t& cost) {
        const AdditiveBundle& timg = image(cost);
        NFoldPullback p3 = n_fold_pullback(d.q, 3);
        AlgebraPtr P3 = detail::pullback_algebra(q_hom(), p3, d.total->name + "_3");
        FiniteFunction t1 = tof(detail::pullback_projection(P3, p3, 0, d.total));
        FiniteFunction t2 = tof(detail::pullback_projection(P3, p3, 1, d.total));
        FiniteFunction t3 = tof(detail::pullback_projection(P3, p3, 2, d.total));
        NFoldPullback tp3 = n_fold_pullback(timg.q, 3);
        const std::int64_t nt = tx().t_size();
        std::unordered_map<std::int64_t, int> index;
        index.reserve(static_cast<std::size_t>(tp3.size) * 2);
        for (int i = 0; i < tp3.size; ++i)
            index.emplace((static_cast<std::int64_t>(tp3.component(i, 0)) * nt +
                           tp3.component(i, 1)) * nt + tp3.component(i, 2), i);
        std::vector<char> seen(static_cast<std::size_t>(tp3.size), 0);
        for (int u = 0; u < t1.domain_size; ++u) {
            ++cost;
            auto it = index.find((static_cast<std::int64_t>(t1(u)) * nt + t2(u)) * nt + t3(u));
            if (it == index.end() || seen[static_cast<std::size_t>(it->second)])
                return std::vector<std::int64_t>{u};
            seen[static_cast<std::size_t>(it->second)] = 1;
        }
        if (t1.domain_size != tp3.size)
            return std::vector<std::int64_t>{t1.domain_size, tp3.size};
        return std::nullopt;
    }

    // <T(q), p_E> . lambda = <z_X, zeta> . q.
    detail::Witness rosicky_square(std::int64_t& cost) {
        FiniteFunction Tq = tof(q_hom());
        const FiniteFunction& zx = z_x();
        for (int e = 0; e < d.total->size; ++e) {
            ++cost;
            int t = d.lambda(e);
            if (Tq(t) != zx(d.q(e))) return std::vector<std::int64_t>{e};
            if (tx().p(t) != d.zeta(d.q(e))) return std::vector<std::int64_t>{e};
        }
        return std::nullopt;
    }

    // Fibrewise inverses for the bundle sum, found by search and compared to
    // the stored negation when present. Their absence fails only when the
    // assignment carries negatives; otherwise the entry is skipped.
    detail::Witness fibre_negation(std::int64_t& cost) {
        const int ne = d.total->size;
        for (int e = 0; e < ne; ++e) {
            int zero = d.zeta(d.q(e));
            int found = -1;
            for (int f = 0; f < ne; ++f) {
                ++cost;
                if (d.q(f) != d.q(e)) continue;
                int i = d.e2.pair(e, f);
                int j = d.e2.pair(f, e);
                if (i >= 0 && j >= 0 && d.sigma(i) == zero && d.sigma(j) == zero) {
                    found = f;
                    break;
                }
            }
            if (found < 0) {
                if (eng.mode() == ReflectMode::ab) return std::vector<std::int64_t>{e};
                throw Error("not-applicable",
                            "fibres of '" + d.total->name + "' carry no negation in mode " +
                                mode_name(eng.mode()));
            }
            if (d.iota && (*d.iota)(e) != found) return std::vector<std::int64_t>{e, found};
        }
        return std::nullopt;
    }
};

inline AxiomReport verify_diff_bundle(AssignmentEngine& eng, const DifferentialBundle& d,
                                      std::int64_t budget = 1'000'000) {
    return BundleVerifier(eng, d, budget).run();
}

// --- round trip -------------------------------------------------------------------

inline const std::vector<std::string>& roundtrip_axiom_registry() {
    static const std::vector<std::string> ids = {
        "01-kernel-recovery",
        "02-comparison-bijection",
        "03-comparison-bundle-morphism",
        "04-comparison-lift",
    };
    return ids;
}

namespace detail {

// Shared state for the bundle round trip: the built bundle, its kernel fixed
// point, the comparison phi = <q, kernel-factored lift>, and the rebuilt
// bundle over the kernel fibre.
class RoundTrip {
public:
    AssignmentEngine& eng;
    AlgebraPtr X;
    const LAlgebra& alg;

    RoundTrip(AssignmentEngine& engine, AlgebraPtr base, const LAlgebra& fibre)
        : eng(engine), X(std::move(base)), alg(fibre) {}

    AxiomReport run() {
        AxiomReport rep;
        try {
            const DifferentialBundle& b = built();
            const ReflectionResult& RE = eng.reflect_of(b.total);
            rep.t_size = static_cast<std::int64_t>(b.total->size) * RE.reflected->size;
        } catch (const Error& e) {
            if (e.kind() != "budget") throw;
        }
        rep.entries.push_back(run_axiom("01-kernel-recovery",
                                        [&](std::int64_t& c) { return kernel_recovery(c); }));
        rep.entries.push_back(run_axiom("02-comparison-bijection",
                                        [&](std::int64_t& c) { return comparison_bijection(c); }));
        rep.entries.push_back(run_axiom("03-comparison-bundle-morphism",
                                        [&](std::int64_t& c) { return comparison_morphism(c); }));
        rep.entries.push_back(run_axiom("04-comparison-lift",
                                        [&](std::int64_t& c) { return comparison_lift(c); }));
        return rep;
    }

private:
    std::optional<DifferentialBundle> built_;
    std::optional<BundleFibre> fibre_;
    std::optional<FiniteFunction> phi_;
    std::optional<DifferentialBundle> rebuilt_;

    const DifferentialBundle& built() {
        if (!built_) built_ = build_diff_bundle(eng, X, alg);
        return *built_;
    }

    const BundleFibre& fibre() {
        if (!fibre_) fibre_ = diff_bundle_to_l_algebra(eng, built());
        return *fibre_;
    }

    // phi = <q, a . L(k)^{-1} . pi2 . lambda>; the second leg is the
    // kernel-factored lift, defined because pi2 . lambda lands in ker(L(q)).
    const FiniteFunction& phi() {
        if (!phi_) {
            const DifferentialBundle& b = built();
            const BundleFibre& fb = fibre();
            const int ne = b.total->size;
            const int nle = static_cast<int>(fb.l_class_of.size());
            const int nk = fb.kernel.algebra->size;
            FiniteFunction f{ne, b.base->size * nk,
                             std::vector<int>(static_cast<std::size_t>(ne))};
            for (int e = 0; e < ne; ++e) {
                int u = fb.l_class_of[static_cast<std::size_t>(b.lambda(e) % nle)];
                if (u < 0)
                    throw Error("universality",
                                "lift of '" + b.total->name +
                                    "' leaves the kernel of the reflected projection",
                                {e});
                f.values[static_cast<std::size_t>(e)] = b.q(e) * nk + fb.algebra.a(u);
            }
            phi_ = std::move(f);
        }
        return *phi_;
    }

    const DifferentialBundle& rebuilt() {
        if (!rebuilt_) rebuilt_ = build_diff_bundle(eng, X, fibre().algebra);
        return *rebuilt_;
    }

    // The canonical slice a |-> (0, a) identifies the fibre with ker(q) as
    // fixed points.
    Witness kernel_recovery(std::int64_t& cost) {
        const BundleFibre& fb = fibre();
        const int na = alg.carrier->size;
        const int zx = X->jt_zero();
        FiniteFunction kappa{na, fb.kernel.algebra->size,
                             std::vector<int>(static_cast<std::size_t>(na))};
        for (int v = 0; v < na; ++v) {
            ++cost;
            int pos = fb.kernel.position_of[static_cast<std::size_t>(zx * na + v)];
            if (pos < 0) return std::vector<std::int64_t>{v};
            kappa.values[static_cast<std::size_t>(v)] = pos;
        }
        if (!kappa.is_bijective())
            return std::vector<std::int64_t>{na, fb.kernel.algebra->size};
        Homomorphism kH{kappa, alg.carrier, fb.kernel.algebra};
        kH.check();
        FiniteFunction Lk = eng.induced(kH).map;
        for (int w = 0; w < alg.a.domain_size; ++w) {
            ++cost;
            if (kappa(alg.a(w)) != fb.algebra.a(Lk(w))) return std::vector<std::int64_t>{w};
        }
        return std::nullopt;
    }

    Witness comparison_bijection(std::int64_t& cost) {
        const FiniteFunction& f = phi();
        cost += f.domain_size;
        if (f.is_bijective()) return std::nullopt;
        std::vector<int> seen(static_cast<std::size_t>(f.codomain_size), -1);
        for (int e = 0; e < f.domain_size; ++e) {
            int v = f(e);
            if (seen[static_cast<std::size_t>(v)] >= 0)
                return std::vector<std::int64_t>{seen[static_cast<std::size_t>(v)], e};
            seen[static_cast<std::size_t>(v)] = e;
        }
        return std::vector<std::int64_t>{f.domain_size, f.codomain_size};
    }

    Witness comparison_morphism(std::int64_t& cost) {
        if (auto v = bundle_morphism_violation(built().bundle(), rebuilt().bundle(), phi(),
                                               FiniteFunction::identity(X->size), cost))
            return v->second;
        return std::nullopt;
    }

    // T(phi) . lambda = lambda' . phi.
    Witness comparison_lift(std::int64_t& cost) {
        const DifferentialBundle& b = built();
        const DifferentialBundle& b2 = rebuilt();
        Homomorphism phiH{phi(), b.total, b2.total};
        phiH.check();
        FiniteFunction Tphi = tangent_of_function(eng, phiH);
        for (int e = 0; e < b.total->size; ++e) {
            ++cost;
            if (Tphi(b.lambda(e)) != b2.lambda(phi()(e))) return std::vector<std::int64_t>{e};
        }
        return std::nullopt;
    }
};

}  // namespace detail

// Builds the bundle over X with the given fixed-point fibre, recovers the
// fibre through the kernel, and checks that the comparison is a bijective
// bundle morphism preserving the lift.
inline AxiomReport roundtrip_check(AssignmentEngine& eng, const AlgebraPtr& X,
                                   const LAlgebra& alg) {
    return detail::RoundTrip(eng, X, alg).run();
}

// --- serialization ----------------------------------------------------------------

// The total-space algebra extended with the embedded base and the structural
// tables; sigma is indexed by the lexicographic pairs of the set pullback of
// q with itself.
inline json bundle_json(const DifferentialBundle& d) {
    json doc = algebra_json(*d.total);
    doc["base"] = algebra_json(*d.base);
    doc["q"] = d.q.values;
    doc["sigma"] = d.sigma.values;
    doc["zeta"] = d.zeta.values;
    doc["lambda"] = d.lambda.values;
    if (d.iota) doc["iota"] = d.iota->values;
    return doc;
}

inline std::string serialize_bundle(const DifferentialBundle& d, bool pretty = false) {
    json doc = bundle_json(d);
    return pretty ? doc.dump(2) + "\n" : doc.dump() + "\n";
}

namespace detail {

inline FiniteFunction parse_bundle_table(const json& doc, const std::string& key, int domain,
                                         std::int64_t codomain) {
    if (!doc.contains(key) || !doc[key].is_array() ||
        doc[key].size() != static_cast<std::size_t>(domain))
        throw Error("parse", key + ": expected array of length " + std::to_string(domain));
    FiniteFunction f{domain, static_cast<int>(codomain),
                     std::vector<int>(static_cast<std::size_t>(domain))};
    for (int i = 0; i < domain; ++i) {
        const json& v = doc[key][static_cast<std::size_t>(i)];
        if (!v.is_number_integer() || v.get<std::int64_t>() < 0 ||
            v.get<std::int64_t>() >= codomain)
            throw Error("parse", key + "[" + std::to_string(i) + "]: expected integer below " +
                                     std::to_string(codomain));
        f.values[static_cast<std::size_t>(i)] = v.get<int>();
    }
    return f;
}

}  // namespace detail

// Needs the engine to size the lift codomain T(E) = E x L(E).
inline DifferentialBundle parse_bundle(AssignmentEngine& eng, const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const std::exception& e) {
        throw Error("parse", std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("base") || !doc["base"].is_object())
        throw Error("parse", "bundle must be an object with an embedded 'base' algebra");
    DifferentialBundle d;
    d.total = parse_algebra(text);
    d.base = parse_algebra(doc["base"].dump());
    const int ne = d.total->size, nx = d.base->size;
    d.q = detail::parse_bundle_table(doc, "q", ne, nx);
    d.zeta = detail::parse_bundle_table(doc, "zeta", nx, ne);
    d.e2 = set_pullback(d.q, d.q);
    d.sigma = detail::parse_bundle_table(doc, "sigma", d.e2.size, ne);
    const int nle = eng.reflect_of(d.total).reflected->size;
    d.lambda = detail::parse_bundle_table(doc, "lambda", ne,
                                          static_cast<std::int64_t>(ne) * nle);
    if (doc.contains("iota")) d.iota = detail::parse_bundle_table(doc, "iota", ne, ne);
    return d;
}

}  // namespace tanalg
