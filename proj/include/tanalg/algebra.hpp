#pragma once

// Finite algebras over explicit signatures: carriers are {0..n-1}, every
// operation is a total flat table, and all structural notions (homomorphisms,
// products, terminal objects, quasi-injections) reduce to table arithmetic.
//
// Encoding conventions used across the whole library:
//   - a pair (x, y) with y ranging over a carrier of size m has index x*m + y;
//   - iterated products associate to the left, so ((x, y), z) is row-major
//     over the flattened triple;
//   - these conventions make every diagram check a comparison of int tables.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tanalg {

// Diagnostic failure: `kind` is a stable machine-readable tag, `witness`
// holds the offending elements when a concrete counterexample exists.
class Error : public std::runtime_error {
public:
    Error(std::string kind, std::string message, std::vector<std::int64_t> witness = {})
        : std::runtime_error(kind + ": " + message),
          kind_(std::move(kind)),
          witness_(std::move(witness)) {}

    const std::string& kind() const { return kind_; }
    const std::vector<std::int64_t>& witness() const { return witness_; }

private:
    std::string kind_;
    std::vector<std::int64_t> witness_;
};

struct Operation {
    std::string name;
    int arity = 0;
};

struct JtDesignation {
    std::string zero_name;  // arity-0 operation interpreting the unit
    std::string plus_name;  // arity-2 operation with that unit two-sided
};

struct Signature {
    std::vector<Operation> operations;
    std::optional<JtDesignation> jt;

    int index_of(const std::string& name) const {
        for (std::size_t i = 0; i < operations.size(); ++i)
            if (operations[i].name == name) return static_cast<int>(i);
        return -1;
    }

    int max_arity() const {
        int m = 0;
        for (const auto& op : operations) m = std::max(m, op.arity);
        return m;
    }

    bool same_as(const Signature& other) const {
        if (operations.size() != other.operations.size()) return false;
        for (std::size_t i = 0; i < operations.size(); ++i)
            if (operations[i].name != other.operations[i].name ||
                operations[i].arity != other.operations[i].arity)
                return false;
        return true;
    }

    // Names pairwise distinct; jt designation, when present, names an existing
    // constant and an existing binary operation.
    void validate() const {
        for (std::size_t i = 0; i < operations.size(); ++i)
            for (std::size_t j = i + 1; j < operations.size(); ++j)
                if (operations[i].name == operations[j].name)
                    throw Error("signature-invalid",
                                "duplicate operation name '" + operations[i].name + "'");
        if (jt) {
            int z = index_of(jt->zero_name);
            int p = index_of(jt->plus_name);
            if (z < 0 || operations[z].arity != 0)
                throw Error("signature-invalid",
                            "designated zero '" + jt->zero_name + "' is not an arity-0 operation");
            if (p < 0 || operations[p].arity != 2)
                throw Error("signature-invalid",
                            "designated plus '" + jt->plus_name + "' is not an arity-2 operation");
        }
    }
};

// Number of table entries for one operation: size^arity (arity 0 -> 1 entry).
inline std::int64_t table_entries(std::int64_t size, int arity) {
    std::int64_t e = 1;
    for (int i = 0; i < arity; ++i) {
        e *= size;
        if (e > (std::int64_t{1} << 62) / (size > 0 ? size : 1)) return e;  // saturate, caller caps
    }
    return e;
}

struct FiniteAlgebra;
using AlgebraPtr = std::shared_ptr<const FiniteAlgebra>;

struct FiniteAlgebra {
    std::string name;
    Signature signature;
    int size = 0;
    // tables[op]: flat row-major table of length size^arity(op).
    std::vector<std::vector<int>> tables;
    // Interpretation of the designated zero constant, when jt is present.
    std::optional<int> zero_element;

    int apply(int op, std::span<const int> args) const {
        const auto& t = tables[static_cast<std::size_t>(op)];
        std::int64_t idx = 0;
        for (int a : args) idx = idx * size + a;
        return t[static_cast<std::size_t>(idx)];
    }

    int constant(int op) const { return tables[static_cast<std::size_t>(op)][0]; }

    int apply1(int op, int a) const { return tables[static_cast<std::size_t>(op)][static_cast<std::size_t>(a)]; }

    int apply2(int op, int a, int b) const {
        return tables[static_cast<std::size_t>(op)]
                     [static_cast<std::size_t>(static_cast<std::int64_t>(a) * size + b)];
    }

    int jt_zero() const {
        if (!zero_element) throw Error("not-pointed", "algebra '" + name + "' has no jt designation");
        return *zero_element;
    }

    int jt_plus_op() const {
        if (!signature.jt) throw Error("not-pointed", "algebra '" + name + "' has no jt designation");
        return signature.index_of(signature.jt->plus_name);
    }

    int jt_plus(int a, int b) const { return apply2(jt_plus_op(), a, b); }

    // Totality (range containment) and, when pointed, the two-sided unit law
    // plus(x, 0) = x = plus(0, x). Reports the operation and flat index of the
    // first violation.
    void validate(bool require_jt_unit = true) const {
        signature.validate();
        if (size <= 0) throw Error("algebra-invalid", "carrier must be nonempty");
        if (tables.size() != signature.operations.size())
            throw Error("algebra-invalid", "table count does not match signature");
        for (std::size_t op = 0; op < tables.size(); ++op) {
            std::int64_t want = table_entries(size, signature.operations[op].arity);
            if (static_cast<std::int64_t>(tables[op].size()) != want)
                throw Error("algebra-invalid",
                            "operation '" + signature.operations[op].name + "' table has " +
                                std::to_string(tables[op].size()) + " entries, expected " +
                                std::to_string(want));
            for (std::size_t i = 0; i < tables[op].size(); ++i)
                if (tables[op][i] < 0 || tables[op][i] >= size)
                    throw Error("table-out-of-range",
                                "operation '" + signature.operations[op].name + "' entry at flat index " +
                                    std::to_string(i) + " is " + std::to_string(tables[op][i]) +
                                    ", carrier size " + std::to_string(size),
                                {static_cast<std::int64_t>(i), tables[op][i]});
        }
        if (signature.jt) {
            int z = constant(signature.index_of(signature.jt->zero_name));
            if (zero_element && *zero_element != z)
                throw Error("algebra-invalid", "cached zero_element disagrees with the zero table");
            if (require_jt_unit) {
                int p = signature.index_of(signature.jt->plus_name);
                for (int x = 0; x < size; ++x) {
                    if (apply2(p, x, z) != x)
                        throw Error("jt-unit-violation",
                                    "plus(" + std::to_string(x) + ", 0) != " + std::to_string(x) +
                                        " in '" + name + "'",
                                    {x, z, apply2(p, x, z)});
                    if (apply2(p, z, x) != x)
                        throw Error("jt-unit-violation",
                                    "plus(0, " + std::to_string(x) + ") != " + std::to_string(x) +
                                        " in '" + name + "'",
                                    {z, x, apply2(p, z, x)});
                }
            }
        }
    }
};

inline AlgebraPtr make_algebra(FiniteAlgebra a, bool require_jt_unit = true) {
    if (a.signature.jt && !a.zero_element)
        a.zero_element = a.tables[static_cast<std::size_t>(
            a.signature.index_of(a.signature.jt->zero_name))][0];
    a.validate(require_jt_unit);
    return std::make_shared<const FiniteAlgebra>(std::move(a));
}

// Total function between carriers, as a value table.
struct FiniteFunction {
    int domain_size = 0;
    int codomain_size = 0;
    std::vector<int> values;

    int operator()(int x) const { return values[static_cast<std::size_t>(x)]; }

    static FiniteFunction identity(int n) {
        FiniteFunction f{n, n, std::vector<int>(static_cast<std::size_t>(n))};
        for (int i = 0; i < n; ++i) f.values[static_cast<std::size_t>(i)] = i;
        return f;
    }

    static FiniteFunction constant(int dom, int codom, int value) {
        return FiniteFunction{dom, codom, std::vector<int>(static_cast<std::size_t>(dom), value)};
    }

    bool is_bijective() const {
        if (domain_size != codomain_size) return false;
        std::vector<char> seen(static_cast<std::size_t>(codomain_size), 0);
        for (int v : values) {
            if (seen[static_cast<std::size_t>(v)]) return false;
            seen[static_cast<std::size_t>(v)] = 1;
        }
        return true;
    }

    FiniteFunction inverse() const {
        if (!is_bijective()) throw Error("not-bijective", "function has no inverse");
        FiniteFunction inv{codomain_size, domain_size,
                           std::vector<int>(static_cast<std::size_t>(codomain_size))};
        for (int x = 0; x < domain_size; ++x) inv.values[static_cast<std::size_t>(values[static_cast<std::size_t>(x)])] = x;
        return inv;
    }

    friend bool operator==(const FiniteFunction& a, const FiniteFunction& b) {
        return a.domain_size == b.domain_size && a.codomain_size == b.codomain_size &&
               a.values == b.values;
    }
};

// g after f.
inline FiniteFunction compose(const FiniteFunction& g, const FiniteFunction& f) {
    if (f.codomain_size != g.domain_size)
        throw Error("compose-mismatch", "codomain " + std::to_string(f.codomain_size) +
                                             " != domain " + std::to_string(g.domain_size));
    FiniteFunction h{f.domain_size, g.codomain_size,
                     std::vector<int>(static_cast<std::size_t>(f.domain_size))};
    for (int x = 0; x < f.domain_size; ++x) h.values[static_cast<std::size_t>(x)] = g(f(x));
    return h;
}

struct Homomorphism {
    FiniteFunction map;
    AlgebraPtr source;
    AlgebraPtr target;

    int operator()(int x) const { return map(x); }

    // Exhaustive check over every operation and argument tuple.
    // Returns the first violation as (op index, flat tuple index) or nullopt.
    std::optional<std::pair<int, std::int64_t>> first_violation() const {
        const auto& sig = source->signature;
        std::vector<int> args;
        for (std::size_t op = 0; op < sig.operations.size(); ++op) {
            int k = sig.operations[op].arity;
            std::int64_t tuples = table_entries(source->size, k);
            args.assign(static_cast<std::size_t>(k), 0);
            std::vector<int> mapped(static_cast<std::size_t>(k));
            for (std::int64_t t = 0; t < tuples; ++t) {
                std::int64_t rest = t;
                for (int i = k - 1; i >= 0; --i) {
                    args[static_cast<std::size_t>(i)] = static_cast<int>(rest % source->size);
                    rest /= source->size;
                }
                for (int i = 0; i < k; ++i) mapped[static_cast<std::size_t>(i)] = map(args[static_cast<std::size_t>(i)]);
                if (map(source->apply(static_cast<int>(op), args)) !=
                    target->apply(static_cast<int>(op), mapped))
                    return std::make_pair(static_cast<int>(op), t);
            }
        }
        return std::nullopt;
    }

    void check() const {
        if (!source->signature.same_as(target->signature))
            throw Error("signature-mismatch", "homomorphism endpoints disagree on signature");
        if (map.domain_size != source->size || map.codomain_size != target->size)
            throw Error("hom-invalid", "function shape does not match the algebras");
        if (auto v = first_violation()) {
            const auto& op = source->signature.operations[static_cast<std::size_t>(v->first)];
            throw Error("hom-check",
                        "operation '" + op.name + "' not preserved at tuple index " +
                            std::to_string(v->second),
                        {v->first, v->second});
        }
    }
};

inline Homomorphism compose(const Homomorphism& g, const Homomorphism& f) {
    return Homomorphism{compose(g.map, f.map), f.source, g.target};
}

// Row-major product of algebras with attached projections.
struct ProductWitness {
    std::vector<AlgebraPtr> factors;
    AlgebraPtr product;
    std::vector<Homomorphism> projections;

    int pair_index(int x, int y) const {
        return static_cast<int>(static_cast<std::int64_t>(x) * factors[1]->size + y);
    }
    int first(int e) const { return e / factors[1]->size; }
    int second(int e) const { return e % factors[1]->size; }
};

namespace detail {
// Hard cap on any single materialized table, protects against accidental
// blowups when iterating tangent constructions; hit -> Error{"budget"}.
inline constexpr std::int64_t kMaxTableEntries = 200'000'000;

inline void check_table_budget(std::int64_t size, int max_arity, const std::string& what) {
    std::int64_t entries = table_entries(size, max_arity);
    if (entries > kMaxTableEntries)
        throw Error("budget", what + " would need a table of " + std::to_string(entries) +
                                  " entries (cap " + std::to_string(kMaxTableEntries) + ")",
                    {entries});
}
}  // namespace detail

inline ProductWitness product(const AlgebraPtr& X, const AlgebraPtr& Y) {
    if (!X->signature.same_as(Y->signature))
        throw Error("signature-mismatch", "product factors disagree on signature");
    FiniteAlgebra P;
    P.name = "(" + X->name + "*" + Y->name + ")";
    P.signature = X->signature;
    P.size = X->size * Y->size;
    detail::check_table_budget(P.size, P.signature.max_arity(), "product " + P.name);
    const int m = Y->size;
    P.tables.resize(P.signature.operations.size());
    std::vector<int> xs, ys;
    for (std::size_t op = 0; op < P.signature.operations.size(); ++op) {
        int k = P.signature.operations[op].arity;
        std::int64_t tuples = table_entries(P.size, k);
        P.tables[op].resize(static_cast<std::size_t>(tuples));
        xs.assign(static_cast<std::size_t>(k), 0);
        ys.assign(static_cast<std::size_t>(k), 0);
        for (std::int64_t t = 0; t < tuples; ++t) {
            std::int64_t rest = t;
            for (int i = k - 1; i >= 0; --i) {
                int e = static_cast<int>(rest % P.size);
                rest /= P.size;
                xs[static_cast<std::size_t>(i)] = e / m;
                ys[static_cast<std::size_t>(i)] = e % m;
            }
            P.tables[op][static_cast<std::size_t>(t)] =
                X->apply(static_cast<int>(op), xs) * m + Y->apply(static_cast<int>(op), ys);
        }
    }
    if (P.signature.jt)
        P.zero_element = P.tables[static_cast<std::size_t>(
            P.signature.index_of(P.signature.jt->zero_name))][0];
    AlgebraPtr Pp = std::make_shared<const FiniteAlgebra>(std::move(P));

    ProductWitness w;
    w.factors = {X, Y};
    w.product = Pp;
    FiniteFunction p1{Pp->size, X->size, std::vector<int>(static_cast<std::size_t>(Pp->size))};
    FiniteFunction p2{Pp->size, Y->size, std::vector<int>(static_cast<std::size_t>(Pp->size))};
    for (int e = 0; e < Pp->size; ++e) {
        p1.values[static_cast<std::size_t>(e)] = e / m;
        p2.values[static_cast<std::size_t>(e)] = e % m;
    }
    w.projections.push_back(Homomorphism{std::move(p1), Pp, X});
    w.projections.push_back(Homomorphism{std::move(p2), Pp, Y});
    return w;
}

inline AlgebraPtr terminal(const Signature& sig) {
    FiniteAlgebra T;
    T.name = "*";
    T.signature = sig;
    T.size = 1;
    T.tables.resize(sig.operations.size());
    for (std::size_t op = 0; op < sig.operations.size(); ++op)
        T.tables[op].assign(1, 0);
    if (sig.jt) T.zero_element = 0;
    return std::make_shared<const FiniteAlgebra>(std::move(T));
}

inline Homomorphism terminal_map(const AlgebraPtr& X, const AlgebraPtr& star) {
    return Homomorphism{FiniteFunction::constant(X->size, 1, 0), X, star};
}

// The two maps <1, 0>, <0, 1> : X -> X*X of a pointed algebra. Fails with the
// offending operation when some operation does not fix the zero constant.
struct QuasiInjections {
    ProductWitness square;  // X * X
    Homomorphism i1, i2;
};

inline QuasiInjections quasi_injections(const AlgebraPtr& X) {
    int z = X->jt_zero();
    ProductWitness sq = product(X, X);
    FiniteFunction f1{X->size, sq.product->size, std::vector<int>(static_cast<std::size_t>(X->size))};
    FiniteFunction f2 = f1;
    for (int x = 0; x < X->size; ++x) {
        f1.values[static_cast<std::size_t>(x)] = sq.pair_index(x, z);
        f2.values[static_cast<std::size_t>(x)] = sq.pair_index(z, x);
    }
    Homomorphism i1{std::move(f1), X, sq.product};
    Homomorphism i2{std::move(f2), X, sq.product};
    for (const Homomorphism* h : {&i1, &i2}) {
        if (auto v = h->first_violation()) {
            const auto& op = X->signature.operations[static_cast<std::size_t>(v->first)];
            throw Error("quasi-injection",
                        "operation '" + op.name +
                            "' does not fix the zero constant (tuple index " +
                            std::to_string(v->second) + ")",
                        {v->first, v->second});
        }
    }
    return QuasiInjections{std::move(sq), std::move(i1), std::move(i2)};
}

inline Homomorphism diagonal(const AlgebraPtr& X, const ProductWitness& square) {
    FiniteFunction d{X->size, square.product->size, std::vector<int>(static_cast<std::size_t>(X->size))};
    for (int x = 0; x < X->size; ++x) d.values[static_cast<std::size_t>(x)] = square.pair_index(x, x);
    return Homomorphism{std::move(d), X, square.product};
}

// --- product combinators on encoded carriers -------------------------------
//
// All of these are pure index arithmetic; sizes are the only inputs besides
// the component functions. The associativity combinator is the identity under
// the flat row-major encoding and is kept only so that every canonical
// isomorphism has a named home.

inline FiniteFunction pairing(const FiniteFunction& f, const FiniteFunction& g) {
    if (f.domain_size != g.domain_size)
        throw Error("compose-mismatch", "pairing components disagree on domain");
    FiniteFunction h{f.domain_size, f.codomain_size * g.codomain_size,
                     std::vector<int>(static_cast<std::size_t>(f.domain_size))};
    for (int x = 0; x < f.domain_size; ++x)
        h.values[static_cast<std::size_t>(x)] = f(x) * g.codomain_size + g(x);
    return h;
}

inline FiniteFunction product_map(const FiniteFunction& f, const FiniteFunction& g) {
    FiniteFunction h{f.domain_size * g.domain_size, f.codomain_size * g.codomain_size,
                     std::vector<int>(static_cast<std::size_t>(f.domain_size * g.domain_size))};
    for (int x = 0; x < f.domain_size; ++x)
        for (int y = 0; y < g.domain_size; ++y)
            h.values[static_cast<std::size_t>(static_cast<std::int64_t>(x) * g.domain_size + y)] =
                f(x) * g.codomain_size + g(y);
    return h;
}

// tau_{A,B,C,D} : (A*B)*(C*D) -> (A*C)*(B*D), swaps the middle factors.
inline FiniteFunction interchange_tau(int a, int b, int c, int d) {
    int n = a * b * c * d;
    FiniteFunction t{n, n, std::vector<int>(static_cast<std::size_t>(n))};
    for (int xa = 0; xa < a; ++xa)
        for (int xb = 0; xb < b; ++xb)
            for (int xc = 0; xc < c; ++xc)
                for (int xd = 0; xd < d; ++xd) {
                    int src = ((xa * b + xb) * c + xc) * d + xd;
                    int dst = ((xa * c + xc) * b + xb) * d + xd;
                    t.values[static_cast<std::size_t>(src)] = dst;
                }
    return t;
}

// sigma_{A,B} : A*B -> B*A.
inline FiniteFunction symmetry_sigma(int a, int b) {
    int n = a * b;
    FiniteFunction s{n, n, std::vector<int>(static_cast<std::size_t>(n))};
    for (int x = 0; x < a; ++x)
        for (int y = 0; y < b; ++y)
            s.values[static_cast<std::size_t>(x * b + y)] = y * a + x;
    return s;
}

// alpha_{A,B,C} : (A*B)*C -> A*(B*C); the flat encoding makes this the
// identity, it exists so the canonical isomorphism family is complete.
inline FiniteFunction assoc_alpha(int a, int b, int c) {
    return FiniteFunction::identity(a * b * c);
}

// Mediating map of a cone (f, g) into a binary product; the universal
// property (uniqueness) is assertable by scanning candidates on tiny carriers.
inline FiniteFunction mediating(const FiniteFunction& f, const FiniteFunction& g) {
    return pairing(f, g);
}

}  // namespace tanalg
