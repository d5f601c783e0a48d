#pragma once

// Built-in generators for the test varieties (groups, monoids, pointed
// magmas, loops, rings) and JSON ingestion/serialization of the algebra
// format:
//
//   {"name": str, "size": n,
//    "operations": {op: {"arity": k, "table": nested-array}},
//    "jt": {"zero": opName, "plus": opName}}
//
// Tables are nested arrays in argument order; constants are a bare integer.
// Generators are deterministic (random families are seed-deterministic).

#include <array>
#include <cstdint>
#include <numeric>
#include <random>

#include <json.hpp>

#include "tanalg/algebra.hpp"

namespace tanalg {

using json = nlohmann::ordered_json;

// --- signatures of the example varieties ------------------------------------

inline Signature group_signature() {
    Signature s;
    s.operations = {{"e", 0}, {"mul", 2}, {"inv", 1}};
    s.jt = JtDesignation{"e", "mul"};
    return s;
}

inline Signature monoid_signature() {
    Signature s;
    s.operations = {{"e", 0}, {"mul", 2}};
    s.jt = JtDesignation{"e", "mul"};
    return s;
}

inline Signature pointed_magma_signature() {
    Signature s;
    s.operations = {{"e", 0}, {"plus", 2}};
    s.jt = JtDesignation{"e", "plus"};
    return s;
}

inline Signature loop_signature() {
    Signature s;
    s.operations = {{"e", 0}, {"mul", 2}, {"ldiv", 2}, {"rdiv", 2}};
    s.jt = JtDesignation{"e", "mul"};
    return s;
}

inline Signature ring_signature() {
    Signature s;
    s.operations = {{"zero", 0}, {"plus", 2}, {"neg", 1}, {"mul", 2}};
    s.jt = JtDesignation{"zero", "plus"};
    return s;
}

// --- generators --------------------------------------------------------------

struct GeneratorSpec {
    std::string family;
    int n = 0;                            // order parameter where applicable
    std::uint64_t seed = 0;               // random_jt_magma, nonassoc_loop5
    std::vector<int> orders;              // ring_trivial_mul: cyclic factor orders
    std::vector<GeneratorSpec> factors;   // direct_product
};

namespace detail {

inline AlgebraPtr finish(FiniteAlgebra a) { return make_algebra(std::move(a)); }

inline AlgebraPtr cyclic_group(int n) {
    FiniteAlgebra a;
    a.name = "z" + std::to_string(n);
    a.signature = group_signature();
    a.size = n;
    a.tables.resize(3);
    a.tables[0] = {0};
    a.tables[1].resize(static_cast<std::size_t>(n) * n);
    a.tables[2].resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        a.tables[2][static_cast<std::size_t>(i)] = (n - i) % n;
        for (int j = 0; j < n; ++j)
            a.tables[1][static_cast<std::size_t>(i) * n + j] = (i + j) % n;
    }
    return finish(std::move(a));
}

// Elements r^i s^k encoded i + n*k; s r^j = r^{-j} s.
inline AlgebraPtr dihedral(int n) {
    FiniteAlgebra a;
    a.name = "d" + std::to_string(n);
    a.signature = group_signature();
    a.size = 2 * n;
    a.tables.resize(3);
    a.tables[0] = {0};
    a.tables[1].resize(static_cast<std::size_t>(a.size) * a.size);
    a.tables[2].resize(static_cast<std::size_t>(a.size));
    auto enc = [n](int i, int k) { return ((i % n + n) % n) + n * k; };
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < 2; ++k) {
            int x = enc(i, k);
            a.tables[2][static_cast<std::size_t>(x)] = k == 0 ? enc(-i, 0) : x;
            for (int j = 0; j < n; ++j)
                for (int l = 0; l < 2; ++l) {
                    int y = enc(j, l);
                    int prod = enc(k == 0 ? i + j : i - j, k ^ l);
                    a.tables[1][static_cast<std::size_t>(x) * a.size + y] = prod;
                }
        }
    return finish(std::move(a));
}

inline AlgebraPtr symmetric_group(int n) {
    if (n > 4) throw Error("unsupported-spec", "symmetric group capped at degree 4");
    std::vector<std::vector<int>> perms;
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    int sz = static_cast<int>(perms.size());
    auto rank = [&](const std::vector<int>& q) {
        return static_cast<int>(std::lower_bound(perms.begin(), perms.end(), q) - perms.begin());
    };
    FiniteAlgebra a;
    a.name = "s" + std::to_string(n);
    a.signature = group_signature();
    a.size = sz;
    a.tables.resize(3);
    a.tables[0] = {0};
    a.tables[1].resize(static_cast<std::size_t>(sz) * sz);
    a.tables[2].resize(static_cast<std::size_t>(sz));
    for (int i = 0; i < sz; ++i) {
        std::vector<int> inv(static_cast<std::size_t>(n));
        for (int x = 0; x < n; ++x) inv[static_cast<std::size_t>(perms[static_cast<std::size_t>(i)][static_cast<std::size_t>(x)])] = x;
        a.tables[2][static_cast<std::size_t>(i)] = rank(inv);
        for (int j = 0; j < sz; ++j) {
            std::vector<int> comp(static_cast<std::size_t>(n));
            for (int x = 0; x < n; ++x)
                comp[static_cast<std::size_t>(x)] =
                    perms[static_cast<std::size_t>(i)][static_cast<std::size_t>(
                        perms[static_cast<std::size_t>(j)][static_cast<std::size_t>(x)])];
            a.tables[1][static_cast<std::size_t>(i) * sz + j] = rank(comp);
        }
    }
    return finish(std::move(a));
}

// Elements (u, s): unit u in {1, i, j, k}, sign s; encoded u*2 + s.
inline AlgebraPtr quaternion8() {
    auto mul_units = [](int u, int v, int& sign) {
        // 0=1, 1=i, 2=j, 3=k; returns unit of product, accumulates sign.
        if (u == 0) return v;
        if (v == 0) return u;
        if (u == v) {
            sign ^= 1;  // i^2 = j^2 = k^2 = -1
            return 0;
        }
        // cyclic rule i*j=k, j*k=i, k*i=j; reversed order flips sign
        static constexpr int prod[4][4] = {{0, 0, 0, 0}, {0, 0, 3, 2}, {0, 3, 0, 1}, {0, 2, 1, 0}};
        static constexpr int neg[4][4] = {{0, 0, 0, 0}, {0, 0, 0, 1}, {0, 1, 0, 0}, {0, 0, 1, 0}};
        sign ^= neg[u][v];
        return prod[u][v];
    };
    FiniteAlgebra a;
    a.name = "q8";
    a.signature = group_signature();
    a.size = 8;
    a.tables.resize(3);
    a.tables[0] = {0};
    a.tables[1].resize(64);
    a.tables[2].resize(8);
    for (int u = 0; u < 4; ++u)
        for (int s = 0; s < 2; ++s) {
            int x = u * 2 + s;
            // inverse: 1,-1 self-inverse-signed; i^-1 = -i etc.
            a.tables[2][static_cast<std::size_t>(x)] = u == 0 ? x : u * 2 + (s ^ 1);
            for (int v = 0; v < 4; ++v)
                for (int t = 0; t < 2; ++t) {
                    int y = v * 2 + t;
                    int sign = s ^ t;
                    int w = mul_units(u, v, sign);
                    a.tables[1][static_cast<std::size_t>(x) * 8 + y] = w * 2 + sign;
                }
        }
    return finish(std::move(a));
}

// Identity element 0 adjoined to the left-zero semigroup on {1..k}.
inline AlgebraPtr leftzero_monoid_plus_identity(int k) {
    FiniteAlgebra a;
    a.name = "leftzero" + std::to_string(k + 1);
    a.signature = monoid_signature();
    a.size = k + 1;
    a.tables.resize(2);
    a.tables[0] = {0};
    a.tables[1].resize(static_cast<std::size_t>(a.size) * a.size);
    for (int x = 0; x < a.size; ++x)
        for (int y = 0; y < a.size; ++y)
            a.tables[1][static_cast<std::size_t>(x) * a.size + y] = x == 0 ? y : x;
    return finish(std::move(a));
}

// Pointed magma with a two-sided unit 0 and otherwise pseudo-random entries.
// mt19937 output is reduced by modulo so tables are identical across
// platforms (distribution objects are not portable).
inline AlgebraPtr random_jt_magma(std::uint64_t seed, int size) {
    std::mt19937 rng(static_cast<std::uint32_t>(seed));
    FiniteAlgebra a;
    a.name = "jtmagma" + std::to_string(size) + "s" + std::to_string(seed);
    a.signature = pointed_magma_signature();
    a.size = size;
    a.tables.resize(2);
    a.tables[0] = {0};
    a.tables[1].resize(static_cast<std::size_t>(size) * size);
    for (int x = 0; x < size; ++x)
        for (int y = 0; y < size; ++y) {
            int v;
            if (x == 0) v = y;
            else if (y == 0) v = x;
            else v = static_cast<int>(rng() % static_cast<std::uint32_t>(size));
            a.tables[1][static_cast<std::size_t>(x) * size + y] = v;
        }
    return finish(std::move(a));
}

// Backtracking completion of the 4x4 subsquare of a normalized order-5 Latin
// square (row 0 and column 0 equal the identity). Cells are filled row-major;
// candidate values are tried in an order derived from the seed. Returns the
// first complete square whose multiplication is nonassociative.
inline AlgebraPtr nonassoc_loop5(std::uint64_t seed) {
    constexpr int n = 5;
    std::array<std::array<int, n>, n> m{};
    for (int i = 0; i < n; ++i) {
        m[static_cast<std::size_t>(i)][0] = i;
        m[0][static_cast<std::size_t>(i)] = i;
    }
    std::array<int, n> try_order{};
    std::iota(try_order.begin(), try_order.end(), 0);
    if (seed != 0) {
        std::mt19937 rng(static_cast<std::uint32_t>(seed));
        for (int i = n - 1; i > 0; --i)
            std::swap(try_order[static_cast<std::size_t>(i)],
                      try_order[static_cast<std::size_t>(rng() % static_cast<std::uint32_t>(i + 1))]);
    }
    auto nonassociative = [&]() {
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                for (int z = 0; z < n; ++z)
                    if (m[static_cast<std::size_t>(m[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)])][static_cast<std::size_t>(z)] !=
                        m[static_cast<std::size_t>(x)][static_cast<std::size_t>(m[static_cast<std::size_t>(y)][static_cast<std::size_t>(z)])])
                        return true;
        return false;
    };
    std::optional<std::array<std::array<int, n>, n>> found;
    auto fill = [&](auto&& self, int cell) -> void {
        if (found) return;
        if (cell == 16) {
            if (nonassociative()) found = m;
            return;
        }
        int r = 1 + cell / 4, c = 1 + cell % 4;
        for (int v : try_order) {
            bool ok = true;
            for (int cc = 0; cc < c && ok; ++cc)
                if (m[static_cast<std::size_t>(r)][static_cast<std::size_t>(cc)] == v) ok = false;
            for (int rr = 0; rr < r && ok; ++rr)
                if (m[static_cast<std::size_t>(rr)][static_cast<std::size_t>(c)] == v) ok = false;
            if (!ok) continue;
            m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = v;
            self(self, cell + 1);
            if (found) return;
        }
        m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = -1;
    };
    fill(fill, 0);
    if (!found) throw Error("unsatisfiable-spec", "no nonassociative loop of order 5 found");
    const auto& t = *found;

    FiniteAlgebra a;
    a.name = "loop5s" + std::to_string(seed);
    a.signature = loop_signature();
    a.size = n;
    a.tables.resize(4);
    a.tables[0] = {0};
    a.tables[1].resize(n * n);
    a.tables[2].resize(n * n);
    a.tables[3].resize(n * n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            a.tables[1][static_cast<std::size_t>(x) * n + y] = t[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)];
    // ldiv(a,b): unique c with a*c = b; rdiv(a,b): unique c with c*b = a.
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            for (int c = 0; c < n; ++c)
                if (t[static_cast<std::size_t>(x)][static_cast<std::size_t>(c)] == y)
                    a.tables[2][static_cast<std::size_t>(x) * n + y] = c;
            for (int c = 0; c < n; ++c)
                if (t[static_cast<std::size_t>(c)][static_cast<std::size_t>(y)] == x)
                    a.tables[3][static_cast<std::size_t>(x) * n + y] = c;
        }
    return finish(std::move(a));
}

inline AlgebraPtr ring_zn_modmul(int n) {
    FiniteAlgebra a;
    a.name = "ringz" + std::to_string(n);
    a.signature = ring_signature();
    a.size = n;
    a.tables.resize(4);
    a.tables[0] = {0};
    a.tables[1].resize(static_cast<std::size_t>(n) * n);
    a.tables[2].resize(static_cast<std::size_t>(n));
    a.tables[3].resize(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        a.tables[2][static_cast<std::size_t>(i)] = (n - i) % n;
        for (int j = 0; j < n; ++j) {
            a.tables[1][static_cast<std::size_t>(i) * n + j] = (i + j) % n;
            a.tables[3][static_cast<std::size_t>(i) * n + j] = (i * j) % n;
        }
    }
    return finish(std::move(a));
}

// Additive group = product of cyclic groups of the given orders; xy = 0.
inline AlgebraPtr ring_trivial_mul(const std::vector<int>& orders) {
    int n = 1;
    for (int o : orders) n *= o;
    FiniteAlgebra a;
    a.name = "ringtriv";
    for (int o : orders) a.name += std::to_string(o);
    a.signature = ring_signature();
    a.size = n;
    a.tables.resize(4);
    a.tables[0] = {0};
    a.tables[1].resize(static_cast<std::size_t>(n) * n);
    a.tables[2].resize(static_cast<std::size_t>(n));
    a.tables[3].assign(static_cast<std::size_t>(n) * n, 0);
    auto decode = [&](int e) {
        std::vector<int> d(orders.size());
        for (std::size_t i = orders.size(); i-- > 0;) {
            d[i] = e % orders[i];
            e /= orders[i];
        }
        return d;
    };
    auto encode = [&](const std::vector<int>& d) {
        int e = 0;
        for (std::size_t i = 0; i < orders.size(); ++i) e = e * orders[i] + d[i];
        return e;
    };
    for (int i = 0; i < n; ++i) {
        auto di = decode(i);
        auto neg = di;
        for (std::size_t k = 0; k < orders.size(); ++k) neg[k] = (orders[k] - di[k]) % orders[k];
        a.tables[2][static_cast<std::size_t>(i)] = encode(neg);
        for (int j = 0; j < n; ++j) {
            auto dj = decode(j);
            auto sum = di;
            for (std::size_t k = 0; k < orders.size(); ++k) sum[k] = (di[k] + dj[k]) % orders[k];
            a.tables[1][static_cast<std::size_t>(i) * n + j] = encode(sum);
        }
    }
    return finish(std::move(a));
}

}  // namespace detail

inline AlgebraPtr generate(const GeneratorSpec& spec) {
    const std::string& f = spec.family;
    if (f == "cyclic_group") return detail::cyclic_group(spec.n);
    if (f == "dihedral") return detail::dihedral(spec.n);
    if (f == "symmetric") return detail::symmetric_group(spec.n);
    if (f == "quaternion8") return detail::quaternion8();
    if (f == "klein4") {
        auto z2 = detail::cyclic_group(2);
        auto w = product(z2, z2);
        FiniteAlgebra k = *w.product;
        k.name = "klein4";
        return std::make_shared<const FiniteAlgebra>(std::move(k));
    }
    if (f == "leftzero_monoid_plus_identity") return detail::leftzero_monoid_plus_identity(spec.n);
    if (f == "random_jt_magma") return detail::random_jt_magma(spec.seed, spec.n);
    if (f == "nonassoc_loop5") return detail::nonassoc_loop5(spec.seed);
    if (f == "ring_zn_modmul") return detail::ring_zn_modmul(spec.n);
    if (f == "ring_trivial_mul") return detail::ring_trivial_mul(spec.orders);
    if (f == "direct_product") {
        if (spec.factors.empty()) throw Error("unsupported-spec", "direct_product needs factors");
        AlgebraPtr acc = generate(spec.factors[0]);
        std::string nm = acc->name;
        for (std::size_t i = 1; i < spec.factors.size(); ++i) {
            auto w = product(acc, generate(spec.factors[i]));
            nm += "x" + spec.factors[i].family;
            acc = w.product;
        }
        FiniteAlgebra copy = *acc;
        copy.name = nm;
        return std::make_shared<const FiniteAlgebra>(std::move(copy));
    }
    throw Error("unsupported-spec", "unknown generator family '" + f + "'");
}

// --- variety law suites -------------------------------------------------------

// Each check returns the first violating tuple, or nullopt when the law holds.

inline std::optional<std::vector<std::int64_t>> check_associative(const FiniteAlgebra& a, int op) {
    for (int x = 0; x < a.size; ++x)
        for (int y = 0; y < a.size; ++y)
            for (int z = 0; z < a.size; ++z)
                if (a.apply2(op, a.apply2(op, x, y), z) != a.apply2(op, x, a.apply2(op, y, z)))
                    return std::vector<std::int64_t>{x, y, z};
    return std::nullopt;
}

inline std::optional<std::vector<std::int64_t>> check_commutative(const FiniteAlgebra& a, int op) {
    for (int x = 0; x < a.size; ++x)
        for (int y = 0; y < a.size; ++y)
            if (a.apply2(op, x, y) != a.apply2(op, y, x)) return std::vector<std::int64_t>{x, y};
    return std::nullopt;
}

struct LawReport {
    std::vector<std::string> failures;  // human-readable law names with witnesses
    bool ok() const { return failures.empty(); }
};

inline void note(LawReport& r, const std::string& law, const std::optional<std::vector<std::int64_t>>& w) {
    if (!w) return;
    std::string msg = law + " fails at (";
    for (std::size_t i = 0; i < w->size(); ++i) msg += (i ? "," : "") + std::to_string((*w)[i]);
    r.failures.push_back(msg + ")");
}

inline LawReport check_group_laws(const FiniteAlgebra& a) {
    LawReport r;
    int e = a.constant(a.signature.index_of("e"));
    int mul = a.signature.index_of("mul");
    int inv = a.signature.index_of("inv");
    note(r, "associativity", check_associative(a, mul));
    for (int x = 0; x < a.size; ++x) {
        if (a.apply2(mul, x, e) != x || a.apply2(mul, e, x) != x) {
            r.failures.push_back("unit fails at (" + std::to_string(x) + ")");
            break;
        }
    }
    for (int x = 0; x < a.size; ++x) {
        int xi = a.apply1(inv, x);
        if (a.apply2(mul, x, xi) != e || a.apply2(mul, xi, x) != e) {
            r.failures.push_back("inverse fails at (" + std::to_string(x) + ")");
            break;
        }
    }
    return r;
}

inline LawReport check_monoid_laws(const FiniteAlgebra& a) {
    LawReport r;
    int e = a.constant(a.signature.index_of("e"));
    int mul = a.signature.index_of("mul");
    note(r, "associativity", check_associative(a, mul));
    for (int x = 0; x < a.size; ++x)
        if (a.apply2(mul, x, e) != x || a.apply2(mul, e, x) != x) {
            r.failures.push_back("unit fails at (" + std::to_string(x) + ")");
            break;
        }
    return r;
}

inline LawReport check_loop_laws(const FiniteAlgebra& a) {
    LawReport r;
    int e = a.constant(a.signature.index_of("e"));
    int mul = a.signature.index_of("mul");
    int ldiv = a.signature.index_of("ldiv");
    int rdiv = a.signature.index_of("rdiv");
    for (int x = 0; x < a.size; ++x)
        if (a.apply2(mul, x, e) != x || a.apply2(mul, e, x) != x) {
            r.failures.push_back("identity fails at (" + std::to_string(x) + ")");
            break;
        }
    // Latin square: rows and columns are permutations.
    for (int x = 0; x < a.size && r.ok(); ++x) {
        std::vector<char> row(static_cast<std::size_t>(a.size), 0), col(static_cast<std::size_t>(a.size), 0);
        for (int y = 0; y < a.size; ++y) {
            row[static_cast<std::size_t>(a.apply2(mul, x, y))] = 1;
            col[static_cast<std::size_t>(a.apply2(mul, y, x))] = 1;
        }
        for (int v = 0; v < a.size; ++v)
            if (!row[static_cast<std::size_t>(v)] || !col[static_cast<std::size_t>(v)]) {
                r.failures.push_back("latin-square fails at row/col " + std::to_string(x));
                break;
            }
    }
    for (int x = 0; x < a.size && r.ok(); ++x)
        for (int y = 0; y < a.size; ++y) {
            if (a.apply2(mul, x, a.apply2(ldiv, x, y)) != y ||
                a.apply2(mul, a.apply2(rdiv, x, y), y) != x) {
                r.failures.push_back("division fails at (" + std::to_string(x) + "," + std::to_string(y) + ")");
                break;
            }
        }
    return r;
}

inline LawReport check_ring_laws(const FiniteAlgebra& a) {
    LawReport r;
    int zero = a.constant(a.signature.index_of("zero"));
    int plus = a.signature.index_of("plus");
    int neg = a.signature.index_of("neg");
    int mul = a.signature.index_of("mul");
    note(r, "plus-associativity", check_associative(a, plus));
    note(r, "plus-commutativity", check_commutative(a, plus));
    for (int x = 0; x < a.size; ++x)
        if (a.apply2(plus, x, zero) != x) {
            r.failures.push_back("plus-unit fails at (" + std::to_string(x) + ")");
            break;
        }
    for (int x = 0; x < a.size; ++x)
        if (a.apply2(plus, x, a.apply1(neg, x)) != zero) {
            r.failures.push_back("negation fails at (" + std::to_string(x) + ")");
            break;
        }
    note(r, "mul-associativity", check_associative(a, mul));
    for (int x = 0; x < a.size; ++x)
        for (int y = 0; y < a.size; ++y)
            for (int z = 0; z < a.size; ++z) {
                if (a.apply2(mul, x, a.apply2(plus, y, z)) !=
                        a.apply2(plus, a.apply2(mul, x, y), a.apply2(mul, x, z)) ||
                    a.apply2(mul, a.apply2(plus, x, y), z) !=
                        a.apply2(plus, a.apply2(mul, x, z), a.apply2(mul, y, z))) {
                    r.failures.push_back("distributivity fails at (" + std::to_string(x) + "," +
                                         std::to_string(y) + "," + std::to_string(z) + ")");
                    return r;
                }
            }
    return r;
}

// Detects the variety by signature shape and runs its law suite; generic
// signatures only get the jt unit law (already enforced by validate()).
inline LawReport check_variety_laws(const FiniteAlgebra& a) {
    const auto& sig = a.signature;
    auto has = [&](const char* nm, int ar) {
        int i = sig.index_of(nm);
        return i >= 0 && sig.operations[static_cast<std::size_t>(i)].arity == ar;
    };
    if (has("e", 0) && has("mul", 2) && has("inv", 1) && sig.operations.size() == 3)
        return check_group_laws(a);
    if (has("e", 0) && has("mul", 2) && has("ldiv", 2) && has("rdiv", 2)) return check_loop_laws(a);
    if (has("zero", 0) && has("plus", 2) && has("neg", 1) && has("mul", 2)) return check_ring_laws(a);
    if (has("e", 0) && has("mul", 2) && sig.operations.size() == 2) return check_monoid_laws(a);
    return LawReport{};
}

// --- JSON ingestion / serialization ------------------------------------------

namespace detail {

inline void parse_table(const json& node, int size, int arity, const std::string& path,
                        std::vector<int>& out) {
    if (arity == 0) {
        if (!node.is_number_integer())
            throw Error("parse", path + ": constant table must be a bare integer");
        out.push_back(node.get<int>());
        return;
    }
    if (!node.is_array() || node.size() != static_cast<std::size_t>(size))
        throw Error("parse", path + ": expected array of length " + std::to_string(size));
    for (std::size_t i = 0; i < node.size(); ++i) {
        const std::string sub = path + "[" + std::to_string(i) + "]";
        if (arity == 1) {
            if (!node[i].is_number_integer())
                throw Error("parse", sub + ": expected integer entry");
            out.push_back(node[i].get<int>());
        } else {
            parse_table(node[i], size, arity - 1, sub, out);
        }
    }
}

inline json serialize_table(const std::vector<int>& flat, int size, int arity, std::int64_t& cursor) {
    if (arity == 0) return flat[static_cast<std::size_t>(cursor++)];
    json arr = json::array();
    if (arity == 1) {
        for (int i = 0; i < size; ++i) arr.push_back(flat[static_cast<std::size_t>(cursor++)]);
        return arr;
    }
    for (int i = 0; i < size; ++i) arr.push_back(serialize_table(flat, size, arity - 1, cursor));
    return arr;
}

}  // namespace detail

// strict_jt: a jt unit-law violation is an error; otherwise it is recorded as
// a warning and the designation is kept.
inline AlgebraPtr parse_algebra(const std::string& text, bool strict_jt = false,
                                std::vector<std::string>* warnings = nullptr) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const std::exception& e) {
        throw Error("parse", std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw Error("parse", "top level must be an object");
    FiniteAlgebra a;
    if (!doc.contains("name") || !doc["name"].is_string())
        throw Error("parse", "missing string field 'name'");
    a.name = doc["name"].get<std::string>();
    if (!doc.contains("size") || !doc["size"].is_number_integer() || doc["size"].get<int>() <= 0)
        throw Error("parse", "missing positive integer field 'size'");
    a.size = doc["size"].get<int>();
    if (!doc.contains("operations") || !doc["operations"].is_object())
        throw Error("parse", "missing object field 'operations'");
    for (const auto& [opname, body] : doc["operations"].items()) {
        if (!body.is_object() || !body.contains("arity") || !body["arity"].is_number_integer())
            throw Error("parse", "operations." + opname + ": missing integer 'arity'");
        int arity = body["arity"].get<int>();
        if (arity < 0) throw Error("parse", "operations." + opname + ": negative arity");
        if (!body.contains("table"))
            throw Error("parse", "operations." + opname + ": missing 'table'");
        a.signature.operations.push_back({opname, arity});
        std::vector<int> flat;
        flat.reserve(static_cast<std::size_t>(table_entries(a.size, arity)));
        detail::parse_table(body["table"], a.size, arity, "operations." + opname + ".table", flat);
        a.tables.push_back(std::move(flat));
    }
    if (doc.contains("jt")) {
        const auto& jt = doc["jt"];
        if (!jt.is_object() || !jt.contains("zero") || !jt.contains("plus") ||
            !jt["zero"].is_string() || !jt["plus"].is_string())
            throw Error("parse", "jt: expected object with string 'zero' and 'plus'");
        a.signature.jt = JtDesignation{jt["zero"].get<std::string>(), jt["plus"].get<std::string>()};
    }
    // Range errors must carry the operation name and index path.
    a.signature.validate();
    for (std::size_t op = 0; op < a.tables.size(); ++op) {
        int arity = a.signature.operations[op].arity;
        for (std::size_t i = 0; i < a.tables[op].size(); ++i) {
            int v = a.tables[op][i];
            if (v < 0 || v >= a.size) {
                std::string path = "operations." + a.signature.operations[op].name + ".table";
                std::int64_t rest = static_cast<std::int64_t>(i);
                std::vector<int> idx(static_cast<std::size_t>(arity));
                for (int d = arity - 1; d >= 0; --d) {
                    idx[static_cast<std::size_t>(d)] = static_cast<int>(rest % a.size);
                    rest /= a.size;
                }
                for (int d = 0; d < arity; ++d) path += "[" + std::to_string(idx[static_cast<std::size_t>(d)]) + "]";
                throw Error("table-out-of-range",
                            path + " is " + std::to_string(v) + ", carrier size " + std::to_string(a.size),
                            {static_cast<std::int64_t>(i), v});
            }
        }
    }
    if (a.signature.jt) {
        a.zero_element = a.tables[static_cast<std::size_t>(
            a.signature.index_of(a.signature.jt->zero_name))][0];
        try {
            a.validate(true);
        } catch (const Error& e) {
            if (e.kind() != "jt-unit-violation" || strict_jt) throw;
            if (warnings) warnings->push_back(e.what());
        }
        return std::make_shared<const FiniteAlgebra>(std::move(a));
    }
    return make_algebra(std::move(a));
}

inline json algebra_json(const FiniteAlgebra& a) {
    json doc;
    doc["name"] = a.name;
    doc["size"] = a.size;
    json ops = json::object();
    for (std::size_t op = 0; op < a.signature.operations.size(); ++op) {
        const auto& o = a.signature.operations[op];
        std::int64_t cursor = 0;
        ops[o.name] = {{"arity", o.arity},
                       {"table", detail::serialize_table(a.tables[op], a.size, o.arity, cursor)}};
    }
    doc["operations"] = ops;
    if (a.signature.jt)
        doc["jt"] = {{"zero", a.signature.jt->zero_name}, {"plus", a.signature.jt->plus_name}};
    return doc;
}

inline std::string serialize_algebra(const FiniteAlgebra& a, bool pretty = false) {
    json doc = algebra_json(a);
    return pretty ? doc.dump(2) + "\n" : doc.dump() + "\n";
}

}  // namespace tanalg
