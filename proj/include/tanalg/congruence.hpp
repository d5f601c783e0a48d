#pragma once

// Congruence generation and quotients. A congruence is an equivalence
// relation compatible with every operation; quotients by congruences realize
// coequalizers. Classes are indexed by their sorted least representatives so
// quotient tables are reproducible.

#include <cstdint>
#include <numeric>
#include <utility>

#include "tanalg/algebra.hpp"

namespace tanalg {

class Partition {
public:
    explicit Partition(int n) : parent_(static_cast<std::size_t>(n)), rank_(static_cast<std::size_t>(n), 0) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }

    int size() const { return static_cast<int>(parent_.size()); }

    int find(int x) const {
        while (parent_[static_cast<std::size_t>(x)] != x) {
            parent_[static_cast<std::size_t>(x)] =
                parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(x)])];
            x = parent_[static_cast<std::size_t>(x)];
        }
        return x;
    }

    // Returns true when the classes were distinct.
    bool merge(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (rank_[static_cast<std::size_t>(a)] < rank_[static_cast<std::size_t>(b)]) std::swap(a, b);
        parent_[static_cast<std::size_t>(b)] = a;
        if (rank_[static_cast<std::size_t>(a)] == rank_[static_cast<std::size_t>(b)])
            ++rank_[static_cast<std::size_t>(a)];
        return true;
    }

    bool same(int a, int b) const { return find(a) == find(b); }

    int class_count() const {
        int c = 0;
        for (int i = 0; i < size(); ++i)
            if (find(i) == i) ++c;
        return c;
    }

    // class_of[x] = index of x's class among classes ordered by least element.
    std::vector<int> class_indices() const {
        int n = size();
        std::vector<int> least(static_cast<std::size_t>(n), -1);
        for (int i = 0; i < n; ++i) {
            int r = find(i);
            if (least[static_cast<std::size_t>(r)] < 0) least[static_cast<std::size_t>(r)] = i;
        }
        std::vector<int> reps;
        for (int i = 0; i < n; ++i)
            if (find(i) == i) reps.push_back(least[static_cast<std::size_t>(i)]);
        std::sort(reps.begin(), reps.end());
        std::vector<int> rep_rank(static_cast<std::size_t>(n), -1);
        for (std::size_t k = 0; k < reps.size(); ++k)
            rep_rank[static_cast<std::size_t>(find(reps[k]))] = static_cast<int>(k);
        std::vector<int> cls(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) cls[static_cast<std::size_t>(i)] = rep_rank[static_cast<std::size_t>(find(i))];
        return cls;
    }

    // Classes as sorted element lists, ordered by least representative.
    std::vector<std::vector<int>> classes() const {
        std::vector<int> cls = class_indices();
        int k = class_count();
        std::vector<std::vector<int>> out(static_cast<std::size_t>(k));
        for (int i = 0; i < size(); ++i) out[static_cast<std::size_t>(cls[static_cast<std::size_t>(i)])].push_back(i);
        return out;
    }

    bool refines(const Partition& coarser) const {
        for (int i = 0; i < size(); ++i)
            for (int j = i + 1; j < size(); ++j)
                if (same(i, j) && !coarser.same(i, j)) return false;
        return true;
    }

    friend bool operator==(const Partition& a, const Partition& b) {
        if (a.size() != b.size()) return false;
        return a.class_indices() == b.class_indices();
    }

private:
    mutable std::vector<int> parent_;
    std::vector<int> rank_;
};

struct Congruence {
    Partition partition;
    AlgebraPtr algebra;

    // Exhaustive compatibility check: componentwise-congruent tuples have
    // congruent images. Returns the offending (op, tuple, tuple) or nullopt.
    std::optional<std::vector<std::int64_t>> first_violation() const {
        const auto& X = *algebra;
        int n = X.size;
        std::vector<int> cls = partition.class_indices();
        std::vector<int> args(static_cast<std::size_t>(X.signature.max_arity()));
        // It suffices to compare each tuple against its class-representative
        // tuple: congruence fails iff some f(tuple) is not congruent to
        // f(representative tuple).
        std::vector<int> rep(static_cast<std::size_t>(n));
        {
            std::vector<int> least(static_cast<std::size_t>(partition.class_count()), -1);
            for (int i = n - 1; i >= 0; --i) least[static_cast<std::size_t>(cls[static_cast<std::size_t>(i)])] = i;
            for (int i = 0; i < n; ++i) rep[static_cast<std::size_t>(i)] = least[static_cast<std::size_t>(cls[static_cast<std::size_t>(i)])];
        }
        for (std::size_t op = 0; op < X.signature.operations.size(); ++op) {
            int k = X.signature.operations[op].arity;
            std::int64_t tuples = table_entries(n, k);
            std::vector<int> canon(static_cast<std::size_t>(k));
            for (std::int64_t t = 0; t < tuples; ++t) {
                std::int64_t rest = t;
                for (int i = k - 1; i >= 0; --i) {
                    args[static_cast<std::size_t>(i)] = static_cast<int>(rest % n);
                    rest /= n;
                }
                for (int i = 0; i < k; ++i) canon[static_cast<std::size_t>(i)] = rep[static_cast<std::size_t>(args[static_cast<std::size_t>(i)])];
                int a = X.apply(static_cast<int>(op), std::span<const int>(args.data(), static_cast<std::size_t>(k)));
                int b = X.apply(static_cast<int>(op), canon);
                if (!partition.same(a, b))
                    return std::vector<std::int64_t>{static_cast<std::int64_t>(op), t, a, b};
            }
        }
        return std::nullopt;
    }

    void check() const {
        if (auto v = first_violation())
            throw Error("congruence-invalid",
                        "operation '" +
                            algebra->signature.operations[static_cast<std::size_t>((*v)[0])].name +
                            "' breaks compatibility at tuple index " + std::to_string((*v)[1]),
                        *v);
    }
};

// Least congruence containing the seed pairs. Union-find plus a worklist:
// after a merge, only tuples touching the merged classes are re-scanned; when
// the merge cascade exceeds the carrier size the loop falls back to full
// re-scans until a pass makes no progress.
inline Congruence generate_congruence(const AlgebraPtr& X,
                                      const std::vector<std::pair<int, int>>& seeds) {
    int n = X->size;
    Partition part(n);
    for (auto [a, b] : seeds) {
        if (a < 0 || a >= n || b < 0 || b >= n)
            throw Error("seed-out-of-range",
                        "seed (" + std::to_string(a) + ", " + std::to_string(b) +
                            ") outside carrier of size " + std::to_string(n),
                        {a, b});
    }

    const auto& sig = X->signature;
    std::vector<int> dirty;  // elements whose class just changed
    auto merge = [&](int a, int b) {
        int ra = part.find(a), rb = part.find(b);
        if (ra == rb) return;
        part.merge(ra, rb);
        dirty.push_back(ra);
        dirty.push_back(rb);
    };
    for (auto [a, b] : seeds) merge(a, b);

    std::vector<int> args, canon;
    // Full pass: canonicalize every tuple, merge image classes. Returns true
    // when something merged.
    auto full_pass = [&]() {
        bool changed = false;
        for (std::size_t op = 0; op < sig.operations.size(); ++op) {
            int k = sig.operations[op].arity;
            if (k == 0) continue;
            std::int64_t tuples = table_entries(n, k);
            args.assign(static_cast<std::size_t>(k), 0);
            canon.assign(static_cast<std::size_t>(k), 0);
            for (std::int64_t t = 0; t < tuples; ++t) {
                std::int64_t rest = t;
                for (int i = k - 1; i >= 0; --i) {
                    args[static_cast<std::size_t>(i)] = static_cast<int>(rest % n);
                    rest /= n;
                }
                for (int i = 0; i < k; ++i) canon[static_cast<std::size_t>(i)] = part.find(args[static_cast<std::size_t>(i)]);
                int a = X->apply(static_cast<int>(op), args);
                int b = X->apply(static_cast<int>(op), canon);
                if (part.find(a) != part.find(b)) {
                    merge(a, b);
                    changed = true;
                }
            }
        }
        return changed;
    };
    // Restricted pass: scan only tuples with some component in d's class
    // (the only tuples whose canonical form changed in the merge).
    auto scan_around = [&](int d) {
        std::vector<int> members;
        for (int v = 0; v < n; ++v)
            if (part.same(v, d)) members.push_back(v);
        for (std::size_t op = 0; op < sig.operations.size(); ++op) {
            int k = sig.operations[op].arity;
            if (k == 0) continue;
            args.assign(static_cast<std::size_t>(k), 0);
            canon.assign(static_cast<std::size_t>(k), 0);
            for (int pos = 0; pos < k; ++pos) {
                std::int64_t rest_count = table_entries(n, k - 1);
                for (std::int64_t r = 0; r < rest_count; ++r) {
                    std::int64_t rest = r;
                    for (int i = k - 1; i >= 0; --i) {
                        if (i == pos) continue;
                        args[static_cast<std::size_t>(i)] = static_cast<int>(rest % n);
                        rest /= n;
                    }
                    for (int v : members) {
                        args[static_cast<std::size_t>(pos)] = v;
                        for (int i = 0; i < k; ++i)
                            canon[static_cast<std::size_t>(i)] = part.find(args[static_cast<std::size_t>(i)]);
                        int a = X->apply(static_cast<int>(op), args);
                        int b = X->apply(static_cast<int>(op), canon);
                        if (part.find(a) != part.find(b)) merge(a, b);
                    }
                }
            }
        }
    };

    std::size_t processed = 0;
    bool fallback = false;
    while (processed < dirty.size()) {
        if (dirty.size() - processed > static_cast<std::size_t>(n)) {
            fallback = true;
            break;
        }
        int d = dirty[processed++];
        scan_around(d);
    }
    if (fallback)
        while (full_pass()) {
        }
    // Insurance pass: the result must already be closed; a final full pass
    // merging nothing certifies compatibility.
    while (full_pass()) {
    }

    return Congruence{std::move(part), X};
}

struct QuotientResult {
    AlgebraPtr algebra;
    Homomorphism projection;
    std::vector<int> class_of;        // carrier element -> class index
    std::vector<int> representative;  // class index -> least element
};

inline QuotientResult quotient(const AlgebraPtr& X, const Congruence& c) {
    if (c.partition.size() != X->size)
        throw Error("congruence-invalid", "partition size does not match the carrier");
    c.check();
    std::vector<int> cls = c.partition.class_indices();
    int k = c.partition.class_count();
    std::vector<int> rep(static_cast<std::size_t>(k), -1);
    for (int i = X->size - 1; i >= 0; --i) rep[static_cast<std::size_t>(cls[static_cast<std::size_t>(i)])] = i;

    FiniteAlgebra Q;
    Q.name = X->name + "/~";
    Q.signature = X->signature;
    Q.size = k;
    Q.tables.resize(Q.signature.operations.size());
    std::vector<int> args;
    for (std::size_t op = 0; op < Q.signature.operations.size(); ++op) {
        int ar = Q.signature.operations[op].arity;
        std::int64_t tuples = table_entries(k, ar);
        Q.tables[op].resize(static_cast<std::size_t>(tuples));
        args.assign(static_cast<std::size_t>(ar), 0);
        for (std::int64_t t = 0; t < tuples; ++t) {
            std::int64_t rest = t;
            for (int i = ar - 1; i >= 0; --i) {
                args[static_cast<std::size_t>(i)] = rep[static_cast<std::size_t>(rest % k)];
                rest /= k;
            }
            Q.tables[op][static_cast<std::size_t>(t)] =
                cls[static_cast<std::size_t>(X->apply(static_cast<int>(op), args))];
        }
    }
    if (Q.signature.jt)
        Q.zero_element = Q.tables[static_cast<std::size_t>(
            Q.signature.index_of(Q.signature.jt->zero_name))][0];
    AlgebraPtr Qp = std::make_shared<const FiniteAlgebra>(std::move(Q));
    Homomorphism proj{FiniteFunction{X->size, k, cls}, X, Qp};
    return QuotientResult{Qp, std::move(proj), std::move(cls), std::move(rep)};
}

struct KernelResult {
    std::vector<int> elements;     // sorted members of the kernel
    std::vector<int> position_of;  // carrier element -> index in elements, or -1
    AlgebraPtr algebra;            // the kernel as an algebra on {0..k-1}
    Homomorphism inclusion;
};

// ker(f) = { e : f(e) = 0 }. Needs pointed source and target; the subset is
// closed under every operation because operations fix zero (quasi-injection
// precondition), which is re-checked here.
inline KernelResult kernel(const Homomorphism& f) {
    int zt = f.target->jt_zero();
    (void)f.source->jt_zero();
    std::vector<int> elems;
    std::vector<int> pos(static_cast<std::size_t>(f.source->size), -1);
    for (int e = 0; e < f.source->size; ++e)
        if (f(e) == zt) {
            pos[static_cast<std::size_t>(e)] = static_cast<int>(elems.size());
            elems.push_back(e);
        }
    FiniteAlgebra K;
    K.name = "ker(" + f.source->name + ")";
    K.signature = f.source->signature;
    K.size = static_cast<int>(elems.size());
    K.tables.resize(K.signature.operations.size());
    std::vector<int> args;
    for (std::size_t op = 0; op < K.signature.operations.size(); ++op) {
        int ar = K.signature.operations[op].arity;
        std::int64_t tuples = table_entries(K.size, ar);
        K.tables[op].resize(static_cast<std::size_t>(tuples));
        args.assign(static_cast<std::size_t>(ar), 0);
        for (std::int64_t t = 0; t < tuples; ++t) {
            std::int64_t rest = t;
            for (int i = ar - 1; i >= 0; --i) {
                args[static_cast<std::size_t>(i)] = elems[static_cast<std::size_t>(rest % K.size)];
                rest /= K.size;
            }
            int img = f.source->apply(static_cast<int>(op), args);
            if (pos[static_cast<std::size_t>(img)] < 0)
                throw Error("kernel-not-closed",
                            "operation '" + K.signature.operations[op].name +
                                "' leaves the kernel at tuple index " + std::to_string(t),
                            {static_cast<std::int64_t>(op), t, img});
            K.tables[op][static_cast<std::size_t>(t)] = pos[static_cast<std::size_t>(img)];
        }
    }
    if (K.signature.jt)
        K.zero_element = K.tables[static_cast<std::size_t>(
            K.signature.index_of(K.signature.jt->zero_name))][0];
    AlgebraPtr Kp = std::make_shared<const FiniteAlgebra>(std::move(K));
    FiniteFunction inc{Kp->size, f.source->size, elems};
    return KernelResult{elems, std::move(pos), Kp, Homomorphism{std::move(inc), Kp, f.source}};
}

namespace detail {
// Enumerates all partitions of {0..n-1} in restricted-growth-string order.
template <typename Fn>
void for_each_partition(int n, Fn&& fn) {
    std::vector<int> rgs(static_cast<std::size_t>(n), 0);
    std::vector<int> maxv(static_cast<std::size_t>(n), 0);
    while (true) {
        fn(rgs);
        int i = n - 1;
        while (i > 0 && rgs[static_cast<std::size_t>(i)] == maxv[static_cast<std::size_t>(i - 1)] + 1) --i;
        if (i == 0) break;
        ++rgs[static_cast<std::size_t>(i)];
        maxv[static_cast<std::size_t>(i)] =
            std::max(maxv[static_cast<std::size_t>(i - 1)], rgs[static_cast<std::size_t>(i)]);
        for (int j = i + 1; j < n; ++j) {
            rgs[static_cast<std::size_t>(j)] = 0;
            maxv[static_cast<std::size_t>(j)] = maxv[static_cast<std::size_t>(i)];
        }
    }
}
}  // namespace detail

// Independent oracle: enumerate all partitions (Bell growth caps the carrier
// at 7), keep the congruences containing the seeds, return the least. Test
// use only.
inline Congruence brute_force_least_congruence(const AlgebraPtr& X,
                                               const std::vector<std::pair<int, int>>& seeds) {
    int n = X->size;
    if (n > 7)
        throw Error("carrier-too-large",
                    "brute-force oracle limited to carriers of size 7, got " + std::to_string(n));
    for (auto [a, b] : seeds)
        if (a < 0 || a >= n || b < 0 || b >= n)
            throw Error("seed-out-of-range", "seed outside carrier", {a, b});

    std::optional<Partition> best;
    int best_classes = -1;
    detail::for_each_partition(n, [&](const std::vector<int>& rgs) {
        Partition p(n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rgs[static_cast<std::size_t>(i)] == rgs[static_cast<std::size_t>(j)]) p.merge(i, j);
        for (auto [a, b] : seeds)
            if (!p.same(a, b)) return;
        Congruence c{p, X};
        if (c.first_violation()) return;
        int classes = p.class_count();
        // The congruences containing the seeds form a lattice, so the one
        // with the most classes is the least element; refinement is verified
        // below to guard against ties.
        if (classes > best_classes) {
            best = std::move(p);
            best_classes = classes;
        }
    });
    // best exists: the all-in-one partition is always a congruence.
    Congruence least{std::move(*best), X};
    // Sanity: the chosen congruence must refine every other candidate; this
    // re-walk is quadratic in Bell(n) only in pathological ties, and n <= 7.
    detail::for_each_partition(n, [&](const std::vector<int>& rgs) {
        Partition p(n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rgs[static_cast<std::size_t>(i)] == rgs[static_cast<std::size_t>(j)]) p.merge(i, j);
        for (auto [a, b] : seeds)
            if (!p.same(a, b)) return;
        if (Congruence{p, X}.first_violation()) return;
        if (!least.partition.refines(p))
            throw Error("oracle-inconsistent", "least congruence is not a refinement of a candidate");
    });
    return least;
}

}  // namespace tanalg
