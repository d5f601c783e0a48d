// tanalg: ingestion, reflection, congruence quotients, tangent construction,
// axiom verification and bundle round trips from the command line.
//
// Reports are single-line JSON; --pretty re-renders the same document with
// indentation. Exit code 2 flags I/O, parse, or usage problems; exit 1 flags
// at least one failed check; exit 0 means every executed check passed.
// Skipped entries (resource budget, inapplicable mode) are listed but never
// fail a run. For fixed inputs the emitted bytes are identical across runs.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "tanalg/bundles.hpp"

namespace {

using tanalg::AlgebraPtr;
using tanalg::AxiomReport;
using tanalg::Error;
using tanalg::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("io", "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("io", "cannot open '" + path + "' for writing");
    out << text;
    out.flush();
    if (!out) throw Error("io", "short write to '" + path + "'");
}

void emit(const json& doc, const std::string& report_path, bool pretty) {
    std::string text = pretty ? doc.dump(2) + "\n" : doc.dump() + "\n";
    if (report_path.empty())
        std::cout << text;
    else
        write_file(report_path, text);
}

// Flag > environment > default. The environment override mirrors the flag's
// validation so a bad TANALG_BUDGET is a usage error, not a silent fallback.
std::int64_t resolve_budget(std::int64_t flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("TANALG_BUDGET")) {
        char* end = nullptr;
        long long v = std::strtoll(env, &end, 10);
        if (end == env || *end != '\0' || v <= 0)
            throw Error("parse", "TANALG_BUDGET must be a positive integer, got '" +
                                     std::string(env) + "'");
        return static_cast<std::int64_t>(v);
    }
    return 1'000'000;
}

json size_or_null(std::int64_t v) { return v < 0 ? json(nullptr) : json(v); }

json axioms_json(const AxiomReport& rep) {
    json arr = json::array();
    for (const auto& e : rep.entries) {
        json j;
        j["id"] = e.id;
        j["status"] = e.status;
        j["witness"] = e.witness ? json(*e.witness) : json(nullptr);
        j["cost"] = e.cost;
        arr.push_back(std::move(j));
    }
    return arr;
}

json all_skipped_axioms(const std::vector<std::string>& registry) {
    json arr = json::array();
    for (const auto& id : registry) {
        json j;
        j["id"] = id;
        j["status"] = "skipped";
        j["witness"] = nullptr;
        j["cost"] = 0;
        arr.push_back(std::move(j));
    }
    return arr;
}

AlgebraPtr load_algebra(const std::string& path, bool strict_jt = false,
                        std::vector<std::string>* warnings = nullptr) {
    return tanalg::parse_algebra(read_file(path), strict_jt, warnings);
}

json input_block(const std::string& path, const AlgebraPtr& X) {
    json j;
    j["path"] = path;
    j["algebra"] = X->name;
    j["size"] = X->size;
    return j;
}

struct Options {
    std::string input, base, fiber, out, report, emit_path;
    std::string mode = "ab";
    std::vector<std::string> seed_tokens;
    std::int64_t budget = 0;  // 0 = unset, resolved against the environment
    int depth = 3;
    bool verify = false, pretty = false, strict_jt = false;
    bool emit_unit = false, roundtrip = false;
};

// --- validate ----------------------------------------------------------------

int cmd_validate(const Options& o) {
    std::vector<std::string> warnings;
    AlgebraPtr X = load_algebra(o.input, o.strict_jt, &warnings);
    tanalg::LawReport laws = tanalg::check_variety_laws(*X);
    json doc;
    doc["tool"] = "tanalg";
    doc["subcommand"] = "validate";
    doc["input"] = input_block(o.input, X);
    doc["warnings"] = warnings;
    doc["ok"] = laws.ok();
    doc["failures"] = laws.failures;
    emit(doc, o.report, o.pretty);
    return laws.ok() ? 0 : 1;
}

// --- reflect -----------------------------------------------------------------

int cmd_reflect(const Options& o) {
    AlgebraPtr X = load_algebra(o.input);
    tanalg::AssignmentEngine eng(tanalg::mode_from_name(o.mode));
    const tanalg::ReflectionResult& R = eng.reflect_of(X);
    json doc = tanalg::algebra_json(*R.reflected);
    json w;
    w["plus"] = R.witness.plus;
    w["zero"] = R.witness.zero;
    if (R.group) w["neg"] = R.group->neg;
    doc["witness"] = std::move(w);
    if (o.emit_unit) doc["unit"] = R.unit.map.values;
    emit(doc, o.out, o.pretty);
    return 0;
}

// --- congruence --------------------------------------------------------------

std::vector<std::pair<int, int>> parse_seed_tokens(const std::vector<std::string>& tokens) {
    std::vector<std::pair<int, int>> seeds;
    for (const std::string& t : tokens) {
        std::size_t colon = t.find(':');
        bool ok = colon != std::string::npos && colon > 0 && colon + 1 < t.size();
        int a = 0, b = 0;
        if (ok) {
            try {
                std::size_t used = 0;
                a = std::stoi(t.substr(0, colon), &used);
                ok = used == colon;
                std::string rest = t.substr(colon + 1);
                b = std::stoi(rest, &used);
                ok = ok && used == rest.size();
            } catch (const std::exception&) {
                ok = false;
            }
        }
        if (!ok) throw Error("parse", "seed token '" + t + "' is not of the form a:b");
        seeds.emplace_back(a, b);
    }
    return seeds;
}

int cmd_congruence(const Options& o) {
    AlgebraPtr X = load_algebra(o.input);
    std::vector<std::pair<int, int>> seeds = parse_seed_tokens(o.seed_tokens);
    tanalg::Congruence cong = tanalg::generate_congruence(X, seeds);
    tanalg::QuotientResult q = tanalg::quotient(X, cong);
    json doc;
    doc["tool"] = "tanalg";
    doc["subcommand"] = "congruence";
    doc["input"] = input_block(o.input, X);
    json sj = json::array();
    for (auto [a, b] : seeds) sj.push_back(json::array({a, b}));
    doc["seeds"] = std::move(sj);
    doc["classes"] = cong.partition.classes();
    doc["class_of"] = q.class_of;
    json quot;
    quot["name"] = q.algebra->name;
    quot["size"] = q.algebra->size;
    doc["quotient"] = std::move(quot);
    emit(doc, o.report, o.pretty);
    return 0;
}

// --- tangent -----------------------------------------------------------------

int cmd_tangent(const Options& o) {
    AlgebraPtr X = load_algebra(o.input);
    std::int64_t budget = resolve_budget(o.budget);
    if (budget < X->size)
        throw Error("parse", "budget " + std::to_string(budget) +
                                 " is smaller than the input carrier of size " +
                                 std::to_string(X->size));
    tanalg::AssignmentEngine eng(tanalg::mode_from_name(o.mode));
    json doc;
    doc["tool"] = "tanalg";
    doc["subcommand"] = "tangent";
    doc["input"] = input_block(o.input, X);
    doc["mode"] = o.mode;
    doc["budget"] = budget;
    doc["depth"] = o.depth;
    int code = 0;
    try {
        std::shared_ptr<tanalg::TangentSpace> tx = tanalg::build_tangent(eng, X, budget);
        if (o.verify) {
            AxiomReport rep = tanalg::verify_tangent(*tx, {}, o.depth);
            json sizes;
            sizes["T"] = size_or_null(rep.t_size);
            sizes["T2"] = size_or_null(rep.t2_size);
            sizes["T3"] = size_or_null(rep.t3_size);
            doc["sizes"] = std::move(sizes);
            doc["axioms"] = axioms_json(rep);
            code = rep.all_passed() ? 0 : 1;
        } else {
            json t3 = nullptr;
            if (o.depth >= 3) {
                try {
                    tanalg::TangentSpace& it = tx->iterate();
                    t3 = static_cast<std::int64_t>(it.t_size()) * it.lt_size();
                } catch (const Error& e) {
                    if (e.kind() != "budget") throw;
                }
            }
            json sizes;
            sizes["T"] = tx->t_size();
            sizes["T2"] = tx->t2_size();
            sizes["T3"] = std::move(t3);
            doc["sizes"] = std::move(sizes);
            json maps;
            maps["p"] = tx->p.values;
            maps["s"] = tx->s.values;
            maps["z"] = tx->z.values;
            maps["ell"] = tx->ell.values;
            maps["flip"] = tx->flip.values;
            maps["n"] = tx->n ? json(tx->n->values) : json(nullptr);
            doc["maps"] = std::move(maps);
        }
    } catch (const Error& e) {
        // The tangent carrier itself overflowed: list everything as skipped.
        if (e.kind() != "budget") throw;
        json sizes;
        sizes["T"] = nullptr;
        sizes["T2"] = nullptr;
        sizes["T3"] = nullptr;
        doc["sizes"] = std::move(sizes);
        if (o.verify) doc["axioms"] = all_skipped_axioms(tanalg::tangent_axiom_registry());
        doc["note"] = e.what();
    }
    emit(doc, o.report, o.pretty);
    return code;
}

// --- bundle ------------------------------------------------------------------

int cmd_bundle(const Options& o) {
    const bool stored = !o.input.empty();
    if (stored && (!o.base.empty() || !o.fiber.empty()))
        throw Error("parse", "--input is exclusive with --base/--fiber");
    if (!stored && (o.base.empty() || o.fiber.empty()))
        throw Error("parse", "bundle needs either --input or both --base and --fiber");
    if (stored && o.roundtrip)
        throw Error("parse", "--roundtrip rebuilds from --base and --fiber");

    std::int64_t budget = resolve_budget(o.budget);
    tanalg::AssignmentEngine eng(tanalg::mode_from_name(o.mode));
    json doc;
    doc["tool"] = "tanalg";
    doc["subcommand"] = "bundle";
    doc["mode"] = o.mode;
    doc["budget"] = budget;

    tanalg::DifferentialBundle d;
    std::optional<tanalg::LAlgebra> alg;
    AlgebraPtr X;
    if (stored) {
        d = tanalg::parse_bundle(eng, read_file(o.input));
        X = d.base;
        doc["input"] = input_block(o.input, d.total);
    } else {
        X = load_algebra(o.base);
        AlgebraPtr A = load_algebra(o.fiber);
        doc["base"] = input_block(o.base, X);
        doc["fiber"] = input_block(o.fiber, A);
        alg = tanalg::canonical_l_algebra(eng, A);
        d = tanalg::build_diff_bundle(eng, X, *alg);
    }
    if (!o.emit_path.empty()) write_file(o.emit_path, tanalg::serialize_bundle(d, o.pretty));

    AxiomReport rep = tanalg::verify_diff_bundle(eng, d, budget);
    json sizes;
    sizes["base"] = d.base->size;
    sizes["E"] = d.total->size;
    sizes["E2"] = d.e2.size;
    sizes["T"] = size_or_null(rep.t_size);
    sizes["T2"] = size_or_null(rep.t2_size);
    doc["sizes"] = std::move(sizes);
    doc["axioms"] = axioms_json(rep);
    bool ok = rep.all_passed();
    if (o.roundtrip) {
        AxiomReport rt = tanalg::roundtrip_check(eng, X, *alg);
        doc["roundtrip"] = axioms_json(rt);
        ok = ok && rt.all_passed();
    }
    emit(doc, o.report, o.pretty);
    return ok ? 0 : 1;
}

// --- suite -------------------------------------------------------------------

AlgebraPtr gen(const std::string& family, int n = 0, std::uint64_t seed = 0) {
    tanalg::GeneratorSpec s;
    s.family = family;
    s.n = n;
    s.seed = seed;
    return tanalg::generate(s);
}

// Mediating isomorphism test: the map sending eta(x) to unit_o(x) must be a
// well-defined bijection commuting with every operation table.
bool oracle_agrees(tanalg::AssignmentEngine& eng, const AlgebraPtr& G,
                   const tanalg::OracleReflection& O) {
    const tanalg::ReflectionResult& R = eng.reflect_of(G);
    const tanalg::FiniteAlgebra& A = *R.reflected;
    const tanalg::FiniteAlgebra& B = *O.reflected;
    if (A.size != B.size) return false;
    std::vector<int> m(static_cast<std::size_t>(A.size), -1);
    for (int x = 0; x < G->size; ++x) {
        int a = R.unit.map(x), b = O.unit.map(x);
        if (m[static_cast<std::size_t>(a)] >= 0 && m[static_cast<std::size_t>(a)] != b)
            return false;
        m[static_cast<std::size_t>(a)] = b;
    }
    std::vector<int> seen(static_cast<std::size_t>(A.size), 0);
    for (int a = 0; a < A.size; ++a) {
        if (m[static_cast<std::size_t>(a)] < 0) return false;  // eta not surjective
        if (seen[static_cast<std::size_t>(m[static_cast<std::size_t>(a)])]++) return false;
    }
    for (std::size_t op = 0; op < A.signature.operations.size(); ++op) {
        int ar = A.signature.operations[op].arity;
        std::vector<int> args(static_cast<std::size_t>(ar)),
            margs(static_cast<std::size_t>(ar));
        std::int64_t total = tanalg::table_entries(A.size, ar);
        for (std::int64_t t = 0; t < total; ++t) {
            std::int64_t rem = t;
            for (int k = ar - 1; k >= 0; --k) {
                args[static_cast<std::size_t>(k)] = static_cast<int>(rem % A.size);
                rem /= A.size;
            }
            for (int k = 0; k < ar; ++k)
                margs[static_cast<std::size_t>(k)] = m[static_cast<std::size_t>(
                    args[static_cast<std::size_t>(k)])];
            if (m[static_cast<std::size_t>(A.apply(static_cast<int>(op), args))] !=
                B.apply(static_cast<int>(op), margs))
                return false;
        }
    }
    return true;
}

int cmd_suite(const Options& o) {
    std::int64_t budget = resolve_budget(o.budget);
    json doc;
    doc["tool"] = "tanalg";
    doc["subcommand"] = "suite";
    doc["budget"] = budget;
    bool ok = true;

    AlgebraPtr z2 = gen("cyclic_group", 2), z3 = gen("cyclic_group", 3),
               z4 = gen("cyclic_group", 4), z6 = gen("cyclic_group", 6),
               klein4 = gen("klein4"), s3 = gen("symmetric", 3), d4 = gen("dihedral", 4),
               q8 = gen("quaternion8");
    AlgebraPtr leftzero2 = gen("leftzero_monoid_plus_identity", 1),
               leftzero3 = gen("leftzero_monoid_plus_identity", 2);
    AlgebraPtr loop5 = gen("nonassoc_loop5", 0, 0), ringz4 = gen("ring_zn_modmul", 4),
               ringz6 = gen("ring_zn_modmul", 6), magma = gen("random_jt_magma", 5, 1);

    tanalg::AssignmentEngine eng_ab(tanalg::ReflectMode::ab);
    tanalg::AssignmentEngine eng_cmon(tanalg::ReflectMode::cmon);
    tanalg::AssignmentEngine eng_id(tanalg::ReflectMode::identity);
    tanalg::AssignmentEngine eng_term(tanalg::ReflectMode::terminal);
    auto engine_for = [&](const std::string& mode) -> tanalg::AssignmentEngine& {
        if (mode == "ab") return eng_ab;
        if (mode == "cmon") return eng_cmon;
        if (mode == "identity") return eng_id;
        return eng_term;
    };

    // Variety laws across the catalog.
    {
        json arr = json::array();
        for (const AlgebraPtr& X : {z2, z3, z4, z6, klein4, s3, d4, q8, leftzero2,
                                    leftzero3, loop5, ringz4, ringz6, magma}) {
            tanalg::LawReport lr = tanalg::check_variety_laws(*X);
            json j;
            j["algebra"] = X->name;
            j["size"] = X->size;
            j["ok"] = lr.ok();
            j["failures"] = lr.failures;
            ok = ok && lr.ok();
            arr.push_back(std::move(j));
        }
        doc["laws"] = std::move(arr);
    }

    // Abelianization against the commutator-quotient oracle.
    {
        json arr = json::array();
        for (const AlgebraPtr& G : {z2, z3, z4, z6, klein4, s3, d4, q8}) {
            tanalg::OracleReflection O = tanalg::group_commutator_oracle(G);
            bool agrees = oracle_agrees(eng_ab, G, O);
            json j;
            j["algebra"] = G->name;
            j["engine_size"] = eng_ab.reflect_of(G).reflected->size;
            j["oracle_size"] = O.reflected->size;
            j["ok"] = agrees;
            ok = ok && agrees;
            arr.push_back(std::move(j));
        }
        doc["oracles"] = std::move(arr);
    }

    // Reflection assignment battery per mode.
    {
        json arr = json::array();
        const std::vector<std::pair<std::string, std::vector<AlgebraPtr>>> runs = {
            {"ab", {z4, klein4, s3}},
            {"cmon", {leftzero3}},
            {"identity", {z4}},
            {"terminal", {z3}},
        };
        for (const auto& [mode, algebras] : runs) {
            tanalg::AssignmentReport rep = tanalg::verify_assignment(engine_for(mode), algebras);
            json j;
            j["mode"] = mode;
            json checks = json::array();
            for (const auto& c : rep.checks) {
                json cj;
                cj["id"] = c.id;
                cj["subject"] = c.subject;
                cj["ok"] = c.ok;
                cj["detail"] = c.detail;
                checks.push_back(std::move(cj));
            }
            j["checks"] = std::move(checks);
            ok = ok && rep.all_ok();
            arr.push_back(std::move(j));
        }
        doc["assignment"] = std::move(arr);
    }

    std::set<std::string> seen_tangent, seen_bundle, seen_roundtrip;

    // Tangent axiom registry across modes.
    {
        json arr = json::array();
        const std::vector<std::pair<AlgebraPtr, std::string>> runs = {
            {z4, "ab"}, {s3, "ab"}, {leftzero3, "cmon"}, {z2, "identity"}, {z2, "terminal"},
        };
        for (const auto& [X, mode] : runs) {
            std::shared_ptr<tanalg::TangentSpace> tx =
                tanalg::build_tangent(engine_for(mode), X, budget);
            AxiomReport rep = tanalg::verify_tangent(*tx);
            for (const auto& e : rep.entries)
                if (e.status != "skipped") seen_tangent.insert(e.id);
            json j;
            j["algebra"] = X->name;
            j["mode"] = mode;
            json sizes;
            sizes["T"] = size_or_null(rep.t_size);
            sizes["T2"] = size_or_null(rep.t2_size);
            sizes["T3"] = size_or_null(rep.t3_size);
            j["sizes"] = std::move(sizes);
            j["axioms"] = axioms_json(rep);
            ok = ok && rep.all_passed();
            arr.push_back(std::move(j));
        }
        doc["tangent"] = std::move(arr);
    }

    // Differential bundles, one with negation and one plain-monoid fibre.
    {
        json arr = json::array();
        const std::vector<std::tuple<AlgebraPtr, AlgebraPtr, std::string>> runs = {
            {s3, z2, "ab"}, {leftzero3, leftzero2, "cmon"}};
        for (const auto& [X, A, mode] : runs) {
            tanalg::AssignmentEngine& eng = engine_for(mode);
            tanalg::LAlgebra alg = tanalg::canonical_l_algebra(eng, A);
            tanalg::DifferentialBundle d = tanalg::build_diff_bundle(eng, X, alg);
            AxiomReport rep = tanalg::verify_diff_bundle(eng, d, budget);
            for (const auto& e : rep.entries)
                if (e.status != "skipped") seen_bundle.insert(e.id);
            json j;
            j["base"] = X->name;
            j["fiber"] = A->name;
            j["mode"] = mode;
            json sizes;
            sizes["E"] = d.total->size;
            sizes["T"] = size_or_null(rep.t_size);
            sizes["T2"] = size_or_null(rep.t2_size);
            j["sizes"] = std::move(sizes);
            j["axioms"] = axioms_json(rep);
            ok = ok && rep.all_passed();
            arr.push_back(std::move(j));
        }
        doc["bundles"] = std::move(arr);
    }

    // Kernel round trips.
    {
        json arr = json::array();
        const std::vector<std::pair<AlgebraPtr, AlgebraPtr>> runs = {{z3, z4}, {s3, z2}};
        for (const auto& [X, A] : runs) {
            tanalg::LAlgebra alg = tanalg::canonical_l_algebra(eng_ab, A);
            AxiomReport rep = tanalg::roundtrip_check(eng_ab, X, alg);
            for (const auto& e : rep.entries)
                if (e.status != "skipped") seen_roundtrip.insert(e.id);
            json j;
            j["base"] = X->name;
            j["fiber"] = A->name;
            j["mode"] = "ab";
            j["axioms"] = axioms_json(rep);
            ok = ok && rep.all_passed();
            arr.push_back(std::move(j));
        }
        doc["roundtrips"] = std::move(arr);
    }

    // Coverage assertion: every registry id must have been exercised above.
    {
        auto cover = [&](const std::vector<std::string>& registry,
                         const std::set<std::string>& seen) {
            json j;
            j["registry"] = registry;
            j["seen"] = std::vector<std::string>(seen.begin(), seen.end());
            bool complete = seen == std::set<std::string>(registry.begin(), registry.end());
            j["complete"] = complete;
            ok = ok && complete;
            return j;
        };
        json cov;
        cov["tangent"] = cover(tanalg::tangent_axiom_registry(), seen_tangent);
        cov["bundle"] = cover(tanalg::bundle_axiom_registry(), seen_bundle);
        cov["roundtrip"] = cover(tanalg::roundtrip_axiom_registry(), seen_roundtrip);
        doc["coverage"] = std::move(cov);
    }

    doc["ok"] = ok;
    emit(doc, o.report, o.pretty);
    return ok ? 0 : 1;
}

// I/O, parse, and usage problems exit 2; anything mathematical exits 1.
bool is_input_error(const std::string& kind) {
    return kind == "parse" || kind == "io" || kind == "table-out-of-range" ||
           kind == "jt-unit-violation" || kind == "seed-out-of-range" ||
           kind == "unsupported-spec";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite tangent-structure engine"};
    app.require_subcommand(1);

    Options o;

    CLI::App* validate = app.add_subcommand("validate", "variety law checks on an algebra file");
    validate->add_option("--input", o.input, "algebra JSON file")->required();
    validate->add_flag("--strict-jt", o.strict_jt, "treat jt unit violations as errors");
    validate->add_option("--report", o.report, "write the report here instead of stdout");
    validate->add_flag("--pretty", o.pretty, "indent the JSON output");

    CLI::App* reflect = app.add_subcommand("reflect", "commutative reflection of an algebra");
    reflect->add_option("--input", o.input, "algebra JSON file")->required();
    reflect->add_option("--mode", o.mode, "cmon|ab|identity|terminal");
    reflect->add_option("--out", o.out, "write the reflected algebra here instead of stdout");
    reflect->add_flag("--emit-unit", o.emit_unit, "include the unit value table");
    reflect->add_flag("--pretty", o.pretty, "indent the JSON output");

    CLI::App* congruence =
        app.add_subcommand("congruence", "least congruence generated by seed pairs");
    congruence->add_option("--input", o.input, "algebra JSON file")->required();
    congruence->add_option("seeds", o.seed_tokens, "seed pairs as a:b tokens");
    congruence->add_option("--report", o.report, "write the report here instead of stdout");
    congruence->add_flag("--pretty", o.pretty, "indent the JSON output");

    CLI::App* tangent = app.add_subcommand("tangent", "tangent construction and axiom checks");
    tangent->add_option("--input", o.input, "algebra JSON file")->required();
    tangent->add_option("--mode", o.mode, "cmon|ab|identity|terminal");
    tangent->add_flag("--verify", o.verify, "run the tangent axiom registry");
    tangent->add_option("--depth", o.depth, "max tangent iteration level")
        ->check(CLI::Range(1, 3));
    tangent->add_option("--budget", o.budget, "max materialized carrier size")
        ->check(CLI::PositiveNumber);
    tangent->add_option("--report", o.report, "write the report here instead of stdout");
    tangent->add_flag("--pretty", o.pretty, "indent the JSON output");

    CLI::App* bundle = app.add_subcommand("bundle", "differential bundle checks and round trips");
    bundle->add_option("--base", o.base, "base algebra JSON file");
    bundle->add_option("--fiber", o.fiber, "fibre algebra JSON file");
    bundle->add_option("--input", o.input, "stored bundle JSON file");
    bundle->add_option("--mode", o.mode, "cmon|ab|identity|terminal");
    bundle->add_flag("--roundtrip", o.roundtrip, "also run the kernel round-trip checks");
    bundle->add_option("--emit", o.emit_path, "write the constructed bundle here");
    bundle->add_option("--budget", o.budget, "max materialized carrier size")
        ->check(CLI::PositiveNumber);
    bundle->add_option("--report", o.report, "write the report here instead of stdout");
    bundle->add_flag("--pretty", o.pretty, "indent the JSON output");

    CLI::App* suite = app.add_subcommand("suite", "full check battery over the built-in catalog");
    suite->add_option("--budget", o.budget, "max materialized carrier size")
        ->check(CLI::PositiveNumber);
    suite->add_option("--report", o.report, "write the report here instead of stdout");
    suite->add_flag("--pretty", o.pretty, "indent the JSON output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (validate->parsed()) return cmd_validate(o);
        if (reflect->parsed()) return cmd_reflect(o);
        if (congruence->parsed()) return cmd_congruence(o);
        if (tangent->parsed()) return cmd_tangent(o);
        if (bundle->parsed()) return cmd_bundle(o);
        return cmd_suite(o);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return is_input_error(e.kind()) ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
