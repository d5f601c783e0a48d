// Regenerates the checked-in fixture algebras under fixtures/ (or the
// directory given as argv[1]). Everything here comes from the deterministic
// catalog generators, so reruns are byte-stable; broken.json is the one
// hand-written file, kept malformed on purpose for the parse-error paths.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "tanalg/catalog.hpp"

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) {
        std::cerr << "cannot write " << path << "\n";
        std::exit(1);
    }
}

tanalg::AlgebraPtr gen(const std::string& family, int n = 0, std::uint64_t seed = 0) {
    tanalg::GeneratorSpec s;
    s.family = family;
    s.n = n;
    s.seed = seed;
    return tanalg::generate(s);
}

}  // namespace

int main(int argc, char** argv) {
    std::filesystem::path dir = argc > 1 ? argv[1] : "fixtures";
    std::filesystem::create_directories(dir);

    const std::vector<tanalg::AlgebraPtr> algebras = {
        gen("cyclic_group", 2),
        gen("cyclic_group", 3),
        gen("cyclic_group", 4),
        gen("cyclic_group", 6),
        gen("klein4"),
        gen("symmetric", 3),
        gen("dihedral", 4),
        gen("quaternion8"),
        gen("leftzero_monoid_plus_identity", 1),
        gen("leftzero_monoid_plus_identity", 2),
        gen("nonassoc_loop5", 0, 0),
        gen("ring_zn_modmul", 4),
        gen("ring_zn_modmul", 6),
        gen("random_jt_magma", 5, 1),
    };
    for (const auto& a : algebras) {
        std::filesystem::path p = dir / (a->name + ".json");
        write_file(p, tanalg::serialize_algebra(*a, /*pretty=*/true));
        std::cout << p.string() << "\n";
    }

    // mul[1][1] = 5 exceeds the carrier: validate must exit 2 naming the path.
    write_file(dir / "broken.json",
               "{\n"
               "  \"name\": \"broken\",\n"
               "  \"size\": 2,\n"
               "  \"operations\": {\n"
               "    \"mul\": {\"arity\": 2, \"table\": [[0, 1], [1, 5]]}\n"
               "  }\n"
               "}\n");
    std::cout << (dir / "broken.json").string() << "\n";

    // Parses cleanly but inv[1] is wrong, so the group laws fail: exit 1 path.
    write_file(dir / "badgroup.json",
               "{\n"
               "  \"name\": \"badgroup\",\n"
               "  \"size\": 4,\n"
               "  \"operations\": {\n"
               "    \"e\": {\"arity\": 0, \"table\": 0},\n"
               "    \"mul\": {\"arity\": 2, \"table\": [[0, 1, 2, 3], [1, 2, 3, 0], "
               "[2, 3, 0, 1], [3, 0, 1, 2]]},\n"
               "    \"inv\": {\"arity\": 1, \"table\": [0, 1, 2, 1]}\n"
               "  },\n"
               "  \"jt\": {\"zero\": \"e\", \"plus\": \"mul\"}\n"
               "}\n");
    std::cout << (dir / "badgroup.json").string() << "\n";
    return 0;
}
