// Command-line front end: validate, cohomology, decompose, selftest, random.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sheaftree/commands.hpp"

namespace {

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int emit(const sheaftree::Report& r, bool pretty, const std::string& out) {
    if (out.empty()) {
        std::cout << r.dump(pretty);
    } else {
        std::ofstream f(out);
        if (!f) {
            std::cerr << "cannot write " << out << "\n";
            return sheaftree::kExitInvalidInput;
        }
        f << r.dump(pretty);
    }
    return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cellular sheaves on trees: cohomology and induction decompositions"};
    app.require_subcommand(1);
    app.fallthrough();

    bool pretty = false;
    std::string out;
    app.add_flag("--pretty", pretty, "Indented JSON output");
    app.add_flag("--json", [&](std::int64_t) { pretty = false; }, "Compact JSON output (default)");
    app.add_option("--out", out, "Write the report to a file instead of stdout");

    std::string input = "-";
    auto* validate = app.add_subcommand("validate", "Parse and validate an instance file");
    auto* cohomology = app.add_subcommand("cohomology", "Report H0, H1 and the H0 character");
    auto* decompose = app.add_subcommand("decompose", "Decompose H0 as an induced representation and certify it");
    for (auto* sub : {validate, cohomology, decompose}) sub->add_option("instance", input, "Instance file, or - for stdin");

    std::uint64_t seed = 0;
    std::size_t count = 100;
    std::size_t max_vertices = 8;
    std::size_t max_stalk_dim = 3;
    std::size_t min_stalk_dim = 0;
    std::string field;
    bool mutate_sign = false;
    std::string repro = "sheaftree-repro.json";
    auto* selftest = app.add_subcommand("selftest", "Run the randomized property suites");
    selftest->add_option("--seed", seed);
    selftest->add_option("--count", count);
    selftest->add_option("--max-vertices", max_vertices);
    selftest->add_option("--max-stalk-dim", max_stalk_dim);
    selftest->add_option("--field", field, "Q or Fp:<p>; alternates Q and Fp:5 when omitted");
    selftest->add_flag("--mutate-sign", mutate_sign, "Drop the orientation sign from the cochain action (must fail)");
    selftest->add_option("--repro", repro, "Where to dump a reproducing instance on failure");

    std::string constraint = "none";
    auto* random = app.add_subcommand("random", "Emit a random instance");
    random->add_option("--seed", seed);
    random->add_option("--max-vertices", max_vertices);
    random->add_option("--max-stalk-dim", max_stalk_dim);
    random->add_option("--min-stalk-dim", min_stalk_dim, "Lower bound on every vertex stalk dimension");
    random->add_option("--field", field, "Q or Fp:<p>");
    random->add_option("--constraint", constraint, "none, no-elliptic, multifacial or equivariant")
        ->check(CLI::IsMember({"none", "no-elliptic", "multifacial", "equivariant"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : sheaftree::kExitInvalidInput;
    }

    using namespace sheaftree;
    try {
        if (validate->parsed()) return emit(cmd_validate(read_input(input)), pretty, out);
        if (cohomology->parsed()) return emit(cmd_cohomology(read_input(input)), pretty, out);
        if (decompose->parsed()) return emit(cmd_decompose(read_input(input)), pretty, out);
        std::optional<Field> f;
        if (!field.empty()) f = Field::parse(field);
        if (selftest->parsed()) {
            return emit(cmd_selftest({seed, count, max_vertices, max_stalk_dim, f, mutate_sign, repro}), pretty, out);
        }
        RandomParams rp;
        rp.seed = seed;
        rp.gen.field = f.value_or(Field::rationals());
        rp.gen.max_vertices = max_vertices;
        rp.gen.max_stalk_dim = max_stalk_dim;
        rp.gen.min_stalk_dim = min_stalk_dim;
        rp.equivariant = constraint == "equivariant";
        rp.gen.constraint = rp.equivariant ? Constraint::None : parse_constraint(constraint);
        return emit(cmd_random(rp), pretty, out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    }
}
