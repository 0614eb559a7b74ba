#pragma once

// Command implementations behind the CLI. Each returns a deterministic JSON
// report together with the process exit status.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "sheaftree/generate.hpp"

namespace sheaftree {

enum ExitCode : int {
    kExitOk = 0,
    kExitInvalidInput = 1,
    kExitHypothesisViolated = 2,
    kExitCertificationFailed = 3,
    kExitInternal = 4,
};

struct Report {
    nlohmann::ordered_json body;
    int exit_code = kExitOk;

    std::string dump(bool pretty) const { return body.dump(pretty ? 2 : -1) + "\n"; }
};

/// Instance commands take the raw document so parse failures map to exit 1.
Report cmd_validate(std::string_view text);
Report cmd_cohomology(std::string_view text);
Report cmd_decompose(std::string_view text);

struct SelftestParams {
    std::uint64_t seed = 0;
    std::size_t count = 100;
    std::size_t max_vertices = 8;
    std::size_t max_stalk_dim = 3;
    std::optional<Field> field;  ///< alternate Q and F_5 when unset
    bool mutate_sign = false;    ///< run the equivariance suite without the orientation sign
    std::optional<std::string> repro_path;
};

Report cmd_selftest(const SelftestParams& params);

struct RandomParams {
    std::uint64_t seed = 0;
    GenParams gen;
    bool equivariant = false;
};

/// On success the report body is the instance document itself.
Report cmd_random(const RandomParams& params);

}  // namespace sheaftree
