#pragma once

// Property checks shared by the selftest command and the acceptance suite.
// Each check reports whether it applied and, if so, whether it held.

#include <optional>
#include <string>
#include <vector>

#include "sheaftree/equivariant.hpp"
#include "sheaftree/instance.hpp"
#include "sheaftree/sheaf.hpp"

namespace sheaftree {

struct PropertyCheck {
    bool applicable = true;
    bool ok = true;
    std::string detail;

    static PropertyCheck skip(std::string why) { return {false, true, std::move(why)}; }
    static PropertyCheck pass(std::string note = {}) { return {true, true, std::move(note)}; }
    static PropertyCheck fail(std::string why) { return {true, false, std::move(why)}; }
};

/// h0 - h1 = sum vdim - sum edim.
PropertyCheck prop_euler(const Sheaf& s);
/// H0 of the elliptic subsheaf has dimension sum dim S_v^ell and H1 of it is 0.
PropertyCheck prop_elliptic(const Sheaf& s);
/// With S^ell = 0: H1(S^uni) = 0, dim H0(S^uni) = sum dim T_e, connecting map invertible.
PropertyCheck prop_unifacial(const Sheaf& s);
/// Multifacial sheaves have no global sections.
PropertyCheck prop_multifacial(const Sheaf& s);
/// With S^ell = 0: every star block of R is square and invertible.
PropertyCheck prop_star_blocks(const Sheaf& s);
/// The six-term sequence of sub -> s -> s/sub is exact.
PropertyCheck prop_les(const Sheaf& s, const CellSubspaces& sub);

/// Coboundary commutes with the action under the given sign convention.
PropertyCheck prop_equivariance(const EquivariantSheaf& es, SignConvention sign = SignConvention::Oriented);
/// Dropping the orientation sign is caught whenever it changes anything.
PropertyCheck prop_mutation_detected(const EquivariantSheaf& es);
/// rep_on_h0 and rep_on_h1 are homomorphisms and H0 is invariant.
PropertyCheck prop_cohomology_reps(const EquivariantSheaf& es);
/// The decomposition either certifies or reports a verified reducibility witness;
/// runs with and without the irreducibility pre-check.
PropertyCheck prop_decompose(const EquivariantSheaf& es);

PropertyCheck prop_roundtrip(const Instance& inst);

struct PropertyTally {
    std::string name;
    std::size_t passed = 0;
    std::size_t failed = 0;
    std::size_t skipped = 0;
    std::vector<std::string> failures;    ///< first few failure details
    std::optional<std::string> reproducer;  ///< serialized instance of the first failure

    /// Records the outcome; `inst` is serialized for the first failure only.
    void record(const PropertyCheck& c, const Instance& inst);
    bool ok() const { return failed == 0; }
};

/// Runs `fn`, converting any exception into a failed check.
template <typename Fn>
PropertyCheck guarded(Fn fn) {
    try {
        return fn();
    } catch (const std::exception& err) {
        return PropertyCheck::fail(std::string("exception: ") + err.what());
    }
}

}  // namespace sheaftree
