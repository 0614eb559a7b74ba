#pragma once

// Group actions on trees and equivariant structures on sheaves.
//
// A 1-cochain c transforms as (g.c)_{ge} = osgn(g,e) eta_{g,e}(c_e), where
// osgn(g,e) = -1 when g reverses the stored orientation of e. Without this
// sign the coboundary is not equivariant, so it is checked rather than assumed.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sheaftree/group.hpp"
#include "sheaftree/sheaf.hpp"

namespace sheaftree {

struct TreeAction {
    std::vector<std::vector<VertexId>> vertex_perm;  ///< [g][v] = g.v
    std::vector<std::vector<EdgeId>> edge_perm;      ///< [g][e] = g.e

    VertexId act(Element g, VertexId v) const { return vertex_perm[g][v]; }
    EdgeId act_edge(Element g, EdgeId e) const { return edge_perm[g][e]; }

    friend bool operator==(const TreeAction&, const TreeAction&) = default;
};

struct EquivariantSheaf {
    Sheaf sheaf;
    GroupPtr group;
    TreeAction action;
    std::vector<std::vector<Matrix>> eta_vertex;  ///< [g][v] : S_v -> S_{gv}
    std::vector<std::vector<Matrix>> eta_edge;    ///< [g][e] : S_e -> S_{ge}

    const Field& field() const { return sheaf.field; }
    const Tree& tree() const { return sheaf.tree; }
};

class ActionError : public std::runtime_error {
public:
    enum class Kind {
        ShapeMismatch,
        NotPermutation,
        NotHomomorphism,
        IncidenceBroken,
        EtaIdentity,
        EtaComposition,
        EtaGammaSquare,
        UnknownCell,
    };

    ActionError(Kind kind, std::vector<std::size_t> ids, const std::string& what)
        : std::runtime_error(what), kind_(kind), ids_(std::move(ids)) {}

    Kind kind() const { return kind_; }
    const std::vector<std::size_t>& ids() const { return ids_; }

private:
    Kind kind_;
    std::vector<std::size_t> ids_;
};

std::string to_string(ActionError::Kind kind);

/// Internal consistency failures; valid input never raises these.
class EquivarianceError : public std::runtime_error {
public:
    enum class Kind { NotInvariant, EquivarianceBroken };

    EquivarianceError(Kind kind, std::optional<Element> g, const std::string& what)
        : std::runtime_error(what), kind_(kind), element_(g) {}

    Kind kind() const { return kind_; }
    std::optional<Element> element() const { return element_; }

private:
    Kind kind_;
    std::optional<Element> element_;
};

/// Permutation and homomorphism checks plus incidence preservation.
void validate_tree_action(const Tree& tree, const GroupTable& group, const TreeAction& action);
/// Every axiom, exhaustively over (g, h, cell).
void validate_action(const EquivariantSheaf& es);

enum class CellKind { Vertex, Edge };

struct Cell {
    CellKind kind = CellKind::Vertex;
    std::size_t id = 0;
};

struct Orbit {
    std::size_t representative = 0;  ///< least id in the orbit
    std::vector<std::size_t> members;
};

/// Orbits sorted by representative.
std::vector<Orbit> orbits(const TreeAction& action, CellKind kind);
/// Sorted stabilizer; an edge is stabilized setwise.
std::vector<Element> stabilizer(const TreeAction& action, Cell cell);

/// +1 if g.x_e = x_{ge}, else -1.
int osgn(const Tree& tree, const TreeAction& action, Element g, EdgeId e);

struct SignedElement {
    Element element = 0;
    int sign = 1;
};

/// epsilon_e on the stabilizer of e: +1 if endpoints are fixed, -1 if swapped.
std::vector<SignedElement> orientation_character(const Tree& tree, const TreeAction& action, EdgeId e);

/// Whether the cochain action carries the orientation sign. Dropping it is
/// only useful for exercising the equivariance check.
enum class SignConvention { Oriented, Unsigned };

/// Action of g on the total vertex space.
Matrix vertex_action_matrix(const EquivariantSheaf& es, Element g);
/// Action of g on the total edge space (1-cochains).
Matrix edge_action_matrix(const EquivariantSheaf& es, Element g, SignConvention sign = SignConvention::Oriented);

/// Throws EquivarianceBroken(g) if coboundary * P0(g) != P1(g) * coboundary.
void check_coboundary_equivariance(const EquivariantSheaf& es, SignConvention sign = SignConvention::Oriented);

/// Action of the stabilizer of `cell` on its stalk.
Representation stalk_representation(const EquivariantSheaf& es, Cell cell);

/// Representation of G on H0 expressed in the rref basis of kernel(coboundary).
Representation rep_on_h0(const EquivariantSheaf& es);
Representation rep_on_h0(const EquivariantSheaf& es, const CohomologyResult& coh);
/// Representation of G on H1 in the cokernel coordinates of cohomology().
Representation rep_on_h1(const EquivariantSheaf& es, SignConvention sign = SignConvention::Oriented);

/// Restriction of the representation on a vector space to an invariant
/// subspace, in the subspace's rref basis; throws NotInvariant.
Representation restrict_representation(const Representation& rho, const Subspace& sub);

/// Equivariant structure on an invariant subsheaf (throws NotInvariant).
EquivariantSheaf restrict_to_subsheaf(const EquivariantSheaf& es, const CellSubspaces& sub);

struct EquivariantQuotient {
    EquivariantSheaf sheaf;
    QuotientResult maps;
};

/// Quotient by an invariant subsheaf with the induced equivariant structure.
EquivariantQuotient quotient_by_subsheaf(const EquivariantSheaf& es, const CellSubspaces& sub);

/// Trivial group acting on a sheaf.
EquivariantSheaf with_trivial_group(const Sheaf& s);

}  // namespace sheaftree
