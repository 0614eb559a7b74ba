#pragma once

// Deterministic random trees, sheaves, subsheaves and equivariant instances.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "sheaftree/equivariant.hpp"
#include "sheaftree/sheaf.hpp"

namespace sheaftree {

using Rng = std::mt19937_64;

class InfeasibleConstraint : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Constraint { None, NoElliptic, Multifacial };

std::string to_string(Constraint c);
/// "none", "no-elliptic", "multifacial"; throws std::invalid_argument.
Constraint parse_constraint(const std::string& text);

struct GenParams {
    Field field = Field::rationals();
    std::size_t max_vertices = 8;
    std::size_t max_stalk_dim = 3;
    /// Lower bound on every vertex stalk dimension.
    std::size_t min_stalk_dim = 0;
    Constraint constraint = Constraint::None;
};

/// Uniform random attachment tree with shuffled labels and random orientations.
Tree random_tree(Rng& rng, std::size_t vertices);

/// Throws InfeasibleConstraint when the constraint contradicts the bounds.
Sheaf random_sheaf(Rng& rng, const GenParams& params);

/// Random restriction-closed subsheaf (vertex subspaces first, edges closed up).
CellSubspaces random_subsheaf(Rng& rng, const Sheaf& s);

/// A tree with a group given by generating vertex permutations.
struct CatalogAction {
    std::string name;
    Tree tree;
    std::vector<std::vector<VertexId>> generators;
};

/// Catalog entries: trivial group on a random tree, C2 on paths, C3 and S3 on
/// the 3-star and a 3-spider, D4 on the 4-star, C2 on binary trees of depth <= 3.
std::vector<std::string> catalog_names();
CatalogAction catalog_action(Rng& rng, const std::string& name, std::size_t max_vertices);

/// Group closure of the generators with the induced edge action.
struct PermutationGroup {
    GroupPtr group;
    TreeAction action;
};

PermutationGroup close_action(const Tree& tree, const std::vector<std::vector<VertexId>>& generators);

/// Random equivariant sheaf for the action: random stalk representations on
/// orbit representatives, transported by induction, and random equivariant
/// restrictions on flag-orbit representatives.
EquivariantSheaf random_equivariant(Rng& rng, const Tree& tree, const PermutationGroup& pg, const Field& field,
                                    std::size_t max_stalk_dim);

EquivariantSheaf random_catalog_instance(Rng& rng, const Field& field, std::size_t max_vertices, std::size_t max_stalk_dim);

/// Matrix with entries drawn uniformly from [-bound, bound].
Matrix random_matrix(Rng& rng, const Field& f, std::size_t rows, std::size_t cols, long bound = 2);

}  // namespace sheaftree
