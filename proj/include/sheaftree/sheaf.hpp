#pragma once

// Cellular sheaves on trees and their compactly supported cohomology.
//
// Coordinates: the total vertex space orders stalk blocks by ascending vertex
// id, the total edge space by ascending edge id; within a block, coordinates
// run 0..dim-1.

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sheaftree/exactla.hpp"
#include "sheaftree/tree.hpp"

namespace sheaftree {

class SheafError : public std::runtime_error {
public:
    enum class Kind { MissingRestriction, ShapeMismatch, FieldMismatch, NotASubsheaf, InvalidMap, InvalidSES };

    SheafError(Kind kind, std::optional<VertexId> v, std::optional<EdgeId> e, const std::string& what)
        : std::runtime_error(what), kind_(kind), vertex_(v), edge_(e) {}

    Kind kind() const { return kind_; }
    std::optional<VertexId> vertex() const { return vertex_; }
    std::optional<EdgeId> edge() const { return edge_; }

private:
    Kind kind_;
    std::optional<VertexId> vertex_;
    std::optional<EdgeId> edge_;
};

std::string to_string(SheafError::Kind kind);

struct Sheaf {
    Tree tree;
    Field field;
    std::vector<std::size_t> vdim;
    std::vector<std::size_t> edim;
    /// gamma_{v,e} : S_v -> S_e, an edim(e) x vdim(v) matrix, for each v < e.
    std::map<std::pair<VertexId, EdgeId>, Matrix> gamma;

    const Matrix& restriction(VertexId v, EdgeId e) const;
    std::size_t total_vertex_dim() const;
    std::size_t total_edge_dim() const;
    /// Start of each vertex block in the total vertex space.
    std::vector<std::size_t> vertex_offsets() const;
    std::vector<std::size_t> edge_offsets() const;

    friend bool operator==(const Sheaf&, const Sheaf&) = default;
};

/// Sheaf with the given stalk dimensions and all restrictions zero.
Sheaf zero_restrictions(const Tree& tree, const Field& field, std::vector<std::size_t> vdim,
                        std::vector<std::size_t> edim);

/// Throws SheafError (MissingRestriction, ShapeMismatch, FieldMismatch).
void validate_sheaf(const Sheaf& s);

/// Block (e, v) is OR(v, e) * gamma_{v,e}.
Matrix coboundary_matrix(const Sheaf& s);

struct CohomologyResult {
    Matrix coboundary;
    Subspace h0;          ///< kernel of the coboundary in the total vertex space
    Matrix h1_proj;       ///< total edge space -> chosen cokernel coordinates
    Matrix h1_section;    ///< cokernel coordinates -> total edge space
    std::size_t h0_dim = 0;
    std::size_t h1_dim = 0;
};

CohomologyResult cohomology(const Sheaf& s);
inline Subspace h0(const Sheaf& s) { return cohomology(s).h0; }

struct EulerCheck {
    long lhs = 0;  ///< h0_dim - h1_dim
    long rhs = 0;  ///< sum vdim - sum edim
};

EulerCheck euler_check(const Sheaf& s);

/// Per-cell linear maps between two sheaves on the same tree.
struct SheafMap {
    std::vector<Matrix> vertex_maps;
    std::vector<Matrix> edge_maps;
};

/// Throws InvalidMap if a shape is wrong or a restriction square fails to commute.
void validate_sheaf_map(const Sheaf& source, const Sheaf& target, const SheafMap& f);
Matrix total_vertex_map(const Field& field, const SheafMap& f);
Matrix total_edge_map(const Field& field, const SheafMap& f);

/// One subspace per cell; a subsheaf when closed under restriction.
struct CellSubspaces {
    std::vector<Subspace> vertex;
    std::vector<Subspace> edge;

    bool is_zero() const;
};

CellSubspaces zero_subspaces(const Sheaf& s);
CellSubspaces full_subspaces(const Sheaf& s);

/// Throws NotASubsheaf(v, e) when gamma_{v,e}(sub_v) is not inside sub_e.
void check_restriction_closed(const Sheaf& s, const CellSubspaces& sub);

/// The subsheaf on the rref bases of `sub` together with its inclusion map.
struct SubsheafResult {
    Sheaf sheaf;
    SheafMap inclusion;
};

SubsheafResult build_subsheaf(const Sheaf& s, const CellSubspaces& sub);

struct QuotientResult {
    Sheaf sheaf;
    SheafMap proj;     ///< s -> quotient, cellwise kernel = sub
    SheafMap section;  ///< cellwise right inverse of proj (not a sheaf map)
};

QuotientResult build_quotient(const Sheaf& s, const CellSubspaces& sub);

struct ShortExactSeq {
    Sheaf a;
    Sheaf b;
    Sheaf c;
    SheafMap inclusion;   ///< a -> b
    SheafMap projection;  ///< b -> c
};

/// Throws InvalidSES unless each cell is exact and both maps are sheaf maps.
void validate_ses(const ShortExactSeq& ses);

/// 0 -> H0A -> H0B -> H0C -> H1A -> H1B -> H1C -> 0
struct LesReport {
    Matrix h0_inclusion;   ///< H0A -> H0B
    Matrix h0_projection;  ///< H0B -> H0C
    Matrix delta;          ///< H0C -> H1A
    Matrix h1_inclusion;   ///< H1A -> H1B
    Matrix h1_projection;  ///< H1B -> H1C
    std::array<std::size_t, 6> dims{};
    std::array<bool, 6> exact_at{};
    CohomologyResult coh_a;
    CohomologyResult coh_b;
    CohomologyResult coh_c;

    bool exact() const;
};

LesReport les_connecting(const ShortExactSeq& ses);

}  // namespace sheaftree
