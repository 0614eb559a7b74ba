#pragma once

// Elliptic and unifacial parts of a sheaf on a tree, the auxiliary sheaves R
// and T, and the recursive decomposition of H0 as an induced representation.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sheaftree/equivariant.hpp"
#include "sheaftree/rep.hpp"
#include "sheaftree/sheaf.hpp"

namespace sheaftree {

class DecomposeError : public std::runtime_error {
public:
    enum class Kind {
        EllipticNonzero,
        ConstructionMismatch,
        HypothesisViolated,
        TheoremViolated,
        ZeroVector,
        CertificationFailed,
    };

    DecomposeError(Kind kind, const std::string& what, std::vector<std::size_t> ids = {},
                   std::optional<Subspace> witness = std::nullopt)
        : std::runtime_error(what), kind_(kind), ids_(std::move(ids)), witness_(std::move(witness)) {}

    Kind kind() const { return kind_; }
    const std::vector<std::size_t>& ids() const { return ids_; }
    /// For HypothesisViolated: a proper nonzero G-invariant subspace of H0,
    /// in coordinates of the rref basis of H0 of the input sheaf.
    const std::optional<Subspace>& witness() const { return witness_; }

private:
    Kind kind_;
    std::vector<std::size_t> ids_;
    std::optional<Subspace> witness_;
};

std::string to_string(DecomposeError::Kind kind);

/// Sum of vertex stalk dimensions over one representative per vertex orbit.
std::size_t rank0(const EquivariantSheaf& es);

/// S_v^ell = intersection of ker gamma_{v,e} over incident e; edge parts zero.
CellSubspaces elliptic_subsheaf(const Sheaf& s);

struct EllipticEntry {
    VertexId vertex = 0;  ///< orbit representative
    Representation sigma;  ///< G_x acting on S_x^ell, in its rref basis
    Subspace space;        ///< S_x^ell inside S_x
};

/// One entry per vertex orbit whose elliptic part is nonzero.
std::vector<EllipticEntry> elliptic_h0(const EquivariantSheaf& es);

struct UnifacialData {
    std::map<std::pair<VertexId, EdgeId>, Subspace> pair;  ///< S^uni_{v,e} inside S_v
    std::vector<Subspace> vertex;                          ///< S_v^uni
    std::vector<Subspace> edge;                            ///< S_e^uni
    std::vector<Subspace> from_x;                          ///< gamma_{x_e,e}(S^uni_{x_e,e})
    std::vector<Subspace> from_y;                          ///< gamma_{y_e,e}(S^uni_{y_e,e})
    bool elliptic_zero = true;

    CellSubspaces subsheaf() const { return {vertex, edge}; }
    bool is_zero() const;
};

/// Throws EllipticNonzero (naming a vertex) when S^ell != 0.
UnifacialData unifacial_data(const Sheaf& s);

struct RTConstruction {
    Sheaf r;
    Sheaf t;
    Sheaf uni;            ///< S^uni in the rref bases of u.vertex / u.edge
    ShortExactSeq ses;    ///< T -> R -> S^uni
    std::vector<Subspace> t_space;  ///< T_e inside S_e
    /// Coboundary of R restricted to the star of each vertex (square, invertible).
    std::vector<Matrix> star_blocks;
};

/// Throws ConstructionMismatch if a star block is singular or H0(R), H1(R) != 0.
RTConstruction build_R_T(const Sheaf& s, const UnifacialData& u);

struct EdgeEntry {
    EdgeId edge = 0;       ///< orbit representative
    Representation sigma;  ///< G_e acting on T_e: osgn(g,e) times the transported structure on T
};

struct TCohomology {
    std::vector<EdgeEntry> entries;  ///< edge orbits with T_e != 0
    EquivariantSheaf t_sheaf;
    EquivariantSheaf uni_sheaf;
    LesReport les;
};

/// Identifies H0(S^uni) with H1(T); throws EquivarianceError(EquivarianceBroken)
/// if the connecting map fails to commute with G.
TCohomology t_cohomology(const EquivariantSheaf& es, const UnifacialData& u, const RTConstruction& rt);

bool is_multifacial(const Sheaf& s);

struct LeafData {
    VertexId leaf = 0;
    std::vector<std::pair<EdgeId, Vector>> restrictions;  ///< gamma_{v,e}(s_v) for every incident e
};

struct SupportWitness {
    std::set<VertexId> support;
    Subtree hull;
    std::vector<VertexId> leaves;
    std::vector<LeafData> leaf_data;
};

/// Throws ZeroVector for the zero vector; h0_vector is in the total vertex space.
SupportWitness support_witness(const Sheaf& s, const Vector& h0_vector);

enum class TraceStep { Elliptic, UnifacialKept, QuotientRecursed };
std::string to_string(TraceStep step);

struct DecompositionResult {
    enum class Variant { Zero, VertexInduced, EdgeInduced };
    Variant variant = Variant::Zero;
    std::size_t cell = 0;               ///< vertex or edge id
    std::vector<Element> stabilizer;
    std::optional<Representation> sigma;
    std::vector<TraceStep> trace;
    std::size_t initial_rank0 = 0;
    std::size_t h0_dim = 0;
    std::optional<IrreducibilityResult> irreducibility;
    std::vector<std::string> warnings;
};

std::string to_string(DecompositionResult::Variant v);

struct DecomposeOptions {
    /// Consult is_irreducible before recursing; a Reducible verdict is
    /// reported as HypothesisViolated with its witness.
    bool check_irreducible = true;
};

DecompositionResult induction_decompose(const EquivariantSheaf& es, const DecomposeOptions& opts = {});

struct Certificate {
    std::optional<InducedRep> induced;
    Representation h0;
    std::optional<Matrix> intertwiner;  ///< rho_ind(g) A = A rho_H0(g)
    std::string reason;
};

/// Throws CertificationFailed when no verified invertible intertwiner is found.
Certificate verify_decomposition(const EquivariantSheaf& es, const DecompositionResult& r);

}  // namespace sheaftree
