#pragma once

// Representation-theoretic utilities over exact fields: algebraic induction,
// intertwiner spaces, isomorphism certificates and irreducibility tests.

#include <optional>
#include <string>
#include <vector>

#include "sheaftree/group.hpp"

namespace sheaftree {

/// cInd_K^G sigma on functions f : G -> S with f(gk) = sigma(k)^{-1} f(g).
/// Basis vector (i, j) is supported on the coset g_i K with f(g_i) = e_j.
struct InducedRep {
    Representation base;
    std::vector<Element> transversal;  ///< least element of each left coset, in discovery order
    Representation total;
};

InducedRep induce(const Representation& sigma);

/// All A with rho2(g) A = A rho1(g), flattened row-major (A is dim2 x dim1).
Subspace hom_space(const Representation& rho1, const Representation& rho2);
Matrix unflatten(const Field& field, std::span<const Scalar> v, std::size_t rows, std::size_t cols);

/// rho2(g) A == A rho1(g) for every element.
bool is_intertwiner(const Representation& rho1, const Representation& rho2, const Matrix& a);

struct IsoResult {
    enum class Verdict { Isomorphic, NotIsomorphic, Inconclusive };
    Verdict verdict = Verdict::Inconclusive;
    std::optional<Matrix> witness;  ///< invertible intertwiner rho1 -> rho2
    std::string reason;
};

std::string to_string(IsoResult::Verdict v);

IsoResult is_isomorphic(const Representation& rho1, const Representation& rho2);

std::size_t commutant_dim(const Representation& rho);

struct IrreducibilityResult {
    enum class Verdict { Irreducible, Reducible, Inconclusive };
    Verdict verdict = Verdict::Inconclusive;
    std::optional<Subspace> witness;  ///< proper nonzero invariant subspace
    std::string reason;
};

std::string to_string(IrreducibilityResult::Verdict v);

IrreducibilityResult is_irreducible(const Representation& rho);

struct Character {
    std::vector<Element> elements;
    std::vector<Scalar> values;
    bool class_constant = true;
};

Character character(const Representation& rho);

/// Smallest invariant subspace containing `vectors`.
Subspace spin(const Representation& rho, const std::vector<Vector>& vectors);
bool is_invariant(const Representation& rho, const Subspace& sub);

/// Direct sum of representations of the same subgroup.
Representation direct_sum(const std::vector<Representation>& reps);

}  // namespace sheaftree
