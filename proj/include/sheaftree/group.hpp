#pragma once

// Finite groups given by multiplication tables, and matrix representations
// of their subgroups.

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "sheaftree/exactla.hpp"

namespace sheaftree {

/// Group elements are 0..order-1 with 0 the identity.
using Element = std::size_t;

class GroupError : public std::runtime_error {
public:
    enum class Kind { BadTable, NoIdentity, NotAssociative, NoInverse, NotASubgroup, NotHomomorphism, GroupMismatch };

    GroupError(Kind kind, std::vector<Element> elements, const std::string& what)
        : std::runtime_error(what), kind_(kind), elements_(std::move(elements)) {}

    Kind kind() const { return kind_; }
    const std::vector<Element>& elements() const { return elements_; }

private:
    Kind kind_;
    std::vector<Element> elements_;
};

std::string to_string(GroupError::Kind kind);

class GroupTable {
public:
    /// Validates exhaustively (identity, full associativity, inverses).
    explicit GroupTable(std::vector<std::vector<Element>> mul);

    std::size_t order() const { return mul_.size(); }
    Element mul(Element g, Element h) const { return mul_[g][h]; }
    Element inv(Element g) const { return inv_[g]; }
    const std::vector<std::vector<Element>>& table() const { return mul_; }
    std::vector<Element> all_elements() const;

    friend bool operator==(const GroupTable& a, const GroupTable& b) { return a.mul_ == b.mul_; }

private:
    std::vector<std::vector<Element>> mul_;
    std::vector<Element> inv_;
};

using GroupPtr = std::shared_ptr<const GroupTable>;

/// Throws NotASubgroup unless `elements` is closed under products and inverses.
void check_subgroup(const GroupTable& g, const std::vector<Element>& elements);

/// Greedy generating set: ascending elements not already generated.
std::vector<Element> generators(const GroupTable& g, const std::vector<Element>& subgroup);

/// Representation of the subgroup `elements` (sorted) on field^dim.
struct Representation {
    GroupPtr group;
    std::vector<Element> elements;
    Field field;
    std::size_t dim = 0;
    std::vector<Matrix> matrices;  ///< parallel to `elements`

    const Matrix& operator()(Element g) const;
    bool contains(Element g) const;

    static Representation trivial(GroupPtr group, std::vector<Element> elements, const Field& field,
                                  std::size_t dim);
};

/// Throws GroupError (NotHomomorphism, NotASubgroup) on failure.
void validate_representation(const Representation& rho);

/// Same group table and same element list.
bool same_domain(const Representation& a, const Representation& b);

}  // namespace sheaftree
