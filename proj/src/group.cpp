#include "sheaftree/group.hpp"

#include <algorithm>
#include <set>

namespace sheaftree {

std::string to_string(GroupError::Kind kind) {
    switch (kind) {
        case GroupError::Kind::BadTable: return "BadTable";
        case GroupError::Kind::NoIdentity: return "NoIdentity";
        case GroupError::Kind::NotAssociative: return "NotAssociative";
        case GroupError::Kind::NoInverse: return "NoInverse";
        case GroupError::Kind::NotASubgroup: return "NotASubgroup";
        case GroupError::Kind::NotHomomorphism: return "NotHomomorphism";
        case GroupError::Kind::GroupMismatch: return "GroupMismatch";
    }
    return "?";
}

GroupTable::GroupTable(std::vector<std::vector<Element>> mul) : mul_(std::move(mul)) {
    const std::size_t n = mul_.size();
    if (n == 0) throw GroupError(GroupError::Kind::BadTable, {}, "group table is empty");
    for (Element g = 0; g < n; ++g) {
        if (mul_[g].size() != n) {
            throw GroupError(GroupError::Kind::BadTable, {g}, "row " + std::to_string(g) + " has wrong length");
        }
        for (Element h : mul_[g]) {
            if (h >= n) throw GroupError(GroupError::Kind::BadTable, {g}, "table entry out of range in row " + std::to_string(g));
        }
    }
    for (Element g = 0; g < n; ++g) {
        if (mul_[0][g] != g || mul_[g][0] != g) {
            throw GroupError(GroupError::Kind::NoIdentity, {g}, "element 0 is not an identity for " + std::to_string(g));
        }
    }
    for (Element a = 0; a < n; ++a) {
        for (Element b = 0; b < n; ++b) {
            for (Element c = 0; c < n; ++c) {
                if (mul_[mul_[a][b]][c] != mul_[a][mul_[b][c]]) {
                    throw GroupError(GroupError::Kind::NotAssociative, {a, b, c},
                                     "(ab)c != a(bc) for a=" + std::to_string(a) + " b=" + std::to_string(b) +
                                         " c=" + std::to_string(c));
                }
            }
        }
    }
    inv_.assign(n, n);
    for (Element g = 0; g < n; ++g) {
        for (Element h = 0; h < n; ++h) {
            if (mul_[g][h] == 0 && mul_[h][g] == 0) {
                inv_[g] = h;
                break;
            }
        }
        if (inv_[g] == n) throw GroupError(GroupError::Kind::NoInverse, {g}, "element " + std::to_string(g) + " has no inverse");
    }
}

std::vector<Element> GroupTable::all_elements() const {
    std::vector<Element> out(order());
    for (Element g = 0; g < order(); ++g) out[g] = g;
    return out;
}

void check_subgroup(const GroupTable& g, const std::vector<Element>& elements) {
    std::set<Element> members(elements.begin(), elements.end());
    if (!members.contains(0)) throw GroupError(GroupError::Kind::NotASubgroup, {}, "subgroup lacks the identity");
    for (Element a : members) {
        if (a >= g.order()) throw GroupError(GroupError::Kind::NotASubgroup, {a}, "element out of range");
        if (!members.contains(g.inv(a))) {
            throw GroupError(GroupError::Kind::NotASubgroup, {a}, "subgroup not closed under inverse of " + std::to_string(a));
        }
        for (Element b : members) {
            if (!members.contains(g.mul(a, b))) {
                throw GroupError(GroupError::Kind::NotASubgroup, {a, b},
                                 "subgroup not closed under product of " + std::to_string(a) + " and " + std::to_string(b));
            }
        }
    }
}

std::vector<Element> generators(const GroupTable& g, const std::vector<Element>& subgroup) {
    std::vector<Element> gens;
    std::set<Element> generated{0};
    for (Element x : subgroup) {
        if (generated.contains(x)) continue;
        gens.push_back(x);
        std::vector<Element> frontier(generated.begin(), generated.end());
        while (!frontier.empty()) {
            std::vector<Element> next;
            for (Element a : frontier) {
                for (Element s : gens) {
                    Element b = g.mul(a, s);
                    if (generated.insert(b).second) next.push_back(b);
                }
            }
            frontier = std::move(next);
        }
    }
    return gens;
}

const Matrix& Representation::operator()(Element g) const {
    auto it = std::lower_bound(elements.begin(), elements.end(), g);
    if (it == elements.end() || *it != g) {
        throw GroupError(GroupError::Kind::NotASubgroup, {g}, "element " + std::to_string(g) + " outside the represented subgroup");
    }
    return matrices[static_cast<std::size_t>(it - elements.begin())];
}

bool Representation::contains(Element g) const { return std::binary_search(elements.begin(), elements.end(), g); }

Representation Representation::trivial(GroupPtr group, std::vector<Element> elements, const Field& field,
                                       std::size_t dim) {
    Representation r{std::move(group), std::move(elements), field, dim, {}};
    r.matrices.assign(r.elements.size(), Matrix::identity(field, dim));
    return r;
}

void validate_representation(const Representation& rho) {
    if (!rho.group) throw GroupError(GroupError::Kind::BadTable, {}, "representation without a group");
    if (!std::is_sorted(rho.elements.begin(), rho.elements.end())) {
        throw GroupError(GroupError::Kind::NotASubgroup, {}, "representation elements must be sorted");
    }
    check_subgroup(*rho.group, rho.elements);
    if (rho.matrices.size() != rho.elements.size()) {
        throw GroupError(GroupError::Kind::NotHomomorphism, {}, "one matrix per element required");
    }
    for (std::size_t i = 0; i < rho.elements.size(); ++i) {
        const Matrix& m = rho.matrices[i];
        if (m.rows() != rho.dim || m.cols() != rho.dim || !(m.field() == rho.field)) {
            throw GroupError(GroupError::Kind::NotHomomorphism, {rho.elements[i]}, "matrix has wrong shape or field");
        }
    }
    if (!rho(0).is_identity()) throw GroupError(GroupError::Kind::NotHomomorphism, {0}, "identity does not act trivially");
    for (Element g : rho.elements) {
        for (Element h : rho.elements) {
            if (!(rho(g) * rho(h) == rho(rho.group->mul(g, h)))) {
                throw GroupError(GroupError::Kind::NotHomomorphism, {g, h},
                                 "rho(g)rho(h) != rho(gh) for g=" + std::to_string(g) + " h=" + std::to_string(h));
            }
        }
    }
}

bool same_domain(const Representation& a, const Representation& b) {
    return a.group && b.group && *a.group == *b.group && a.elements == b.elements && a.field == b.field;
}

}  // namespace sheaftree
