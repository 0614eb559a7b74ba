#include "sheaftree/equivariant.hpp"

#include <algorithm>
#include <memory>
#include <set>

namespace sheaftree {

namespace {

std::string ids_string(std::initializer_list<std::size_t> ids) {
    std::string out;
    for (auto id : ids) out += (out.empty() ? "" : ",") + std::to_string(id);
    return "(" + out + ")";
}

bool is_permutation_of_range(const std::vector<std::size_t>& perm, std::size_t n) {
    if (perm.size() != n) return false;
    std::vector<bool> hit(n, false);
    for (auto p : perm) {
        if (p >= n || hit[p]) return false;
        hit[p] = true;
    }
    return true;
}

Matrix coords_or_throw(const Subspace& sub, const Matrix& cols, std::optional<Element> g, const std::string& where) {
    auto m = coordinates_of_columns(sub, cols);
    if (!m) throw EquivarianceError(EquivarianceError::Kind::NotInvariant, g, where + " is not invariant");
    return *m;
}

}  // namespace

std::string to_string(ActionError::Kind kind) {
    switch (kind) {
        case ActionError::Kind::ShapeMismatch: return "ShapeMismatch";
        case ActionError::Kind::NotPermutation: return "NotPermutation";
        case ActionError::Kind::NotHomomorphism: return "NotHomomorphism";
        case ActionError::Kind::IncidenceBroken: return "IncidenceBroken";
        case ActionError::Kind::EtaIdentity: return "EtaIdentity";
        case ActionError::Kind::EtaComposition: return "EtaComposition";
        case ActionError::Kind::EtaGammaSquare: return "EtaGammaSquare";
        case ActionError::Kind::UnknownCell: return "UnknownCell";
    }
    return "?";
}

void validate_tree_action(const Tree& tree, const GroupTable& group, const TreeAction& action) {
    const std::size_t n = group.order();
    if (action.vertex_perm.size() != n || action.edge_perm.size() != n) {
        throw ActionError(ActionError::Kind::ShapeMismatch, {}, "action needs one permutation pair per group element");
    }
    for (Element g = 0; g < n; ++g) {
        if (!is_permutation_of_range(action.vertex_perm[g], tree.vertex_count()) ||
            !is_permutation_of_range(action.edge_perm[g], tree.edge_count())) {
            throw ActionError(ActionError::Kind::NotPermutation, {g},
                              "element " + std::to_string(g) + " does not act by permutations");
        }
    }
    for (Element g = 0; g < n; ++g) {
        for (Element h = 0; h < n; ++h) {
            Element gh = group.mul(g, h);
            bool ok = true;
            for (VertexId v = 0; v < tree.vertex_count() && ok; ++v) ok = action.act(g, action.act(h, v)) == action.act(gh, v);
            for (EdgeId e = 0; e < tree.edge_count() && ok; ++e) {
                ok = action.act_edge(g, action.act_edge(h, e)) == action.act_edge(gh, e);
            }
            if (!ok) {
                throw ActionError(ActionError::Kind::NotHomomorphism, {g, h},
                                  "action is not a homomorphism at (g,h)=" + ids_string({g, h}));
            }
        }
    }
    for (Element g = 0; g < n; ++g) {
        for (const Edge& e : tree.edges()) {
            const Edge& ge = tree.edge(action.act_edge(g, e.id));
            auto image = std::minmax({action.act(g, e.x), action.act(g, e.y)});
            if (image != std::minmax({ge.x, ge.y})) {
                throw ActionError(ActionError::Kind::IncidenceBroken, {g, e.id},
                                  "action does not preserve incidence at (g,e)=" + ids_string({g, e.id}));
            }
        }
    }
}

void validate_action(const EquivariantSheaf& es) {
    if (!es.group) throw ActionError(ActionError::Kind::ShapeMismatch, {}, "equivariant sheaf without a group");
    const GroupTable& group = *es.group;
    const Sheaf& s = es.sheaf;
    const Tree& t = s.tree;
    validate_tree_action(t, group, es.action);
    const std::size_t n = group.order();
    if (es.eta_vertex.size() != n || es.eta_edge.size() != n) {
        throw ActionError(ActionError::Kind::ShapeMismatch, {}, "eta needs one entry per group element");
    }
    for (Element g = 0; g < n; ++g) {
        if (es.eta_vertex[g].size() != t.vertex_count() || es.eta_edge[g].size() != t.edge_count()) {
            throw ActionError(ActionError::Kind::ShapeMismatch, {g}, "eta needs one matrix per cell");
        }
        for (VertexId v = 0; v < t.vertex_count(); ++v) {
            const Matrix& m = es.eta_vertex[g][v];
            if (m.rows() != s.vdim[es.action.act(g, v)] || m.cols() != s.vdim[v] || !(m.field() == s.field)) {
                throw ActionError(ActionError::Kind::ShapeMismatch, {g, v},
                                  "eta at (g,vertex)=" + ids_string({g, v}) + " has the wrong shape");
            }
        }
        for (EdgeId e = 0; e < t.edge_count(); ++e) {
            const Matrix& m = es.eta_edge[g][e];
            if (m.rows() != s.edim[es.action.act_edge(g, e)] || m.cols() != s.edim[e] || !(m.field() == s.field)) {
                throw ActionError(ActionError::Kind::ShapeMismatch, {g, e},
                                  "eta at (g,edge)=" + ids_string({g, e}) + " has the wrong shape");
            }
        }
    }
    for (VertexId v = 0; v < t.vertex_count(); ++v) {
        if (!es.eta_vertex[0][v].is_identity()) {
            throw ActionError(ActionError::Kind::EtaIdentity, {v}, "eta_{1,v} is not the identity at vertex " + std::to_string(v));
        }
    }
    for (EdgeId e = 0; e < t.edge_count(); ++e) {
        if (!es.eta_edge[0][e].is_identity()) {
            throw ActionError(ActionError::Kind::EtaIdentity, {e}, "eta_{1,e} is not the identity at edge " + std::to_string(e));
        }
    }
    for (Element g = 0; g < n; ++g) {
        for (Element h = 0; h < n; ++h) {
            Element gh = group.mul(g, h);
            for (VertexId v = 0; v < t.vertex_count(); ++v) {
                if (!(es.eta_vertex[g][es.action.act(h, v)] * es.eta_vertex[h][v] == es.eta_vertex[gh][v])) {
                    throw ActionError(ActionError::Kind::EtaComposition, {g, h, v},
                                      "eta_{g,hv} eta_{h,v} != eta_{gh,v} at (g,h,vertex)=" + ids_string({g, h, v}));
                }
            }
            for (EdgeId e = 0; e < t.edge_count(); ++e) {
                if (!(es.eta_edge[g][es.action.act_edge(h, e)] * es.eta_edge[h][e] == es.eta_edge[gh][e])) {
                    throw ActionError(ActionError::Kind::EtaComposition, {g, h, e},
                                      "eta_{g,he} eta_{h,e} != eta_{gh,e} at (g,h,edge)=" + ids_string({g, h, e}));
                }
            }
        }
    }
    for (Element g = 0; g < n; ++g) {
        for (const Edge& e : t.edges()) {
            EdgeId ge = es.action.act_edge(g, e.id);
            for (VertexId v : {e.x, e.y}) {
                VertexId gv = es.action.act(g, v);
                if (!(s.restriction(gv, ge) * es.eta_vertex[g][v] == es.eta_edge[g][e.id] * s.restriction(v, e.id))) {
                    throw ActionError(ActionError::Kind::EtaGammaSquare, {g, v, e.id},
                                      "gamma_{gv,ge} eta_{g,v} != eta_{g,e} gamma_{v,e} at (g,v,e)=" +
                                          ids_string({g, v, e.id}));
                }
            }
        }
    }
}

std::vector<Orbit> orbits(const TreeAction& action, CellKind kind) {
    const auto& perms = kind == CellKind::Vertex ? action.vertex_perm : action.edge_perm;
    std::vector<Orbit> out;
    if (perms.empty()) return out;
    const std::size_t cells = perms[0].size();
    std::vector<bool> seen(cells, false);
    for (std::size_t c = 0; c < cells; ++c) {
        if (seen[c]) continue;
        std::set<std::size_t> members;
        for (const auto& perm : perms) members.insert(perm[c]);
        for (auto m : members) seen[m] = true;
        out.push_back({c, std::vector<std::size_t>(members.begin(), members.end())});
    }
    return out;
}

std::vector<Element> stabilizer(const TreeAction& action, Cell cell) {
    const auto& perms = cell.kind == CellKind::Vertex ? action.vertex_perm : action.edge_perm;
    if (perms.empty() || cell.id >= perms[0].size()) {
        throw ActionError(ActionError::Kind::UnknownCell, {cell.id}, "unknown cell " + std::to_string(cell.id));
    }
    std::vector<Element> out;
    for (Element g = 0; g < perms.size(); ++g) {
        if (perms[g][cell.id] == cell.id) out.push_back(g);
    }
    return out;
}

int osgn(const Tree& tree, const TreeAction& action, Element g, EdgeId e) {
    return action.act(g, tree.edge(e).x) == tree.edge(action.act_edge(g, e)).x ? 1 : -1;
}

std::vector<SignedElement> orientation_character(const Tree& tree, const TreeAction& action, EdgeId e) {
    std::vector<SignedElement> out;
    for (Element g : stabilizer(action, {CellKind::Edge, e})) out.push_back({g, osgn(tree, action, g, e)});
    return out;
}

Matrix vertex_action_matrix(const EquivariantSheaf& es, Element g) {
    const Sheaf& s = es.sheaf;
    auto off = s.vertex_offsets();
    Matrix p(s.field, s.total_vertex_dim(), s.total_vertex_dim());
    for (VertexId v = 0; v < s.tree.vertex_count(); ++v) p.set_block(off[es.action.act(g, v)], off[v], es.eta_vertex[g][v]);
    return p;
}

Matrix edge_action_matrix(const EquivariantSheaf& es, Element g, SignConvention sign) {
    const Sheaf& s = es.sheaf;
    auto off = s.edge_offsets();
    Matrix p(s.field, s.total_edge_dim(), s.total_edge_dim());
    for (EdgeId e = 0; e < s.tree.edge_count(); ++e) {
        Matrix block = es.eta_edge[g][e];
        if (sign == SignConvention::Oriented && osgn(s.tree, es.action, g, e) < 0) block = -block;
        p.set_block(off[es.action.act_edge(g, e)], off[e], block);
    }
    return p;
}

void check_coboundary_equivariance(const EquivariantSheaf& es, SignConvention sign) {
    Matrix d = coboundary_matrix(es.sheaf);
    for (Element g = 0; g < es.group->order(); ++g) {
        if (!(d * vertex_action_matrix(es, g) == edge_action_matrix(es, g, sign) * d)) {
            throw EquivarianceError(EquivarianceError::Kind::EquivarianceBroken, g,
                                    "coboundary is not equivariant for element " + std::to_string(g));
        }
    }
}

Representation stalk_representation(const EquivariantSheaf& es, Cell cell) {
    Representation r;
    r.group = es.group;
    r.elements = stabilizer(es.action, cell);
    r.field = es.field();
    r.dim = cell.kind == CellKind::Vertex ? es.sheaf.vdim[cell.id] : es.sheaf.edim[cell.id];
    for (Element g : r.elements) {
        r.matrices.push_back(cell.kind == CellKind::Vertex ? es.eta_vertex[g][cell.id] : es.eta_edge[g][cell.id]);
    }
    return r;
}

Representation rep_on_h0(const EquivariantSheaf& es) { return rep_on_h0(es, cohomology(es.sheaf)); }

Representation rep_on_h0(const EquivariantSheaf& es, const CohomologyResult& coh) {
    Representation r;
    r.group = es.group;
    r.elements = es.group->all_elements();
    r.field = es.field();
    r.dim = coh.h0_dim;
    Matrix basis = coh.h0.basis().transpose();
    for (Element g : r.elements) {
        r.matrices.push_back(coords_or_throw(coh.h0, vertex_action_matrix(es, g) * basis, g, "H0"));
    }
    return r;
}

Representation rep_on_h1(const EquivariantSheaf& es, SignConvention sign) {
    check_coboundary_equivariance(es, sign);
    CohomologyResult coh = cohomology(es.sheaf);
    Representation r;
    r.group = es.group;
    r.elements = es.group->all_elements();
    r.field = es.field();
    r.dim = coh.h1_dim;
    for (Element g : r.elements) r.matrices.push_back(coh.h1_proj * edge_action_matrix(es, g, sign) * coh.h1_section);
    return r;
}

Representation restrict_representation(const Representation& rho, const Subspace& sub) {
    Representation r{rho.group, rho.elements, rho.field, sub.dim(), {}};
    Matrix basis = sub.basis().transpose();
    for (std::size_t i = 0; i < rho.elements.size(); ++i) {
        r.matrices.push_back(coords_or_throw(sub, rho.matrices[i] * basis, rho.elements[i], "subspace"));
    }
    return r;
}

EquivariantSheaf restrict_to_subsheaf(const EquivariantSheaf& es, const CellSubspaces& sub) {
    SubsheafResult s = build_subsheaf(es.sheaf, sub);
    EquivariantSheaf out{std::move(s.sheaf), es.group, es.action, {}, {}};
    const Tree& t = es.tree();
    for (Element g = 0; g < es.group->order(); ++g) {
        std::vector<Matrix> ev;
        for (VertexId v = 0; v < t.vertex_count(); ++v) {
            ev.push_back(coords_or_throw(sub.vertex[es.action.act(g, v)], es.eta_vertex[g][v] * s.inclusion.vertex_maps[v], g,
                                         "subsheaf at vertex " + std::to_string(v)));
        }
        std::vector<Matrix> ee;
        for (EdgeId e = 0; e < t.edge_count(); ++e) {
            ee.push_back(coords_or_throw(sub.edge[es.action.act_edge(g, e)], es.eta_edge[g][e] * s.inclusion.edge_maps[e], g,
                                         "subsheaf at edge " + std::to_string(e)));
        }
        out.eta_vertex.push_back(std::move(ev));
        out.eta_edge.push_back(std::move(ee));
    }
    return out;
}

EquivariantQuotient quotient_by_subsheaf(const EquivariantSheaf& es, const CellSubspaces& sub) {
    const Tree& t = es.tree();
    for (Element g = 0; g < es.group->order(); ++g) {
        for (VertexId v = 0; v < t.vertex_count(); ++v) {
            if (!sub.vertex[es.action.act(g, v)].contains(image(es.eta_vertex[g][v], sub.vertex[v]))) {
                throw EquivarianceError(EquivarianceError::Kind::NotInvariant, g,
                                        "subsheaf not invariant at vertex " + std::to_string(v));
            }
        }
        for (EdgeId e = 0; e < t.edge_count(); ++e) {
            if (!sub.edge[es.action.act_edge(g, e)].contains(image(es.eta_edge[g][e], sub.edge[e]))) {
                throw EquivarianceError(EquivarianceError::Kind::NotInvariant, g,
                                        "subsheaf not invariant at edge " + std::to_string(e));
            }
        }
    }
    QuotientResult q = build_quotient(es.sheaf, sub);
    EquivariantQuotient out{{q.sheaf, es.group, es.action, {}, {}}, q};
    for (Element g = 0; g < es.group->order(); ++g) {
        std::vector<Matrix> ev;
        for (VertexId v = 0; v < t.vertex_count(); ++v) {
            ev.push_back(q.proj.vertex_maps[es.action.act(g, v)] * es.eta_vertex[g][v] * q.section.vertex_maps[v]);
        }
        std::vector<Matrix> ee;
        for (EdgeId e = 0; e < t.edge_count(); ++e) {
            ee.push_back(q.proj.edge_maps[es.action.act_edge(g, e)] * es.eta_edge[g][e] * q.section.edge_maps[e]);
        }
        out.sheaf.eta_vertex.push_back(std::move(ev));
        out.sheaf.eta_edge.push_back(std::move(ee));
    }
    return out;
}

EquivariantSheaf with_trivial_group(const Sheaf& s) {
    EquivariantSheaf es;
    es.sheaf = s;
    es.group = std::make_shared<const GroupTable>(std::vector<std::vector<Element>>{{0}});
    std::vector<VertexId> vid(s.tree.vertex_count());
    for (VertexId v = 0; v < vid.size(); ++v) vid[v] = v;
    std::vector<EdgeId> eid(s.tree.edge_count());
    for (EdgeId e = 0; e < eid.size(); ++e) eid[e] = e;
    es.action = {{vid}, {eid}};
    std::vector<Matrix> ev;
    for (auto d : s.vdim) ev.push_back(Matrix::identity(s.field, d));
    std::vector<Matrix> ee;
    for (auto d : s.edim) ee.push_back(Matrix::identity(s.field, d));
    es.eta_vertex = {ev};
    es.eta_edge = {ee};
    return es;
}

}  // namespace sheaftree
