#include "sheaftree/sheaf.hpp"

#include <algorithm>

namespace sheaftree {

namespace {

std::string cell_pair(VertexId v, EdgeId e) {
    return "(" + std::to_string(v) + "," + std::to_string(e) + ")";
}

void require_same_tree(const Sheaf& a, const Sheaf& b, const char* what) {
    if (!(a.tree == b.tree)) {
        throw SheafError(SheafError::Kind::InvalidMap, std::nullopt, std::nullopt,
                         std::string(what) + ": sheaves live on different trees");
    }
}

}  // namespace

std::string to_string(SheafError::Kind kind) {
    switch (kind) {
        case SheafError::Kind::MissingRestriction: return "MissingRestriction";
        case SheafError::Kind::ShapeMismatch: return "ShapeMismatch";
        case SheafError::Kind::FieldMismatch: return "FieldMismatch";
        case SheafError::Kind::NotASubsheaf: return "NotASubsheaf";
        case SheafError::Kind::InvalidMap: return "InvalidMap";
        case SheafError::Kind::InvalidSES: return "InvalidSES";
    }
    return "?";
}

const Matrix& Sheaf::restriction(VertexId v, EdgeId e) const {
    auto it = gamma.find({v, e});
    if (it == gamma.end()) {
        throw SheafError(SheafError::Kind::MissingRestriction, v, e, "missing restriction " + cell_pair(v, e));
    }
    return it->second;
}

std::size_t Sheaf::total_vertex_dim() const {
    std::size_t n = 0;
    for (auto d : vdim) n += d;
    return n;
}

std::size_t Sheaf::total_edge_dim() const {
    std::size_t n = 0;
    for (auto d : edim) n += d;
    return n;
}

std::vector<std::size_t> Sheaf::vertex_offsets() const {
    std::vector<std::size_t> off(vdim.size() + 1, 0);
    for (std::size_t v = 0; v < vdim.size(); ++v) off[v + 1] = off[v] + vdim[v];
    return off;
}

std::vector<std::size_t> Sheaf::edge_offsets() const {
    std::vector<std::size_t> off(edim.size() + 1, 0);
    for (std::size_t e = 0; e < edim.size(); ++e) off[e + 1] = off[e] + edim[e];
    return off;
}

Sheaf zero_restrictions(const Tree& tree, const Field& field, std::vector<std::size_t> vdim,
                        std::vector<std::size_t> edim) {
    Sheaf s{tree, field, std::move(vdim), std::move(edim), {}};
    for (const Edge& e : tree.edges()) {
        s.gamma[{e.x, e.id}] = Matrix(field, s.edim[e.id], s.vdim[e.x]);
        s.gamma[{e.y, e.id}] = Matrix(field, s.edim[e.id], s.vdim[e.y]);
    }
    return s;
}

void validate_sheaf(const Sheaf& s) {
    const Tree& t = s.tree;
    if (s.vdim.size() != t.vertex_count() || s.edim.size() != t.edge_count()) {
        throw SheafError(SheafError::Kind::ShapeMismatch, std::nullopt, std::nullopt,
                         "stalk dimension lists do not match the tree");
    }
    for (const auto& [key, m] : s.gamma) {
        auto [v, e] = key;
        if (!t.incident(v, e)) {
            throw SheafError(SheafError::Kind::MissingRestriction, v, e,
                             "restriction " + cell_pair(v, e) + " given for a non-incident pair");
        }
    }
    for (const Edge& e : t.edges()) {
        for (VertexId v : {e.x, e.y}) {
            auto it = s.gamma.find({v, e.id});
            if (it == s.gamma.end()) {
                throw SheafError(SheafError::Kind::MissingRestriction, v, e.id,
                                 "missing restriction " + cell_pair(v, e.id));
            }
            const Matrix& m = it->second;
            if (!(m.field() == s.field)) {
                throw SheafError(SheafError::Kind::FieldMismatch, v, e.id,
                                 "restriction " + cell_pair(v, e.id) + " is over " + m.field().to_string());
            }
            if (m.rows() != s.edim[e.id] || m.cols() != s.vdim[v]) {
                throw SheafError(SheafError::Kind::ShapeMismatch, v, e.id,
                                 "restriction " + cell_pair(v, e.id) + " is " + std::to_string(m.rows()) + "x" +
                                     std::to_string(m.cols()) + ", expected " + std::to_string(s.edim[e.id]) +
                                     "x" + std::to_string(s.vdim[v]));
            }
        }
    }
}

Matrix coboundary_matrix(const Sheaf& s) {
    auto voff = s.vertex_offsets();
    auto eoff = s.edge_offsets();
    Matrix d(s.field, s.total_edge_dim(), s.total_vertex_dim());
    for (const Edge& e : s.tree.edges()) {
        d.set_block(eoff[e.id], voff[e.x], s.restriction(e.x, e.id));
        d.set_block(eoff[e.id], voff[e.y], -s.restriction(e.y, e.id));
    }
    return d;
}

CohomologyResult cohomology(const Sheaf& s) {
    CohomologyResult r;
    r.coboundary = coboundary_matrix(s);
    r.h0 = kernel_basis(r.coboundary);
    QuotientMap q = quotient_map(s.total_edge_dim(), column_space(r.coboundary));
    r.h1_proj = std::move(q.proj);
    r.h1_section = std::move(q.section);
    r.h0_dim = r.h0.dim();
    r.h1_dim = r.h1_proj.rows();
    return r;
}

EulerCheck euler_check(const Sheaf& s) {
    CohomologyResult c = cohomology(s);
    return {static_cast<long>(c.h0_dim) - static_cast<long>(c.h1_dim),
            static_cast<long>(s.total_vertex_dim()) - static_cast<long>(s.total_edge_dim())};
}

// ---------------------------------------------------------------- maps

void validate_sheaf_map(const Sheaf& source, const Sheaf& target, const SheafMap& f) {
    require_same_tree(source, target, "sheaf map");
    const Tree& t = source.tree;
    if (f.vertex_maps.size() != t.vertex_count() || f.edge_maps.size() != t.edge_count()) {
        throw SheafError(SheafError::Kind::InvalidMap, std::nullopt, std::nullopt, "sheaf map has wrong cell count");
    }
    for (VertexId v = 0; v < t.vertex_count(); ++v) {
        const Matrix& m = f.vertex_maps[v];
        if (m.rows() != target.vdim[v] || m.cols() != source.vdim[v]) {
            throw SheafError(SheafError::Kind::InvalidMap, v, std::nullopt,
                             "sheaf map has wrong shape at vertex " + std::to_string(v));
        }
    }
    for (EdgeId e = 0; e < t.edge_count(); ++e) {
        const Matrix& m = f.edge_maps[e];
        if (m.rows() != target.edim[e] || m.cols() != source.edim[e]) {
            throw SheafError(SheafError::Kind::InvalidMap, std::nullopt, e,
                             "sheaf map has wrong shape at edge " + std::to_string(e));
        }
    }
    for (const Edge& e : t.edges()) {
        for (VertexId v : {e.x, e.y}) {
            if (!(target.restriction(v, e.id) * f.vertex_maps[v] == f.edge_maps[e.id] * source.restriction(v, e.id))) {
                throw SheafError(SheafError::Kind::InvalidMap, v, e.id,
                                 "sheaf map does not commute with restriction " + cell_pair(v, e.id));
            }
        }
    }
}

Matrix total_vertex_map(const Field& field, const SheafMap& f) { return direct_sum(field, f.vertex_maps); }

Matrix total_edge_map(const Field& field, const SheafMap& f) { return direct_sum(field, f.edge_maps); }

// ---------------------------------------------------------------- subsheaves

bool CellSubspaces::is_zero() const {
    auto zero = [](const Subspace& s) { return s.is_zero(); };
    return std::all_of(vertex.begin(), vertex.end(), zero) && std::all_of(edge.begin(), edge.end(), zero);
}

CellSubspaces zero_subspaces(const Sheaf& s) {
    CellSubspaces sub;
    for (auto d : s.vdim) sub.vertex.push_back(Subspace::zero(s.field, d));
    for (auto d : s.edim) sub.edge.push_back(Subspace::zero(s.field, d));
    return sub;
}

CellSubspaces full_subspaces(const Sheaf& s) {
    CellSubspaces sub;
    for (auto d : s.vdim) sub.vertex.push_back(Subspace::full(s.field, d));
    for (auto d : s.edim) sub.edge.push_back(Subspace::full(s.field, d));
    return sub;
}

void check_restriction_closed(const Sheaf& s, const CellSubspaces& sub) {
    if (sub.vertex.size() != s.tree.vertex_count() || sub.edge.size() != s.tree.edge_count()) {
        throw SheafError(SheafError::Kind::NotASubsheaf, std::nullopt, std::nullopt, "subspace lists do not match the tree");
    }
    for (VertexId v = 0; v < s.tree.vertex_count(); ++v) {
        if (sub.vertex[v].ambient_dim() != s.vdim[v]) {
            throw SheafError(SheafError::Kind::NotASubsheaf, v, std::nullopt, "subspace has wrong ambient dimension");
        }
    }
    for (EdgeId e = 0; e < s.tree.edge_count(); ++e) {
        if (sub.edge[e].ambient_dim() != s.edim[e]) {
            throw SheafError(SheafError::Kind::NotASubsheaf, std::nullopt, e, "subspace has wrong ambient dimension");
        }
    }
    for (const Edge& e : s.tree.edges()) {
        for (VertexId v : {e.x, e.y}) {
            if (!sub.edge[e.id].contains(image(s.restriction(v, e.id), sub.vertex[v]))) {
                throw SheafError(SheafError::Kind::NotASubsheaf, v, e.id,
                                 "restriction " + cell_pair(v, e.id) + " leaves the subsheaf");
            }
        }
    }
}

SubsheafResult build_subsheaf(const Sheaf& s, const CellSubspaces& sub) {
    check_restriction_closed(s, sub);
    SubsheafResult out;
    Sheaf& r = out.sheaf;
    r.tree = s.tree;
    r.field = s.field;
    for (const auto& u : sub.vertex) {
        r.vdim.push_back(u.dim());
        out.inclusion.vertex_maps.push_back(u.basis().transpose());
    }
    for (const auto& u : sub.edge) {
        r.edim.push_back(u.dim());
        out.inclusion.edge_maps.push_back(u.basis().transpose());
    }
    for (const Edge& e : s.tree.edges()) {
        for (VertexId v : {e.x, e.y}) {
            Matrix images = s.restriction(v, e.id) * out.inclusion.vertex_maps[v];
            r.gamma[{v, e.id}] = *coordinates_of_columns(sub.edge[e.id], images);
        }
    }
    return out;
}

QuotientResult build_quotient(const Sheaf& s, const CellSubspaces& sub) {
    check_restriction_closed(s, sub);
    QuotientResult out;
    Sheaf& q = out.sheaf;
    q.tree = s.tree;
    q.field = s.field;
    for (VertexId v = 0; v < s.tree.vertex_count(); ++v) {
        QuotientMap qm = quotient_map(s.vdim[v], sub.vertex[v]);
        q.vdim.push_back(qm.proj.rows());
        out.proj.vertex_maps.push_back(std::move(qm.proj));
        out.section.vertex_maps.push_back(std::move(qm.section));
    }
    for (EdgeId e = 0; e < s.tree.edge_count(); ++e) {
        QuotientMap qm = quotient_map(s.edim[e], sub.edge[e]);
        q.edim.push_back(qm.proj.rows());
        out.proj.edge_maps.push_back(std::move(qm.proj));
        out.section.edge_maps.push_back(std::move(qm.section));
    }
    for (const Edge& e : s.tree.edges()) {
        for (VertexId v : {e.x, e.y}) {
            q.gamma[{v, e.id}] = out.proj.edge_maps[e.id] * s.restriction(v, e.id) * out.section.vertex_maps[v];
        }
    }
    return out;
}

// ---------------------------------------------------------------- exact sequences

void validate_ses(const ShortExactSeq& ses) {
    auto fail = [](std::optional<VertexId> v, std::optional<EdgeId> e, const std::string& why) {
        return SheafError(SheafError::Kind::InvalidSES, v, e, "invalid short exact sequence: " + why);
    };
    try {
        validate_sheaf_map(ses.a, ses.b, ses.inclusion);
        validate_sheaf_map(ses.b, ses.c, ses.projection);
    } catch (const SheafError& err) {
        throw fail(err.vertex(), err.edge(), err.what());
    }
    auto check_cell = [&](const Matrix& i, const Matrix& p, std::size_t dim_a, std::size_t dim_b, std::size_t dim_c,
                          std::optional<VertexId> v, std::optional<EdgeId> e) {
        if (rank(i) != dim_a) throw fail(v, e, "inclusion not injective");
        if (rank(p) != dim_c) throw fail(v, e, "projection not surjective");
        if (!(p * i).is_zero() || dim_a + dim_c != dim_b) throw fail(v, e, "image of inclusion is not the kernel");
    };
    for (VertexId v = 0; v < ses.b.tree.vertex_count(); ++v) {
        check_cell(ses.inclusion.vertex_maps[v], ses.projection.vertex_maps[v], ses.a.vdim[v], ses.b.vdim[v],
                   ses.c.vdim[v], v, std::nullopt);
    }
    for (EdgeId e = 0; e < ses.b.tree.edge_count(); ++e) {
        check_cell(ses.inclusion.edge_maps[e], ses.projection.edge_maps[e], ses.a.edim[e], ses.b.edim[e],
                   ses.c.edim[e], std::nullopt, e);
    }
}

bool LesReport::exact() const {
    return std::all_of(exact_at.begin(), exact_at.end(), [](bool b) { return b; });
}

LesReport les_connecting(const ShortExactSeq& ses) {
    validate_ses(ses);
    const Field& field = ses.b.field;
    LesReport rep;
    rep.coh_a = cohomology(ses.a);
    rep.coh_b = cohomology(ses.b);
    rep.coh_c = cohomology(ses.c);
    const Matrix i0 = total_vertex_map(field, ses.inclusion);
    const Matrix i1 = total_edge_map(field, ses.inclusion);
    const Matrix p0 = total_vertex_map(field, ses.projection);
    const Matrix p1 = total_edge_map(field, ses.projection);
    const Matrix h0a = rep.coh_a.h0.basis().transpose();
    const Matrix h0b = rep.coh_b.h0.basis().transpose();
    const Matrix h0c = rep.coh_c.h0.basis().transpose();

    auto in_h0 = [](const Subspace& h0, const Matrix& cols) {
        auto m = coordinates_of_columns(h0, cols);
        if (!m) throw SheafError(SheafError::Kind::InvalidSES, std::nullopt, std::nullopt, "map does not preserve H0");
        return *m;
    };
    rep.h0_inclusion = in_h0(rep.coh_b.h0, i0 * h0a);
    rep.h0_projection = in_h0(rep.coh_c.h0, p0 * h0b);

    // lift through p0, apply the coboundary of B, pull back through i1
    auto lift = solve(p0, h0c);
    if (!lift) throw SheafError(SheafError::Kind::InvalidSES, std::nullopt, std::nullopt, "cannot lift H0(C)");
    auto pulled = solve(i1, rep.coh_b.coboundary * *lift);
    if (!pulled) {
        throw SheafError(SheafError::Kind::InvalidSES, std::nullopt, std::nullopt, "coboundary of lift leaves image of A");
    }
    rep.delta = rep.coh_a.h1_proj * *pulled;
    rep.h1_inclusion = rep.coh_b.h1_proj * i1 * rep.coh_a.h1_section;
    rep.h1_projection = rep.coh_c.h1_proj * p1 * rep.coh_b.h1_section;

    rep.dims = {rep.coh_a.h0_dim, rep.coh_b.h0_dim, rep.coh_c.h0_dim,
                rep.coh_a.h1_dim, rep.coh_b.h1_dim, rep.coh_c.h1_dim};
    const std::array<const Matrix*, 5> maps = {&rep.h0_inclusion, &rep.h0_projection, &rep.delta, &rep.h1_inclusion,
                                               &rep.h1_projection};
    for (std::size_t node = 0; node < 6; ++node) {
        std::size_t rank_in = node == 0 ? 0 : rank(*maps[node - 1]);
        std::size_t rank_out = node == 5 ? 0 : rank(*maps[node]);
        bool composes_to_zero = node == 0 || node == 5 || ((*maps[node]) * (*maps[node - 1])).is_zero();
        rep.exact_at[node] = composes_to_zero && rank_in + rank_out == rep.dims[node];
    }
    return rep;
}

}  // namespace sheaftree
