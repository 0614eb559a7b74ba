#include "sheaftree/decompose.hpp"

#include <algorithm>

namespace sheaftree {

namespace {

DecomposeError mismatch(const std::string& what, std::vector<std::size_t> ids = {}) {
    return DecomposeError(DecomposeError::Kind::ConstructionMismatch, what, std::move(ids));
}

Matrix basis_columns(const Subspace& s) { return s.basis().transpose(); }

Matrix coords_or_mismatch(const Subspace& sub, const Matrix& cols, const std::string& where) {
    auto c = coordinates_of_columns(sub, cols);
    if (!c) throw mismatch("columns leave the expected subspace: " + where);
    return *c;
}

/// Embeds per-vertex subspaces as a subspace of the total vertex space.
Matrix embed_vertex_subspaces(const Sheaf& s, const std::vector<Subspace>& parts, const std::vector<VertexId>& which) {
    auto off = s.vertex_offsets();
    std::vector<Vector> vectors;
    for (VertexId v : which) {
        for (std::size_t i = 0; i < parts[v].dim(); ++i) {
            Vector w = zero_vector(s.field, s.total_vertex_dim());
            Vector b = parts[v].basis_vector(i);
            std::copy(b.begin(), b.end(), w.begin() + static_cast<std::ptrdiff_t>(off[v]));
            vectors.push_back(std::move(w));
        }
    }
    return Matrix::from_rows(s.field, s.total_vertex_dim(), vectors).transpose();
}

/// Relates H0 of the sheaf currently being processed to H0 of the input sheaf.
struct Pullback {
    const CohomologyResult& original;
    Matrix vertex_map;  ///< original total vertex space -> current total vertex space

    /// Subspace of H0(current) (in its rref coordinates) expressed in H0(original) coordinates.
    Subspace to_original(const CohomologyResult& current, const Subspace& w) const {
        Matrix m = coords_or_mismatch(current.h0, vertex_map * basis_columns(original.h0), "H0 transport");
        auto minv = inverse(m);
        if (!minv) throw mismatch("H0 transport between recursion levels is not invertible");
        return Subspace::span((*minv * basis_columns(w)).transpose());
    }
};

bool any_nonzero(const std::vector<Subspace>& parts) {
    return std::any_of(parts.begin(), parts.end(), [](const Subspace& s) { return !s.is_zero(); });
}

}  // namespace

std::string to_string(DecomposeError::Kind kind) {
    switch (kind) {
        case DecomposeError::Kind::EllipticNonzero: return "EllipticNonzero";
        case DecomposeError::Kind::ConstructionMismatch: return "ConstructionMismatch";
        case DecomposeError::Kind::HypothesisViolated: return "HypothesisViolated";
        case DecomposeError::Kind::TheoremViolated: return "TheoremViolated";
        case DecomposeError::Kind::ZeroVector: return "ZeroVector";
        case DecomposeError::Kind::CertificationFailed: return "CertificationFailed";
    }
    return "?";
}

std::string to_string(TraceStep step) {
    switch (step) {
        case TraceStep::Elliptic: return "Elliptic";
        case TraceStep::UnifacialKept: return "UnifacialKept";
        case TraceStep::QuotientRecursed: return "QuotientRecursed";
    }
    return "?";
}

std::string to_string(DecompositionResult::Variant v) {
    switch (v) {
        case DecompositionResult::Variant::Zero: return "Zero";
        case DecompositionResult::Variant::VertexInduced: return "VertexInduced";
        case DecompositionResult::Variant::EdgeInduced: return "EdgeInduced";
    }
    return "?";
}

std::size_t rank0(const EquivariantSheaf& es) {
    std::size_t total = 0;
    for (const auto& o : orbits(es.action, CellKind::Vertex)) total += es.sheaf.vdim[o.representative];
    return total;
}

CellSubspaces elliptic_subsheaf(const Sheaf& s) {
    CellSubspaces out = zero_subspaces(s);
    for (VertexId v = 0; v < s.tree.vertex_count(); ++v) {
        Subspace ell = Subspace::full(s.field, s.vdim[v]);
        for (EdgeId e : incident_edges(s.tree, v)) ell = intersect(ell, kernel_basis(s.restriction(v, e)));
        out.vertex[v] = std::move(ell);
    }
    return out;
}

std::vector<EllipticEntry> elliptic_h0(const EquivariantSheaf& es) {
    CellSubspaces ell = elliptic_subsheaf(es.sheaf);
    std::vector<EllipticEntry> out;
    for (const auto& o : orbits(es.action, CellKind::Vertex)) {
        const Subspace& space = ell.vertex[o.representative];
        if (space.is_zero()) continue;
        Representation stalk = stalk_representation(es, {CellKind::Vertex, o.representative});
        out.push_back({o.representative, restrict_representation(stalk, space), space});
    }
    return out;
}

bool UnifacialData::is_zero() const { return !any_nonzero(vertex) && !any_nonzero(edge); }

UnifacialData unifacial_data(const Sheaf& s) {
    const Tree& t = s.tree;
    CellSubspaces ell = elliptic_subsheaf(s);
    for (VertexId v = 0; v < t.vertex_count(); ++v) {
        if (!ell.vertex[v].is_zero()) {
            throw DecomposeError(DecomposeError::Kind::EllipticNonzero,
                                 "elliptic subsheaf is nonzero at vertex " + std::to_string(v), {v});
        }
    }
    UnifacialData u;
    for (VertexId v = 0; v < t.vertex_count(); ++v) {
        auto edges = incident_edges(t, v);
        std::vector<Subspace> kernels;
        for (EdgeId e : edges) kernels.push_back(kernel_basis(s.restriction(v, e)));
        Subspace total = Subspace::zero(s.field, s.vdim[v]);
        std::size_t dims = 0;
        for (std::size_t i = 0; i < edges.size(); ++i) {
            Subspace part = Subspace::full(s.field, s.vdim[v]);
            for (std::size_t j = 0; j < edges.size(); ++j) {
                if (j != i) part = intersect(part, kernels[j]);
            }
            dims += part.dim();
            total = sum(total, part);
            u.pair[{v, edges[i]}] = std::move(part);
        }
        if (total.dim() != dims) throw mismatch("unifacial spaces at vertex " + std::to_string(v) + " are not independent", {v});
        u.vertex.push_back(std::move(total));
    }
    for (const Edge& e : t.edges()) {
        Subspace fx = image(s.restriction(e.x, e.id), u.pair.at({e.x, e.id}));
        Subspace fy = image(s.restriction(e.y, e.id), u.pair.at({e.y, e.id}));
        u.edge.push_back(sum(fx, fy));
        u.from_x.push_back(std::move(fx));
        u.from_y.push_back(std::move(fy));
    }
    return u;
}

RTConstruction build_R_T(const Sheaf& s, const UnifacialData& u) {
    const Tree& t = s.tree;
    const Field& f = s.field;
    RTConstruction out;
    SubsheafResult uni = build_subsheaf(s, u.subsheaf());
    out.uni = uni.sheaf;

    std::vector<std::size_t> rv, re, te;
    for (VertexId v = 0; v < t.vertex_count(); ++v) rv.push_back(u.vertex[v].dim());
    for (EdgeId e = 0; e < t.edge_count(); ++e) {
        re.push_back(u.from_x[e].dim() + u.from_y[e].dim());
        out.t_space.push_back(intersect(u.from_x[e], u.from_y[e]));
        te.push_back(out.t_space[e].dim());
    }
    out.r = zero_restrictions(t, f, rv, re);
    out.t = zero_restrictions(t, f, std::vector<std::size_t>(t.vertex_count(), 0), te);

    // Restriction from a vertex lands in the summand coming from that endpoint.
    auto local_restriction = [&](VertexId v, EdgeId e) {
        const bool is_x = t.edge(e).x == v;
        const Subspace& part = is_x ? u.from_x[e] : u.from_y[e];
        return coords_or_mismatch(part, s.restriction(v, e) * basis_columns(u.vertex[v]),
                                  "restriction of S^uni at (" + std::to_string(v) + "," + std::to_string(e) + ")");
    };
    for (const Edge& e : t.edges()) {
        const std::size_t a = u.from_x[e.id].dim();
        const std::size_t b = u.from_y[e.id].dim();
        Matrix gx(f, a + b, rv[e.x]);
        gx.set_block(0, 0, local_restriction(e.x, e.id));
        Matrix gy(f, a + b, rv[e.y]);
        gy.set_block(a, 0, local_restriction(e.y, e.id));
        out.r.gamma[{e.x, e.id}] = std::move(gx);
        out.r.gamma[{e.y, e.id}] = std::move(gy);
    }

    ShortExactSeq& ses = out.ses;
    ses.a = out.t;
    ses.b = out.r;
    ses.c = out.uni;
    for (VertexId v = 0; v < t.vertex_count(); ++v) {
        ses.inclusion.vertex_maps.push_back(Matrix(f, rv[v], 0));
        ses.projection.vertex_maps.push_back(Matrix::identity(f, rv[v]));
    }
    for (EdgeId e = 0; e < t.edge_count(); ++e) {
        Matrix tb = basis_columns(out.t_space[e]);
        Matrix in_x = coords_or_mismatch(u.from_x[e], tb, "T inside the x-summand");
        Matrix in_y = coords_or_mismatch(u.from_y[e], tb, "T inside the y-summand");
        ses.inclusion.edge_maps.push_back(vstack(in_x, -in_y));
        ses.projection.edge_maps.push_back(coords_or_mismatch(
            u.edge[e], hstack(basis_columns(u.from_x[e]), basis_columns(u.from_y[e])), "sum of the two summands"));
    }
    try {
        validate_ses(ses);
    } catch (const SheafError& err) {
        throw mismatch(std::string("T -> R -> S^uni is not exact: ") + err.what());
    }

    for (VertexId v = 0; v < t.vertex_count(); ++v) {
        std::vector<Vector> rows;
        for (EdgeId e : incident_edges(t, v)) {
            Matrix block = local_restriction(v, e) * Scalar(f, static_cast<long>(or_sign(t, v, e)));
            for (std::size_t r = 0; r < block.rows(); ++r) rows.push_back(block.row(r));
        }
        Matrix star = Matrix::from_rows(f, rv[v], rows);
        if (star.rows() != star.cols() || (star.rows() > 0 && determinant(star).is_zero())) {
            throw mismatch("star block of R at vertex " + std::to_string(v) + " is not invertible", {v});
        }
        out.star_blocks.push_back(std::move(star));
    }
    CohomologyResult coh = cohomology(out.r);
    if (coh.h0_dim != 0 || coh.h1_dim != 0) {
        throw mismatch("R has nonzero cohomology (h0=" + std::to_string(coh.h0_dim) + ", h1=" + std::to_string(coh.h1_dim) + ")");
    }
    return out;
}

TCohomology t_cohomology(const EquivariantSheaf& es, const UnifacialData& u, const RTConstruction& rt) {
    const Tree& t = es.tree();
    const Field& f = es.field();
    const std::size_t n = es.group->order();
    TCohomology out;
    out.uni_sheaf = restrict_to_subsheaf(es, u.subsheaf());
    if (!(out.uni_sheaf.sheaf == rt.uni)) throw mismatch("S^uni built twice with different bases");

    EquivariantSheaf& te = out.t_sheaf;
    te.sheaf = rt.t;
    te.group = es.group;
    te.action = es.action;
    for (Element g = 0; g < n; ++g) {
        te.eta_vertex.emplace_back(t.vertex_count(), Matrix(f, 0, 0));
        std::vector<Matrix> ee;
        for (EdgeId e = 0; e < t.edge_count(); ++e) {
            const EdgeId ge = es.action.act_edge(g, e);
            auto c = coordinates_of_columns(rt.t_space[ge], es.eta_edge[g][e] * basis_columns(rt.t_space[e]));
            if (!c) {
                throw EquivarianceError(EquivarianceError::Kind::NotInvariant, g, "T is not invariant at edge " + std::to_string(e));
            }
            ee.push_back(*c * Scalar(f, static_cast<long>(osgn(t, es.action, g, e))));
        }
        te.eta_edge.push_back(std::move(ee));
    }

    out.les = les_connecting(rt.ses);
    if (!out.les.exact()) throw mismatch("long exact sequence of T -> R -> S^uni is not exact");
    const Matrix& delta = out.les.delta;
    if (delta.rows() != delta.cols() || (delta.rows() > 0 && determinant(delta).is_zero())) {
        throw mismatch("connecting map H0(S^uni) -> H1(T) is not invertible");
    }
    Representation on_uni = rep_on_h0(out.uni_sheaf, out.les.coh_c);
    Representation on_t = rep_on_h1(te);
    for (Element g = 0; g < n; ++g) {
        if (!(delta * on_uni.matrices[g] == on_t.matrices[g] * delta)) {
            throw EquivarianceError(EquivarianceError::Kind::EquivarianceBroken, g,
                                    "connecting map does not commute with element " + std::to_string(g));
        }
    }

    for (const auto& o : orbits(es.action, CellKind::Edge)) {
        const EdgeId e = o.representative;
        if (rt.t_space[e].is_zero()) continue;
        Representation sigma{es.group, stabilizer(es.action, {CellKind::Edge, e}), f, rt.t_space[e].dim(), {}};
        for (Element g : sigma.elements) {
            sigma.matrices.push_back(te.eta_edge[g][e] * Scalar(f, static_cast<long>(osgn(t, es.action, g, e))));
        }
        out.entries.push_back({e, std::move(sigma)});
    }
    return out;
}

bool is_multifacial(const Sheaf& s) {
    if (any_nonzero(elliptic_subsheaf(s).vertex)) return false;
    return unifacial_data(s).is_zero();
}

SupportWitness support_witness(const Sheaf& s, const Vector& h0_vector) {
    if (h0_vector.size() != s.total_vertex_dim()) throw std::invalid_argument("support_witness: wrong vector length");
    if (is_zero_vector(h0_vector)) throw DecomposeError(DecomposeError::Kind::ZeroVector, "support_witness needs a nonzero vector");
    if (!is_zero_vector(coboundary_matrix(s).apply(h0_vector))) {
        throw std::invalid_argument("support_witness: vector is not a global section");
    }
    auto off = s.vertex_offsets();
    auto stalk = [&](VertexId v) {
        return Vector(h0_vector.begin() + static_cast<std::ptrdiff_t>(off[v]), h0_vector.begin() + static_cast<std::ptrdiff_t>(off[v + 1]));
    };
    SupportWitness w;
    for (VertexId v = 0; v < s.tree.vertex_count(); ++v) {
        if (!is_zero_vector(stalk(v))) w.support.insert(v);
    }
    w.hull = convex_hull(s.tree, w.support);
    w.leaves = leaves(s.tree, w.hull);
    for (VertexId v : w.leaves) {
        LeafData d{v, {}};
        Vector sv = stalk(v);
        for (EdgeId e : incident_edges(s.tree, v)) d.restrictions.emplace_back(e, s.restriction(v, e).apply(sv));
        w.leaf_data.push_back(std::move(d));
    }
    return w;
}

DecompositionResult induction_decompose(const EquivariantSheaf& es, const DecomposeOptions& opts) {
    using Variant = DecompositionResult::Variant;
    DecompositionResult res;
    res.initial_rank0 = rank0(es);
    const CohomologyResult original = cohomology(es.sheaf);
    res.h0_dim = original.h0_dim;
    if (original.h0_dim == 0) {
        res.variant = Variant::Zero;
        return res;
    }
    const Representation rho0 = rep_on_h0(es, original);
    if (opts.check_irreducible) {
        IrreducibilityResult irr = is_irreducible(rho0);
        res.irreducibility = irr;
        if (irr.verdict == IrreducibilityResult::Verdict::Reducible) {
            if (!irr.witness || !is_invariant(rho0, *irr.witness)) throw mismatch("reducibility witness failed verification");
            throw DecomposeError(DecomposeError::Kind::HypothesisViolated,
                                 "H0 is reducible: " + irr.reason, {}, irr.witness);
        }
        if (irr.verdict == IrreducibilityResult::Verdict::Inconclusive) {
            res.warnings.push_back("irreducibility of H0 is inconclusive: " + irr.reason);
        }
    }

    auto violated = [&](const std::string& what, const Subspace& witness, std::vector<std::size_t> ids) {
        if (witness.is_zero() || witness.dim() >= original.h0_dim || !is_invariant(rho0, witness)) {
            throw mismatch("evidence for a reducible H0 failed verification: " + what);
        }
        return DecomposeError(DecomposeError::Kind::HypothesisViolated, what, std::move(ids), witness);
    };

    EquivariantSheaf cur = es;
    Pullback pull{original, Matrix::identity(es.field(), es.sheaf.total_vertex_dim())};
    for (std::size_t step = 0; step <= res.initial_rank0; ++step) {
        const Sheaf& s = cur.sheaf;
        const CohomologyResult coh = step == 0 ? original : cohomology(s);
        if (coh.h0_dim != original.h0_dim) throw mismatch("H0 changed dimension across a quotient step");

        CellSubspaces ell = elliptic_subsheaf(s);
        if (any_nonzero(ell.vertex)) {
            res.trace.push_back(TraceStep::Elliptic);
            std::vector<EllipticEntry> entries = elliptic_h0(cur);
            std::size_t ell_dim = 0;
            for (const auto& sub : ell.vertex) ell_dim += sub.dim();
            if (entries.size() > 1) {
                std::vector<VertexId> members;
                for (const auto& o : orbits(cur.action, CellKind::Vertex)) {
                    if (o.representative == entries[0].vertex) members = o.members;
                }
                Matrix cols = embed_vertex_subspaces(s, ell.vertex, members);
                Subspace local = Subspace::span(coords_or_mismatch(coh.h0, cols, "elliptic sections").transpose());
                std::vector<std::size_t> reps;
                for (const auto& entry : entries) reps.push_back(entry.vertex);
                throw violated("elliptic part is supported on " + std::to_string(entries.size()) + " vertex orbits",
                               pull.to_original(coh, local), reps);
            }
            if (ell_dim < coh.h0_dim) {
                std::vector<VertexId> all(s.tree.vertex_count());
                for (VertexId v = 0; v < all.size(); ++v) all[v] = v;
                Matrix cols = embed_vertex_subspaces(s, ell.vertex, all);
                Subspace local = Subspace::span(coords_or_mismatch(coh.h0, cols, "elliptic sections").transpose());
                throw violated("elliptic sections form a proper subrepresentation of H0", pull.to_original(coh, local),
                               {entries[0].vertex});
            }
            res.variant = Variant::VertexInduced;
            res.cell = entries[0].vertex;
            res.stabilizer = entries[0].sigma.elements;
            res.sigma = entries[0].sigma;
            return res;
        }

        UnifacialData u = unifacial_data(s);
        if (u.is_zero()) {
            throw DecomposeError(DecomposeError::Kind::TheoremViolated, "multifacial sheaf with nonzero H0");
        }
        RTConstruction rt = build_R_T(s, u);
        TCohomology tc = t_cohomology(cur, u, rt);
        const CohomologyResult& coh_uni = tc.les.coh_c;
        if (coh_uni.h0_dim > 0) {
            res.trace.push_back(TraceStep::UnifacialKept);
            std::vector<Matrix> blocks;
            for (VertexId v = 0; v < s.tree.vertex_count(); ++v) blocks.push_back(basis_columns(u.vertex[v]));
            const Matrix incl = direct_sum(s.field, blocks);
            Matrix j = coords_or_mismatch(coh.h0, incl * basis_columns(coh_uni.h0), "H0(S^uni) inside H0");
            if (coh_uni.h0_dim < coh.h0_dim) {
                throw violated("H0 of the unifacial subsheaf is a proper subrepresentation",
                               pull.to_original(coh, Subspace::span(j.transpose())), {});
            }
            if (tc.entries.empty()) throw mismatch("H0(S^uni) is nonzero but every T_e vanishes");
            if (tc.entries.size() > 1) {
                const CohomologyResult& coh_t = tc.les.coh_a;
                auto toff = tc.t_sheaf.sheaf.edge_offsets();
                std::vector<Vector> vecs;
                for (const auto& o : orbits(cur.action, CellKind::Edge)) {
                    if (o.representative != tc.entries[0].edge) continue;
                    for (EdgeId e : o.members) {
                        for (std::size_t i = toff[e]; i < toff[e + 1]; ++i) {
                            Vector w = zero_vector(s.field, tc.t_sheaf.sheaf.total_edge_dim());
                            w[i] = Scalar::one(s.field);
                            vecs.push_back(coh_t.h1_proj.apply(w));
                        }
                    }
                }
                Matrix rhs = Matrix::from_rows(s.field, coh_t.h1_dim, vecs).transpose();
                auto pre = solve(tc.les.delta, rhs);
                if (!pre) throw mismatch("connecting map is not surjective");
                std::vector<std::size_t> reps;
                for (const auto& entry : tc.entries) reps.push_back(entry.edge);
                throw violated("T is supported on " + std::to_string(tc.entries.size()) + " edge orbits",
                               pull.to_original(coh, Subspace::span((j * *pre).transpose())), reps);
            }
            res.variant = Variant::EdgeInduced;
            res.cell = tc.entries[0].edge;
            res.stabilizer = tc.entries[0].sigma.elements;
            res.sigma = tc.entries[0].sigma;
            return res;
        }

        res.trace.push_back(TraceStep::QuotientRecursed);
        const std::size_t before = rank0(cur);
        EquivariantQuotient q = quotient_by_subsheaf(cur, u.subsheaf());
        if (rank0(q.sheaf) >= before) throw mismatch("quotient by S^uni did not lower the 0-rank");
        pull.vertex_map = total_vertex_map(s.field, q.maps.proj) * pull.vertex_map;
        cur = std::move(q.sheaf);
    }
    throw mismatch("recursion exceeded the initial 0-rank");
}

Certificate verify_decomposition(const EquivariantSheaf& es, const DecompositionResult& r) {
    auto fail = [](const std::string& why) { return DecomposeError(DecomposeError::Kind::CertificationFailed, why); };
    CohomologyResult coh = cohomology(es.sheaf);
    Certificate cert;
    cert.h0 = rep_on_h0(es, coh);
    if (r.variant == DecompositionResult::Variant::Zero) {
        if (coh.h0_dim != 0) throw fail("result is Zero but H0 has dimension " + std::to_string(coh.h0_dim));
        cert.reason = "H0 is zero";
        return cert;
    }
    if (!r.sigma) throw fail("result carries no stabilizer representation");
    cert.induced = induce(*r.sigma);
    IsoResult iso = is_isomorphic(cert.h0, cert.induced->total);
    if (iso.verdict != IsoResult::Verdict::Isomorphic || !iso.witness) {
        throw fail("no isomorphism H0 -> induced representation (" + to_string(iso.verdict) + ": " + iso.reason + ")");
    }
    const Matrix& a = *iso.witness;
    if (!is_intertwiner(cert.h0, cert.induced->total, a) || determinant(a).is_zero()) {
        throw fail("intertwiner failed exact verification");
    }
    cert.intertwiner = a;
    cert.reason = iso.reason;
    return cert;
}

}  // namespace sheaftree
