#include "sheaftree/generate.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "sheaftree/decompose.hpp"
#include "sheaftree/rep.hpp"

namespace sheaftree {

namespace {

constexpr int kRetries = 40;

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

Tree oriented_tree(Rng& rng, std::size_t n, const std::vector<std::pair<VertexId, VertexId>>& pairs) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto [a, b] = pairs[i];
        if (coin(rng)) std::swap(a, b);
        edges.push_back({i, a, b});
    }
    return Tree(n, edges);
}

Matrix random_invertible(Rng& rng, const Field& f, std::size_t n) {
    for (int i = 0; i < kRetries; ++i) {
        Matrix p = random_matrix(rng, f, n, n, 2);
        if (!determinant(p).is_zero()) return p;
    }
    return Matrix::identity(f, n);
}

/// Restrictions out of one vertex: gamma_e = M_e * D_e * P^{-1} with coordinate masks D_e,
/// so the kernels line up along a random basis and unifacial parts are common.
std::vector<Matrix> masked_restrictions(Rng& rng, const Field& f, std::size_t vdim, const std::vector<std::size_t>& edims,
                                        const std::vector<std::vector<bool>>& masks) {
    Matrix p = random_invertible(rng, f, vdim);
    Matrix pinv = inverse(p).value_or(Matrix::identity(f, vdim));
    std::vector<Matrix> out;
    for (std::size_t i = 0; i < edims.size(); ++i) {
        Matrix d(f, vdim, vdim);
        for (std::size_t c = 0; c < vdim; ++c) {
            if (masks[i][c]) d(c, c) = Scalar::one(f);
        }
        out.push_back(random_matrix(rng, f, edims[i], vdim, 3) * d * pinv);
    }
    return out;
}

bool stack_injective(const Field& f, std::size_t vdim, const std::vector<Matrix>& maps, std::optional<std::size_t> skip) {
    Matrix stack(f, 0, vdim);
    for (std::size_t i = 0; i < maps.size(); ++i) {
        if (skip && *skip == i) continue;
        stack = vstack(stack, maps[i]);
    }
    return rank(stack) == vdim;
}

/// Random homomorphisms K -> {+1, -1} other than the trivial one.
std::vector<std::vector<long>> sign_characters(const GroupTable& g, const std::vector<Element>& k) {
    auto gens = generators(g, k);
    std::vector<std::vector<long>> out;
    for (std::size_t mask = 1; mask < (std::size_t{1} << gens.size()); ++mask) {
        std::map<Element, long> chi{{0, 1}};
        std::vector<Element> frontier{0};
        bool ok = true;
        while (!frontier.empty() && ok) {
            std::vector<Element> next;
            for (Element a : frontier) {
                for (std::size_t i = 0; i < gens.size(); ++i) {
                    Element b = g.mul(a, gens[i]);
                    long val = chi[a] * ((mask >> i) & 1 ? -1 : 1);
                    auto it = chi.find(b);
                    if (it == chi.end()) {
                        chi[b] = val;
                        next.push_back(b);
                    } else if (it->second != val) {
                        ok = false;
                    }
                }
            }
            frontier = std::move(next);
        }
        if (!ok) continue;
        for (Element a : k) {
            for (Element b : k) {
                if (chi[a] * chi[b] != chi[g.mul(a, b)]) ok = false;
            }
        }
        if (!ok) continue;
        std::vector<long> values;
        for (Element a : k) values.push_back(chi[a]);
        out.push_back(std::move(values));
    }
    return out;
}

Representation zero_rep(GroupPtr group, std::vector<Element> k, const Field& f) {
    return Representation::trivial(std::move(group), std::move(k), f, 0);
}

/// Random representation of the stabilizer of `cell` from small building blocks.
Representation random_stalk_rep(Rng& rng, const Tree& tree, const PermutationGroup& pg, const Field& f, Cell cell,
                                std::size_t max_dim) {
    const GroupTable& g = *pg.group;
    std::vector<Element> k = stabilizer(pg.action, cell);
    std::vector<Representation> blocks;
    blocks.push_back(Representation::trivial(pg.group, k, f, 1));
    for (const auto& chi : sign_characters(g, k)) {
        Representation r{pg.group, k, f, 1, {}};
        for (long c : chi) r.matrices.push_back(Matrix(f, 1, 1, {c}));
        blocks.push_back(std::move(r));
    }
    if (cell.kind == CellKind::Vertex) {
        auto inc = incident_edges(tree, cell.id);
        if (inc.size() >= 2) {
            Representation perm{pg.group, k, f, inc.size(), {}};
            for (Element x : k) {
                Matrix m(f, inc.size(), inc.size());
                for (std::size_t i = 0; i < inc.size(); ++i) {
                    auto j = static_cast<std::size_t>(std::find(inc.begin(), inc.end(), pg.action.act_edge(x, inc[i])) - inc.begin());
                    m(j, i) = Scalar::one(f);
                }
                perm.matrices.push_back(std::move(m));
            }
            Matrix ones(f, 1, inc.size());
            for (std::size_t i = 0; i < inc.size(); ++i) ones(0, i) = Scalar::one(f);
            blocks.push_back(restrict_representation(perm, kernel_basis(ones)));
            blocks.push_back(std::move(perm));
        }
    }
    if (k.size() <= 4 && k.size() > 1) {
        Representation reg{pg.group, k, f, k.size(), {}};
        for (Element x : k) {
            Matrix m(f, k.size(), k.size());
            for (std::size_t i = 0; i < k.size(); ++i) {
                auto j = static_cast<std::size_t>(std::lower_bound(k.begin(), k.end(), g.mul(x, k[i])) - k.begin());
                m(j, i) = Scalar::one(f);
            }
            reg.matrices.push_back(std::move(m));
        }
        blocks.push_back(std::move(reg));
    }
    const std::size_t target = uniform(rng, 0, max_dim);
    std::vector<Representation> chosen;
    std::size_t dim = 0;
    for (int attempt = 0; attempt < 8 && dim < target; ++attempt) {
        const Representation& b = blocks[uniform(rng, 0, blocks.size() - 1)];
        if (dim + b.dim > target) continue;
        chosen.push_back(b);
        dim += b.dim;
    }
    if (chosen.empty()) return zero_rep(pg.group, k, f);
    Representation sum = direct_sum(chosen);
    Matrix p = random_invertible(rng, f, sum.dim);
    Matrix pinv = *inverse(p);
    for (auto& m : sum.matrices) m = p * m * pinv;
    return sum;
}

}  // namespace

std::string to_string(Constraint c) {
    switch (c) {
        case Constraint::None: return "none";
        case Constraint::NoElliptic: return "no-elliptic";
        case Constraint::Multifacial: return "multifacial";
    }
    return "?";
}

Constraint parse_constraint(const std::string& text) {
    if (text == "none") return Constraint::None;
    if (text == "no-elliptic") return Constraint::NoElliptic;
    if (text == "multifacial") return Constraint::Multifacial;
    throw std::invalid_argument("unknown constraint '" + text + "'");
}

Matrix random_matrix(Rng& rng, const Field& f, std::size_t rows, std::size_t cols, long bound) {
    std::uniform_int_distribution<long> dist(-bound, bound);
    Matrix m(f, rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = Scalar(f, dist(rng));
    }
    return m;
}

Tree random_tree(Rng& rng, std::size_t vertices) {
    if (vertices == 0) throw std::invalid_argument("random_tree needs at least one vertex");
    std::vector<VertexId> labels(vertices);
    std::iota(labels.begin(), labels.end(), VertexId{0});
    std::shuffle(labels.begin(), labels.end(), rng);
    std::vector<std::pair<VertexId, VertexId>> pairs;
    for (std::size_t i = 1; i < vertices; ++i) pairs.emplace_back(labels[uniform(rng, 0, i - 1)], labels[i]);
    std::shuffle(pairs.begin(), pairs.end(), rng);
    return oriented_tree(rng, vertices, pairs);
}

Sheaf random_sheaf(Rng& rng, const GenParams& params) {
    const Field& f = params.field;
    if (params.max_vertices == 0) throw InfeasibleConstraint("a tree needs at least one vertex");
    if (params.min_stalk_dim > params.max_stalk_dim) throw InfeasibleConstraint("min stalk dimension exceeds the maximum");
    if (params.constraint == Constraint::Multifacial && params.min_stalk_dim > 0) {
        throw InfeasibleConstraint("multifacial sheaves need zero stalks at leaves");
    }
    if (params.constraint == Constraint::NoElliptic && params.min_stalk_dim > 0 && params.max_vertices == 1) {
        throw InfeasibleConstraint("a lone vertex with a nonzero stalk is elliptic");
    }
    const std::size_t n = uniform(rng, params.constraint == Constraint::None ? 1 : std::min<std::size_t>(2, params.max_vertices),
                                  params.max_vertices);
    Tree t = random_tree(rng, n);
    std::vector<std::size_t> edim(t.edge_count());
    const std::size_t edge_lo = params.constraint == Constraint::None ? 0 : std::min<std::size_t>(1, params.max_stalk_dim);
    for (auto& d : edim) d = uniform(rng, edge_lo, params.max_stalk_dim);
    std::vector<std::size_t> vdim(n);
    Sheaf s = zero_restrictions(t, f, vdim, edim);

    for (VertexId v = 0; v < n; ++v) {
        auto inc = incident_edges(t, v);
        std::vector<std::size_t> ed;
        for (EdgeId e : inc) ed.push_back(edim[e]);
        const std::size_t total = std::accumulate(ed.begin(), ed.end(), std::size_t{0});
        std::size_t cap = params.max_stalk_dim;
        if (params.constraint == Constraint::NoElliptic) cap = std::min(cap, total);
        if (params.constraint == Constraint::Multifacial) {
            if (inc.size() < 2) cap = 0;
            for (std::size_t skip = 0; skip < inc.size(); ++skip) cap = std::min(cap, total - ed[skip]);
        }
        if (cap < params.min_stalk_dim) {
            throw InfeasibleConstraint("vertex " + std::to_string(v) + " cannot carry the minimum stalk under " +
                                       to_string(params.constraint));
        }
        std::size_t d = uniform(rng, params.min_stalk_dim, cap);
        std::vector<Matrix> maps;
        if (params.constraint == Constraint::None) {
            for (std::size_t i = 0; i < inc.size(); ++i) {
                switch (uniform(rng, 0, 3)) {
                    case 0: maps.push_back(Matrix(f, ed[i], d)); break;
                    case 1: {
                        std::size_t r = uniform(rng, 0, std::min(ed[i], d));
                        maps.push_back(random_matrix(rng, f, ed[i], r) * random_matrix(rng, f, r, d));
                        break;
                    }
                    default: maps.push_back(random_matrix(rng, f, ed[i], d)); break;
                }
            }
        } else {
            // Each coordinate is seen by >= 1 edge (no elliptic part) or >= 2 edges (multifacial).
            const std::size_t need = params.constraint == Constraint::Multifacial ? 2 : 1;
            bool done = false;
            while (!done) {
                for (int attempt = 0; attempt < kRetries && !done; ++attempt) {
                    std::vector<std::vector<bool>> masks(inc.size(), std::vector<bool>(d, false));
                    const bool generic = attempt >= kRetries / 2;
                    for (std::size_t c = 0; c < d; ++c) {
                        std::vector<std::size_t> order(inc.size());
                        std::iota(order.begin(), order.end(), std::size_t{0});
                        std::shuffle(order.begin(), order.end(), rng);
                        std::size_t seen = 0;
                        for (std::size_t i : order) {
                            if (generic || seen < need || coin(rng, 0.3)) {
                                masks[i][c] = true;
                                ++seen;
                            }
                        }
                    }
                    maps = masked_restrictions(rng, f, d, ed, masks);
                    done = params.constraint == Constraint::NoElliptic ? stack_injective(f, d, maps, std::nullopt) : true;
                    for (std::size_t skip = 0; skip < inc.size() && done && params.constraint == Constraint::Multifacial; ++skip) {
                        done = stack_injective(f, d, maps, skip);
                    }
                }
                if (!done) {
                    if (d == params.min_stalk_dim) throw InfeasibleConstraint("could not realise the constraint at vertex " + std::to_string(v));
                    --d;
                }
            }
        }
        s.vdim[v] = d;
        for (std::size_t i = 0; i < inc.size(); ++i) s.gamma[{v, inc[i]}] = maps[i];
    }
    validate_sheaf(s);
    if (params.constraint == Constraint::NoElliptic && !elliptic_subsheaf(s).is_zero()) {
        throw std::logic_error("generator post-check: elliptic subsheaf is nonzero");
    }
    if (params.constraint == Constraint::Multifacial && !is_multifacial(s)) {
        throw std::logic_error("generator post-check: sheaf is not multifacial");
    }
    return s;
}

CellSubspaces random_subsheaf(Rng& rng, const Sheaf& s) {
    CellSubspaces sub = zero_subspaces(s);
    for (VertexId v = 0; v < s.tree.vertex_count(); ++v) {
        std::size_t k = uniform(rng, 0, s.vdim[v]);
        sub.vertex[v] = Subspace::span(random_matrix(rng, s.field, k, s.vdim[v]));
    }
    for (const Edge& e : s.tree.edges()) {
        Subspace closed = sum(image(s.restriction(e.x, e.id), sub.vertex[e.x]), image(s.restriction(e.y, e.id), sub.vertex[e.y]));
        std::size_t extra = uniform(rng, 0, s.edim[e.id] - closed.dim());
        sub.edge[e.id] = sum(closed, Subspace::span(random_matrix(rng, s.field, extra, s.edim[e.id])));
    }
    return sub;
}

std::vector<std::string> catalog_names() {
    return {"trivial", "c2_path", "c3_star3", "s3_star3", "c3_spider", "s3_spider", "d4_star4", "c2_binary"};
}

CatalogAction catalog_action(Rng& rng, const std::string& name, std::size_t max_vertices) {
    const std::vector<std::pair<VertexId, VertexId>> star3{{0, 1}, {0, 2}, {0, 3}};
    const std::vector<std::pair<VertexId, VertexId>> spider{{0, 1}, {0, 2}, {0, 3}, {1, 4}, {2, 5}, {3, 6}};
    if (name == "trivial") return {name, random_tree(rng, uniform(rng, 1, std::max<std::size_t>(1, max_vertices))), {}};
    if (name == "c2_path") {
        const std::size_t n = uniform(rng, 2, std::max<std::size_t>(2, max_vertices));
        std::vector<std::pair<VertexId, VertexId>> pairs;
        for (VertexId v = 0; v + 1 < n; ++v) pairs.emplace_back(v, v + 1);
        std::vector<VertexId> flip(n);
        for (VertexId v = 0; v < n; ++v) flip[v] = n - 1 - v;
        return {name, oriented_tree(rng, n, pairs), {flip}};
    }
    if (name == "c3_star3") return {name, oriented_tree(rng, 4, star3), {{0, 2, 3, 1}}};
    if (name == "s3_star3") return {name, oriented_tree(rng, 4, star3), {{0, 2, 1, 3}, {0, 2, 3, 1}}};
    if (name == "c3_spider") return {name, oriented_tree(rng, 7, spider), {{0, 2, 3, 1, 5, 6, 4}}};
    if (name == "s3_spider") return {name, oriented_tree(rng, 7, spider), {{0, 2, 1, 3, 5, 4, 6}, {0, 2, 3, 1, 5, 6, 4}}};
    if (name == "d4_star4") {
        return {name, oriented_tree(rng, 5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}}), {{0, 2, 3, 4, 1}, {0, 1, 4, 3, 2}}};
    }
    if (name == "c2_binary") {
        const std::size_t depth = uniform(rng, 1, 3);
        const std::size_t n = (std::size_t{1} << (depth + 1)) - 1;
        std::vector<std::pair<VertexId, VertexId>> pairs;
        for (VertexId v = 1; v < n; ++v) pairs.emplace_back((v - 1) / 2, v);
        std::vector<VertexId> mirror(n, 0);
        for (VertexId v = 1; v < n; ++v) {
            VertexId parent = mirror[(v - 1) / 2];
            mirror[v] = v % 2 == 1 ? 2 * parent + 2 : 2 * parent + 1;
        }
        return {name, oriented_tree(rng, n, pairs), {mirror}};
    }
    throw std::invalid_argument("unknown catalog action '" + name + "'");
}

PermutationGroup close_action(const Tree& tree, const std::vector<std::vector<VertexId>>& generators) {
    const std::size_t n = tree.vertex_count();
    std::vector<VertexId> id(n);
    std::iota(id.begin(), id.end(), VertexId{0});
    std::vector<std::vector<VertexId>> elems{id};
    std::map<std::vector<VertexId>, Element> index{{id, 0}};
    auto compose = [](const std::vector<VertexId>& a, const std::vector<VertexId>& b) {
        std::vector<VertexId> c(b.size());
        for (std::size_t i = 0; i < b.size(); ++i) c[i] = a[b[i]];
        return c;
    };
    for (std::size_t i = 0; i < elems.size(); ++i) {
        for (const auto& s : generators) {
            auto c = compose(elems[i], s);
            if (index.emplace(c, elems.size()).second) elems.push_back(c);
        }
    }
    std::vector<std::vector<Element>> mul(elems.size(), std::vector<Element>(elems.size()));
    for (std::size_t a = 0; a < elems.size(); ++a) {
        for (std::size_t b = 0; b < elems.size(); ++b) mul[a][b] = index.at(compose(elems[a], elems[b]));
    }
    std::map<std::pair<VertexId, VertexId>, EdgeId> by_ends;
    for (const Edge& e : tree.edges()) by_ends[std::minmax(e.x, e.y)] = e.id;
    PermutationGroup pg{std::make_shared<const GroupTable>(mul), {elems, {}}};
    for (const auto& p : elems) {
        std::vector<EdgeId> ep;
        for (const Edge& e : tree.edges()) {
            auto it = by_ends.find(std::minmax(p[e.x], p[e.y]));
            if (it == by_ends.end()) throw std::invalid_argument("generator is not a tree automorphism");
            ep.push_back(it->second);
        }
        pg.action.edge_perm.push_back(std::move(ep));
    }
    validate_tree_action(tree, *pg.group, pg.action);
    return pg;
}

EquivariantSheaf random_equivariant(Rng& rng, const Tree& tree, const PermutationGroup& pg, const Field& field,
                                    std::size_t max_stalk_dim) {
    const GroupTable& g = *pg.group;
    const std::size_t order = g.order();
    EquivariantSheaf es;
    es.group = pg.group;
    es.action = pg.action;
    es.sheaf = zero_restrictions(tree, field, std::vector<std::size_t>(tree.vertex_count()), std::vector<std::size_t>(tree.edge_count()));
    es.eta_vertex.assign(order, std::vector<Matrix>(tree.vertex_count()));
    es.eta_edge.assign(order, std::vector<Matrix>(tree.edge_count()));

    for (CellKind kind : {CellKind::Vertex, CellKind::Edge}) {
        auto& dims = kind == CellKind::Vertex ? es.sheaf.vdim : es.sheaf.edim;
        auto& eta = kind == CellKind::Vertex ? es.eta_vertex : es.eta_edge;
        const auto& perms = kind == CellKind::Vertex ? pg.action.vertex_perm : pg.action.edge_perm;
        for (const Orbit& o : orbits(pg.action, kind)) {
            const std::size_t c = o.representative;
            Representation sigma = random_stalk_rep(rng, tree, pg, field, {kind, c}, max_stalk_dim);
            std::map<std::size_t, Element> transversal;
            for (Element x = 0; x < order; ++x) transversal.emplace(perms[x][c], x);
            for (std::size_t m : o.members) {
                dims[m] = sigma.dim;
                for (Element x = 0; x < order; ++x) {
                    const std::size_t target = perms[x][m];
                    Element k = g.mul(g.mul(g.inv(transversal.at(target)), x), transversal.at(m));
                    eta[x][m] = sigma(k);
                }
            }
        }
    }

    std::set<std::pair<VertexId, EdgeId>> assigned;
    for (const Edge& e : tree.edges()) {
        for (VertexId v : {e.x, e.y}) {
            if (assigned.contains({v, e.id})) continue;
            std::vector<Element> h;
            for (Element x = 0; x < order; ++x) {
                if (pg.action.act(x, v) == v && pg.action.act_edge(x, e.id) == e.id) h.push_back(x);
            }
            Representation rv{pg.group, h, field, es.sheaf.vdim[v], {}};
            Representation re{pg.group, h, field, es.sheaf.edim[e.id], {}};
            for (Element x : h) {
                rv.matrices.push_back(es.eta_vertex[x][v]);
                re.matrices.push_back(es.eta_edge[x][e.id]);
            }
            Subspace hom = hom_space(rv, re);
            Vector flat = zero_vector(field, hom.ambient_dim());
            if (!coin(rng, 0.15)) {
                for (std::size_t i = 0; i < hom.dim(); ++i) {
                    Scalar c(field, std::uniform_int_distribution<long>(-2, 2)(rng));
                    Vector b = hom.basis_vector(i);
                    for (std::size_t j = 0; j < flat.size(); ++j) flat[j] += c * b[j];
                }
            }
            Matrix gamma = unflatten(field, flat, re.dim, rv.dim);
            for (Element x = 0; x < order; ++x) {
                std::pair<VertexId, EdgeId> flag{pg.action.act(x, v), pg.action.act_edge(x, e.id)};
                if (!assigned.insert(flag).second) continue;
                es.sheaf.gamma[flag] = es.eta_edge[x][e.id] * gamma * es.eta_vertex[g.inv(x)][flag.first];
            }
        }
    }
    validate_sheaf(es.sheaf);
    validate_action(es);
    check_coboundary_equivariance(es);
    return es;
}

EquivariantSheaf random_catalog_instance(Rng& rng, const Field& field, std::size_t max_vertices, std::size_t max_stalk_dim) {
    auto names = catalog_names();
    CatalogAction ca = catalog_action(rng, names[uniform(rng, 0, names.size() - 1)], max_vertices);
    PermutationGroup pg = close_action(ca.tree, ca.generators);
    return random_equivariant(rng, ca.tree, pg, field, max_stalk_dim);
}

}  // namespace sheaftree
