#include "sheaftree/instance.hpp"

#include <charconv>
#include <cstdint>
#include <cstdio>

namespace sheaftree {

using json = nlohmann::ordered_json;

namespace {

const json& require(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.is_object()) throw SchemaError(where, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(where, "missing key '" + key + "'");
    return *it;
}

std::size_t as_index(const json& j, const std::string& where) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
        throw SchemaError(where, "expected a non-negative integer");
    }
    return j.get<std::size_t>();
}

std::vector<std::size_t> as_index_list(const json& j, const std::string& where) {
    if (!j.is_array()) throw SchemaError(where, "expected an array");
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_index(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

std::pair<std::size_t, std::size_t> parse_key(const std::string& key, const std::string& where) {
    auto colon = key.find(':');
    auto number = [&](std::string_view t) {
        std::size_t v = 0;
        auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) throw SchemaError(where, "malformed key '" + key + "'");
        return v;
    };
    if (colon == std::string::npos) throw SchemaError(where, "malformed key '" + key + "'");
    std::string_view k(key);
    return {number(k.substr(0, colon)), number(k.substr(colon + 1))};
}

Matrix parse_matrix(const Field& f, const json& j, std::size_t rows, std::size_t cols, const std::string& where) {
    if (!j.is_array()) throw SchemaError(where, "expected an array of rows");
    if (j.size() != rows) {
        throw ValidationError("shape", where + " has " + std::to_string(j.size()) + " rows, expected " + std::to_string(rows));
    }
    Matrix m(f, rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        const json& row = j[r];
        const std::string rw = where + "[" + std::to_string(r) + "]";
        if (!row.is_array()) throw SchemaError(rw, "expected an array of scalars");
        if (row.size() != cols) {
            throw ValidationError("shape", rw + " has " + std::to_string(row.size()) + " entries, expected " + std::to_string(cols));
        }
        for (std::size_t c = 0; c < cols; ++c) {
            const json& x = row[c];
            const std::string loc = rw + "[" + std::to_string(c) + "]";
            std::string text;
            if (x.is_string()) {
                text = x.get<std::string>();
            } else if (x.is_number_integer()) {
                text = std::to_string(x.get<std::int64_t>());
            } else {
                throw SchemaError(loc, "expected a scalar string");
            }
            try {
                m(r, c) = Scalar::parse(f, text);
            } catch (const ScalarParseError& err) {
                throw ScalarParseError(loc + ": " + err.what());
            }
        }
    }
    return m;
}

/// Matrices keyed "a:b"; `shape(a, b)` returns the expected shape or nullopt for an unknown key.
template <typename ShapeFn>
std::map<std::pair<std::size_t, std::size_t>, Matrix> parse_matrix_map(const Field& f, const json& j, const std::string& where,
                                                                        const std::string& section, ShapeFn shape) {
    std::map<std::pair<std::size_t, std::size_t>, Matrix> out;
    if (!j.is_object()) throw SchemaError(where, "expected an object of matrices");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string loc = where + "." + it.key();
        auto key = parse_key(it.key(), loc);
        auto dims = shape(key.first, key.second);
        if (!dims) throw ValidationError(section, "key '" + it.key() + "' does not name a valid pair");
        try {
            out[key] = parse_matrix(f, it.value(), dims->first, dims->second, loc);
        } catch (const ValidationError& err) {
            throw ValidationError(section, err.what());
        }
    }
    return out;
}

template <typename Fn>
auto wrap(const std::string& section, Fn fn) {
    try {
        return fn();
    } catch (const ValidationError&) {
        throw;
    } catch (const SchemaError&) {
        throw;
    } catch (const ScalarParseError&) {
        throw;
    } catch (const std::exception& err) {
        throw ValidationError(section, err.what());
    }
}

bool same_equivariant(const EquivariantSheaf& a, const EquivariantSheaf& b) {
    return a.sheaf == b.sheaf && a.group && b.group && *a.group == *b.group && a.action == b.action &&
           a.eta_vertex == b.eta_vertex && a.eta_edge == b.eta_edge;
}

}  // namespace

bool operator==(const Instance& a, const Instance& b) {
    if (!(a.sheaf == b.sheaf) || a.equivariant.has_value() != b.equivariant.has_value()) return false;
    return !a.equivariant || same_equivariant(*a.equivariant, *b.equivariant);
}

Instance parse_instance(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& err) {
        throw SchemaError("document", std::string("not valid JSON: ") + err.what());
    }
    return instance_from_json(doc);
}

Instance instance_from_json(const json& doc) {
    const json& format = require(doc, "format", "document");
    if (!format.is_string() || format.get<std::string>() != kFormatTag) {
        throw SchemaError("format", "expected \"" + std::string(kFormatTag) + "\"");
    }
    const json& field_j = require(doc, "field", "document");
    if (!field_j.is_string()) throw SchemaError("field", "expected a string");
    const Field f = wrap("field", [&] { return Field::parse(field_j.get<std::string>()); });

    const json& tree_j = require(doc, "tree", "document");
    const std::size_t n = as_index(require(tree_j, "vertices", "tree"), "tree.vertices");
    const json& edges_j = require(tree_j, "edges", "tree");
    if (!edges_j.is_array()) throw SchemaError("tree.edges", "expected an array");
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < edges_j.size(); ++i) {
        const std::string loc = "tree.edges[" + std::to_string(i) + "]";
        auto triple = as_index_list(edges_j[i], loc);
        if (triple.size() != 3) throw SchemaError(loc, "expected [id, x, y]");
        edges.push_back({triple[0], triple[1], triple[2]});
    }
    const Tree tree = wrap("tree", [&] {
        Tree t(n, edges);
        validate_tree(t);
        return t;
    });

    const json& sheaf_j = require(doc, "sheaf", "document");
    Sheaf s;
    s.tree = tree;
    s.field = f;
    s.vdim = as_index_list(require(sheaf_j, "vertex_dims", "sheaf"), "sheaf.vertex_dims");
    s.edim = as_index_list(require(sheaf_j, "edge_dims", "sheaf"), "sheaf.edge_dims");
    if (s.vdim.size() != n) throw ValidationError("sheaf", "vertex_dims has " + std::to_string(s.vdim.size()) + " entries, expected " + std::to_string(n));
    if (s.edim.size() != tree.edge_count()) {
        throw ValidationError("sheaf", "edge_dims has " + std::to_string(s.edim.size()) + " entries, expected " +
                                           std::to_string(tree.edge_count()));
    }
    auto restr_j = sheaf_j.contains("restrictions") ? sheaf_j["restrictions"] : json::object();
    s.gamma = parse_matrix_map(f, restr_j, "sheaf.restrictions", "sheaf",
                               [&](std::size_t v, std::size_t e) -> std::optional<std::pair<std::size_t, std::size_t>> {
                                   if (!tree.has_vertex(v) || !tree.has_edge(e) || !tree.incident(v, e)) return std::nullopt;
                                   return std::pair{s.edim[e], s.vdim[v]};
                               });
    for (const Edge& e : tree.edges()) {
        for (VertexId v : {e.x, e.y}) {
            if (!s.gamma.contains({v, e.id}) && (s.vdim[v] == 0 || s.edim[e.id] == 0)) {
                s.gamma[{v, e.id}] = Matrix(f, s.edim[e.id], s.vdim[v]);
            }
        }
    }
    wrap("sheaf", [&] {
        validate_sheaf(s);
        return 0;
    });

    Instance inst{s, std::nullopt};
    if (!doc.contains("group")) return inst;

    const json& g_j = doc["group"];
    const std::size_t order = as_index(require(g_j, "order", "group"), "group.order");
    const json& mul_j = require(g_j, "mul", "group");
    if (!mul_j.is_array()) throw SchemaError("group.mul", "expected an array of rows");
    std::vector<std::vector<Element>> mul;
    for (std::size_t i = 0; i < mul_j.size(); ++i) mul.push_back(as_index_list(mul_j[i], "group.mul[" + std::to_string(i) + "]"));
    if (mul.size() != order) throw ValidationError("group", "mul has " + std::to_string(mul.size()) + " rows, expected " + std::to_string(order));
    GroupPtr group = wrap("group", [&] { return std::make_shared<const GroupTable>(mul); });

    TreeAction action;
    auto perms = [&](const std::string& key) {
        const json& p = require(g_j, key, "group");
        if (!p.is_array()) throw SchemaError("group." + key, "expected an array");
        std::vector<std::vector<std::size_t>> out;
        for (std::size_t i = 0; i < p.size(); ++i) out.push_back(as_index_list(p[i], "group." + key + "[" + std::to_string(i) + "]"));
        return out;
    };
    action.vertex_perm = perms("vertex_perm");
    action.edge_perm = perms("edge_perm");
    wrap("group", [&] {
        validate_tree_action(tree, *group, action);
        return 0;
    });

    EquivariantSheaf es{s, group, action, {}, {}};
    auto ev_j = g_j.contains("eta_vertices") ? g_j["eta_vertices"] : json::object();
    auto ee_j = g_j.contains("eta_edges") ? g_j["eta_edges"] : json::object();
    auto ev = parse_matrix_map(f, ev_j, "group.eta_vertices", "group",
                               [&](std::size_t g, std::size_t v) -> std::optional<std::pair<std::size_t, std::size_t>> {
                                   if (g >= order || v >= n) return std::nullopt;
                                   return std::pair{s.vdim[action.act(g, v)], s.vdim[v]};
                               });
    auto ee = parse_matrix_map(f, ee_j, "group.eta_edges", "group",
                               [&](std::size_t g, std::size_t e) -> std::optional<std::pair<std::size_t, std::size_t>> {
                                   if (g >= order || e >= tree.edge_count()) return std::nullopt;
                                   return std::pair{s.edim[action.act_edge(g, e)], s.edim[e]};
                               });
    for (Element g = 0; g < order; ++g) {
        std::vector<Matrix> row_v;
        for (VertexId v = 0; v < n; ++v) {
            auto it = ev.find({g, v});
            if (it != ev.end()) {
                row_v.push_back(it->second);
            } else if (s.vdim[v] == 0) {
                row_v.push_back(Matrix(f, s.vdim[action.act(g, v)], 0));
            } else {
                throw ValidationError("group", "missing eta for element " + std::to_string(g) + " at vertex " + std::to_string(v));
            }
        }
        std::vector<Matrix> row_e;
        for (EdgeId e = 0; e < tree.edge_count(); ++e) {
            auto it = ee.find({g, e});
            if (it != ee.end()) {
                row_e.push_back(it->second);
            } else if (s.edim[e] == 0) {
                row_e.push_back(Matrix(f, s.edim[action.act_edge(g, e)], 0));
            } else {
                throw ValidationError("group", "missing eta for element " + std::to_string(g) + " at edge " + std::to_string(e));
            }
        }
        es.eta_vertex.push_back(std::move(row_v));
        es.eta_edge.push_back(std::move(row_e));
    }
    wrap("group", [&] {
        validate_action(es);
        check_coboundary_equivariance(es);
        return 0;
    });
    inst.equivariant = std::move(es);
    return inst;
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (const auto& row : m.to_strings()) rows.push_back(row);
    return rows;
}

json instance_to_json(const Instance& inst) {
    const Sheaf& s = inst.sheaf;
    json doc;
    doc["format"] = kFormatTag;
    doc["field"] = s.field.to_string();
    json edges = json::array();
    for (const Edge& e : s.tree.edges()) edges.push_back({e.id, e.x, e.y});
    doc["tree"] = {{"vertices", s.tree.vertex_count()}, {"edges", edges}};
    json restr = json::object();
    for (const auto& [key, m] : s.gamma) restr[std::to_string(key.first) + ":" + std::to_string(key.second)] = matrix_to_json(m);
    doc["sheaf"] = {{"vertex_dims", s.vdim}, {"edge_dims", s.edim}, {"restrictions", restr}};
    if (inst.equivariant) {
        const EquivariantSheaf& es = *inst.equivariant;
        json ev = json::object();
        json ee = json::object();
        for (Element g = 0; g < es.group->order(); ++g) {
            for (VertexId v = 0; v < s.tree.vertex_count(); ++v) {
                ev[std::to_string(g) + ":" + std::to_string(v)] = matrix_to_json(es.eta_vertex[g][v]);
            }
            for (EdgeId e = 0; e < s.tree.edge_count(); ++e) {
                ee[std::to_string(g) + ":" + std::to_string(e)] = matrix_to_json(es.eta_edge[g][e]);
            }
        }
        doc["group"] = {{"order", es.group->order()},
                        {"mul", es.group->table()},
                        {"vertex_perm", es.action.vertex_perm},
                        {"edge_perm", es.action.edge_perm},
                        {"eta_vertices", ev},
                        {"eta_edges", ee}};
    }
    return doc;
}

std::string serialize_instance(const Instance& inst) { return instance_to_json(inst).dump(1) + "\n"; }

std::string instance_digest(const Instance& inst) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : instance_to_json(inst).dump()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace sheaftree
