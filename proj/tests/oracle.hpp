#pragma once

// Test-side oracles, written independently of the library algorithms.

#include <cstdint>
#include <fstream>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "sheaftree/equivariant.hpp"
#include "sheaftree/instance.hpp"

namespace oracle {

using namespace sheaftree;

inline std::string fixture_path(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name; }

inline std::string read_fixture(const std::string& name) {
    std::ifstream in(fixture_path(name));
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Instance load(const std::string& name) { return parse_instance(read_fixture(name)); }

inline EquivariantSheaf load_equivariant(const std::string& name) { return *load(name).equivariant; }

/// Plain Gaussian elimination on copied entries.
inline std::size_t rank_of(const Matrix& m) {
    const std::size_t rows = m.rows(), cols = m.cols();
    if (m.field().is_rational()) {
        std::vector<std::vector<mpq_class>> a(rows, std::vector<mpq_class>(cols));
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) a[i][j] = m(i, j).rational();
        std::size_t r = 0;
        for (std::size_t c = 0; c < cols && r < rows; ++c) {
            std::size_t p = r;
            while (p < rows && a[p][c] == 0) ++p;
            if (p == rows) continue;
            std::swap(a[p], a[r]);
            for (std::size_t i = r + 1; i < rows; ++i) {
                if (a[i][c] == 0) continue;
                mpq_class f = a[i][c] / a[r][c];
                for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
            }
            ++r;
        }
        return r;
    }
    const std::uint64_t p = m.field().characteristic();
    auto pw = [p](std::uint64_t b, std::uint64_t e) {
        std::uint64_t out = 1;
        b %= p;
        while (e) {
            if (e & 1) out = out * b % p;
            b = b * b % p;
            e >>= 1;
        }
        return out;
    };
    std::vector<std::vector<std::uint64_t>> a(rows, std::vector<std::uint64_t>(cols));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) a[i][j] = m(i, j).residue();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && a[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(a[piv], a[r]);
        const std::uint64_t inv = pw(a[r][c], p - 2);
        for (std::size_t i = r + 1; i < rows; ++i) {
            if (a[i][c] == 0) continue;
            const std::uint64_t f = a[i][c] * inv % p;
            for (std::size_t j = c; j < cols; ++j) a[i][j] = (a[i][j] + (p - f) * a[r][j]) % p;
        }
        ++r;
    }
    return r;
}

inline bool invertible(const Matrix& m) { return m.rows() == m.cols() && rank_of(m) == m.rows(); }

/// Rows of a matrix stacked, for rank checks of several row sets at once.
inline Matrix stack_rows(const Field& f, std::size_t cols, const std::vector<Matrix>& parts) {
    Matrix out(f, 0, cols);
    for (const auto& p : parts) out = vstack(out, p);
    return out;
}

/// dim(a + b) from the spanning rows alone.
inline std::size_t sum_dim(const Subspace& a, const Subspace& b) {
    return rank_of(vstack(a.basis(), b.basis()));
}

/// dim(a intersect b) = dim a + dim b - dim(a + b).
inline std::size_t meet_dim(const Subspace& a, const Subspace& b) { return a.dim() + b.dim() - sum_dim(a, b); }

/// Does rho(g) map span(rows of w) into itself, for every g? w is in ambient coordinates.
inline bool invariant_rows(const Representation& rho, const Matrix& w) {
    const std::size_t k = rank_of(w);
    for (const Matrix& m : rho.matrices) {
        Matrix moved = (m * w.transpose()).transpose();
        if (rank_of(vstack(w, moved)) != k) return false;
    }
    return true;
}

inline Scalar trace(const Matrix& m) {
    Scalar t = Scalar::zero(m.field());
    for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
    return t;
}

/// Vertices on the unique path between a and b, by BFS parents.
inline std::set<VertexId> tree_path(const Tree& t, VertexId a, VertexId b) {
    std::vector<std::vector<VertexId>> adj(t.vertex_count());
    for (const Edge& e : t.edges()) {
        adj[e.x].push_back(e.y);
        adj[e.y].push_back(e.x);
    }
    std::vector<long> parent(t.vertex_count(), -1);
    std::queue<VertexId> q;
    q.push(a);
    parent[a] = static_cast<long>(a);
    while (!q.empty()) {
        VertexId v = q.front();
        q.pop();
        for (VertexId w : adj[v]) {
            if (parent[w] < 0) {
                parent[w] = static_cast<long>(v);
                q.push(w);
            }
        }
    }
    std::set<VertexId> out{b};
    for (VertexId v = b; v != a; v = static_cast<VertexId>(parent[v])) out.insert(static_cast<VertexId>(parent[v]));
    return out;
}

/// Convex hull as the union of pairwise paths.
inline std::set<VertexId> hull_by_paths(const Tree& t, const std::set<VertexId>& w) {
    std::set<VertexId> out;
    for (VertexId a : w)
        for (VertexId b : w) {
            auto p = tree_path(t, a, b);
            out.insert(p.begin(), p.end());
        }
    return out;
}

/// Character of the induced representation by the coset formula.
inline std::vector<Scalar> induced_character(const GroupTable& g, const Representation& sigma) {
    std::map<Element, Scalar> chi;
    for (std::size_t i = 0; i < sigma.elements.size(); ++i) chi.emplace(sigma.elements[i], trace(sigma.matrices[i]));
    std::vector<Scalar> out;
    for (Element x = 0; x < g.order(); ++x) {
        Scalar sum = Scalar::zero(sigma.field);
        for (Element h = 0; h < g.order(); ++h) {
            Element conj = g.mul(g.inv(h), g.mul(x, h));
            auto it = chi.find(conj);
            if (it != chi.end()) sum += it->second;
        }
        // each coset contributes |K| times
        out.push_back(sum / Scalar(sigma.field, static_cast<long>(sigma.elements.size())));
    }
    return out;
}

/// Number of vectors in F_p^n killed by m, by enumeration.
inline std::size_t brute_kernel_count(const Matrix& m) {
    const std::uint64_t p = m.field().characteristic();
    const std::size_t n = m.cols();
    std::vector<std::uint64_t> v(n, 0);
    std::size_t count = 0;
    while (true) {
        bool zero = true;
        for (std::size_t i = 0; i < m.rows() && zero; ++i) {
            std::uint64_t acc = 0;
            for (std::size_t j = 0; j < n; ++j) acc = (acc + m(i, j).residue() * v[j]) % p;
            zero = acc == 0;
        }
        if (zero) ++count;
        std::size_t k = 0;
        while (k < n && ++v[k] == p) v[k++] = 0;
        if (k == n) break;
    }
    return count;
}

/// The 1-cochain action rebuilt from the tree action: block (ge, e) = sign * eta_{g,e}.
inline Matrix cochain_action(const EquivariantSheaf& es, Element g, bool with_sign) {
    const Sheaf& s = es.sheaf;
    std::vector<std::size_t> off(s.edim.size() + 1, 0);
    for (std::size_t e = 0; e < s.edim.size(); ++e) off[e + 1] = off[e] + s.edim[e];
    Matrix out(s.field, off.back(), off.back());
    for (const Edge& e : s.tree.edges()) {
        const EdgeId ge = es.action.act_edge(g, e.id);
        const Edge& img = s.tree.edge(ge);
        const bool kept = es.action.act(g, e.x) == img.x;
        Matrix block = es.eta_edge[g][e.id];
        if (with_sign && !kept) block = -block;
        out.set_block(off[ge], off[e.id], block);
    }
    return out;
}

}  // namespace oracle
