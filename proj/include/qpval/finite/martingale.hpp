#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "qpval/finite/linalg.hpp"
#include "qpval/finite/space.hpp"

namespace qpval::finite {

// One-step martingale constraints at a node (t, block) of positive reference mass.
struct LocalPolytope {
    bool active = false;                     // false for reference-null blocks
    std::vector<std::size_t> children;       // positive-mass blocks of partition t+1 inside this block
    RationalMatrix increments;               // [child][asset] = S_{t+1}(child) - S_t(block)
    std::vector<std::vector<Rational>> vertices; // extreme conditional laws over `children`
    bool has_interior = false;               // some conditional martingale law charges every child
};

// Closed polytope of martingale measures on the terminal public sigma-algebra, in coordinates
// q[b] = Q(block b of the terminal partition).
struct MartingalePolytope {
    std::size_t num_variables = 0;
    RationalMatrix equality_lhs;   // together with q >= 0: equality_lhs * q = equality_rhs
    std::vector<Rational> equality_rhs;
    std::vector<std::vector<Rational>> vertices;
    bool empty = true;
    bool has_equivalent = false;   // a martingale measure charging every positive-mass terminal block exists
    std::vector<std::vector<LocalPolytope>> nodes; // [t][block of partition t], t < T
    std::vector<bool> terminal_positive;            // reference mass of each terminal block is positive
};

namespace detail {

inline std::vector<std::vector<Rational>> local_vertices(const RationalMatrix& increments, std::size_t num_assets)
{
    const std::size_t n = increments.size();
    std::set<std::vector<Rational>> found;
    for (std::size_t k = 1; k <= std::min(n, num_assets + 1); ++k) {
        for_each_subset(n, k, [&](const std::vector<std::size_t>& support) {
            RationalMatrix a(num_assets + 1, std::vector<Rational>(k));
            std::vector<Rational> rhs(num_assets + 1, Rational(0));
            rhs[num_assets] = 1;
            for (std::size_t j = 0; j < k; ++j) {
                for (std::size_t asset = 0; asset < num_assets; ++asset) a[asset][j] = increments[support[j]][asset];
                a[num_assets][j] = 1;
            }
            auto sol = solve_unique(a, rhs);
            if (!sol) return true;
            if (std::any_of(sol->begin(), sol->end(), [](const Rational& v) { return v < 0; })) return true;
            std::vector<Rational> v(n, Rational(0));
            for (std::size_t j = 0; j < k; ++j) v[support[j]] = (*sol)[j];
            found.insert(std::move(v));
            return true;
        });
    }
    return {found.begin(), found.end()};
}

} // namespace detail

// Enumerates the martingale measures of a finite market: local one-step polytopes per node, their
// vertices, and the global vertices assembled as products of local extreme conditional laws.
inline MartingalePolytope martingale_measures(const Market& market, std::size_t max_vertices = 200000)
{
    const auto& filt = market.filtration();
    const auto& p = market.reference();
    const std::size_t horizon = market.horizon();
    const std::size_t d = market.num_assets();
    const Partition& terminal = filt.terminal();

    MartingalePolytope poly;
    poly.num_variables = terminal.num_blocks();
    poly.terminal_positive.resize(terminal.num_blocks());
    for (std::size_t b = 0; b < terminal.num_blocks(); ++b) poly.terminal_positive[b] = p.mass(terminal.block(b)) > 0;

    poly.nodes.resize(horizon);
    bool all_nonempty = true, all_interior = true;
    for (std::size_t t = 0; t < horizon; ++t) {
        const Partition& now = filt.at(t);
        const Partition& next = filt.at(t + 1);
        poly.nodes[t].resize(now.num_blocks());
        for (std::size_t b = 0; b < now.num_blocks(); ++b) {
            auto& node = poly.nodes[t][b];
            if (p.mass(now.block(b)) == 0) continue;
            node.active = true;
            std::set<std::size_t> kids;
            for (auto w : now.block(b))
                if (p[w] > 0) kids.insert(next.block_of(w));
            node.children.assign(kids.begin(), kids.end());
            for (auto c : node.children) {
                std::vector<Rational> inc(d);
                for (std::size_t k = 0; k < d; ++k) inc[k] = market.price(t + 1, k, c) - market.price(t, k, b);
                node.increments.push_back(std::move(inc));
            }
            node.vertices = detail::local_vertices(node.increments, d);
            std::vector<bool> charged(node.children.size(), false);
            for (const auto& v : node.vertices)
                for (std::size_t j = 0; j < v.size(); ++j)
                    if (v[j] > 0) charged[j] = true;
            node.has_interior = !node.vertices.empty() && std::all_of(charged.begin(), charged.end(), [](bool c) { return c; });
            all_nonempty = all_nonempty && !node.vertices.empty();
            all_interior = all_interior && node.has_interior;
        }
    }

    // Linear description over terminal-block masses.
    const std::size_t nv = poly.num_variables;
    for (std::size_t t = 0; t < horizon; ++t) {
        for (std::size_t b = 0; b < filt.at(t).num_blocks(); ++b) {
            const auto& node = poly.nodes[t][b];
            if (!node.active) continue;
            for (std::size_t k = 0; k < d; ++k) {
                std::vector<Rational> row(nv, Rational(0));
                for (auto w : filt.at(t).block(b)) {
                    const auto leaf = terminal.block_of(w);
                    const auto child = filt.at(t + 1).block_of(w);
                    row[leaf] = market.price(t + 1, k, child) - market.price(t, k, b);
                }
                poly.equality_lhs.push_back(std::move(row));
                poly.equality_rhs.push_back(0);
            }
        }
    }
    poly.equality_lhs.emplace_back(nv, Rational(1));
    poly.equality_rhs.push_back(1);
    for (std::size_t leaf = 0; leaf < nv; ++leaf) {
        if (poly.terminal_positive[leaf]) continue;
        std::vector<Rational> row(nv, Rational(0));
        row[leaf] = 1;
        poly.equality_lhs.push_back(std::move(row));
        poly.equality_rhs.push_back(0);
    }

    const bool root_positive = [&] {
        for (std::size_t b = 0; b < filt.at(0).num_blocks(); ++b)
            if (p.mass(filt.at(0).block(b)) > 0) return true;
        return false;
    }();
    poly.empty = !(all_nonempty && root_positive);
    poly.has_equivalent = !poly.empty && all_interior;
    if (poly.empty) return poly;

    // Conditional laws over terminal blocks given each node, memoised by (t, block).
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::vector<Rational>>> memo;
    std::function<const std::vector<std::vector<Rational>>&(std::size_t, std::size_t)> subtree =
        [&](std::size_t t, std::size_t b) -> const std::vector<std::vector<Rational>>& {
        auto key = std::make_pair(t, b);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        std::set<std::vector<Rational>> out;
        if (t == horizon) {
            std::vector<Rational> e(nv, Rational(0));
            e[b] = 1;
            out.insert(std::move(e));
        } else {
            const auto& node = poly.nodes[t][b];
            for (const auto& v : node.vertices) {
                std::vector<std::vector<Rational>> acc{std::vector<Rational>(nv, Rational(0))};
                for (std::size_t j = 0; j < node.children.size(); ++j) {
                    if (v[j] == 0) continue;
                    const auto& sub = subtree(t + 1, node.children[j]);
                    std::vector<std::vector<Rational>> next;
                    next.reserve(acc.size() * sub.size());
                    for (const auto& a : acc)
                        for (const auto& s : sub) {
                            auto combined = a;
                            for (std::size_t i = 0; i < nv; ++i)
                                if (s[i] != 0) combined[i] += v[j] * s[i];
                            next.push_back(std::move(combined));
                        }
                    if (next.size() > max_vertices) throw CapabilityError("martingale polytope has too many vertices to enumerate");
                    acc = std::move(next);
                }
                out.insert(acc.begin(), acc.end());
            }
        }
        return memo.emplace(key, std::vector<std::vector<Rational>>(out.begin(), out.end())).first->second;
    };

    std::set<std::vector<Rational>> global;
    for (std::size_t b = 0; b < filt.at(0).num_blocks(); ++b) {
        if (p.mass(filt.at(0).block(b)) == 0) continue;
        const auto& sub = subtree(0, b);
        global.insert(sub.begin(), sub.end());
    }
    poly.vertices.assign(global.begin(), global.end());
    return poly;
}

// Exact membership test for the closed martingale polytope.
inline bool is_martingale_measure(const MartingalePolytope& poly, const std::vector<Rational>& q)
{
    if (q.size() != poly.num_variables) return false;
    for (const auto& v : q)
        if (v < 0) return false;
    for (std::size_t r = 0; r < poly.equality_lhs.size(); ++r) {
        Rational s = 0;
        for (std::size_t i = 0; i < q.size(); ++i) s += poly.equality_lhs[r][i] * q[i];
        if (s != poly.equality_rhs[r]) return false;
    }
    return true;
}

// True when q charges every terminal block of positive reference mass.
inline bool is_equivalent(const MartingalePolytope& poly, const std::vector<Rational>& q)
{
    for (std::size_t i = 0; i < q.size(); ++i)
        if (poly.terminal_positive[i] && q[i] == 0) return false;
    return true;
}

inline std::vector<Rational> barycenter(const std::vector<std::vector<Rational>>& points)
{
    if (points.empty()) throw DomainError("barycenter of an empty point set");
    std::vector<Rational> c(points.front().size(), Rational(0));
    for (const auto& pt : points)
        for (std::size_t i = 0; i < c.size(); ++i) c[i] += pt[i];
    for (auto& v : c) v /= static_cast<long>(points.size());
    return c;
}

} // namespace qpval::finite
