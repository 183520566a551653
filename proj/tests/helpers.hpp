#pragma once

// Shared fixtures: the SHE and Phi^4 alphabets/rules used across test suites.

#include <random>

#include "rstlab/rules.hpp"
#include "rstlab/tree.hpp"

namespace rsttest {

using namespace rst;

inline Rational kappa_default() { return Rational(1, 100); }

/// SHE on the 1d torus: s = (2,1), hom(t) = 2, hom(Xi) = -3/2 - kappa,
/// reg(t) = 1/2 - 2 kappa, reg(Xi) = hom(Xi).
inline Scaling she_scaling() { return Scaling({2, 1}); }

inline TypeTable she_table(Rational kappa = kappa_default()) {
    TypeTable t;
    t.add_kernel("t", Rational(2), Rational(1, 2) - Rational(2) * kappa);
    t.add_noise("Xi", Rational(-3, 2) - kappa, Rational(-3, 2) - kappa);
    return t;
}

/// Multisets [(Xi,0),(t,0)^j] and [(t,0)^j] for j = 0..max_t.
inline Rule she_rule(int max_t = 6) {
    Rule r;
    int dims = 2;
    for (int j = 0; j <= max_t; ++j) {
        Multiset with_noise, without;
        with_noise.add("Xi", MultiIndex::zero(dims), 1);
        if (j) {
            with_noise.add("t", MultiIndex::zero(dims), j);
            without.add("t", MultiIndex::zero(dims), j);
        }
        r.entries["t"].insert(with_noise);
        r.entries["t"].insert(without);
    }
    r.entries["Xi"].insert(Multiset{});
    return r;
}

/// Phi^4 in d = 3: s = (2,1,1,1), hom(Xi) = -5/2 - kappa, reg(t) = -1/2 - 2 kappa.
inline Scaling phi4_scaling() { return Scaling({2, 1, 1, 1}); }

inline TypeTable phi4_table(Rational kappa = kappa_default()) {
    TypeTable t;
    t.add_kernel("t", Rational(2), Rational(-1, 2) - Rational(2) * kappa);
    t.add_noise("Xi", Rational(-5, 2) - kappa, Rational(-5, 2) - kappa);
    return t;
}

inline Rule phi4_rule() {
    Rule r;
    int dims = 4;
    for (int j = 0; j <= 3; ++j) {
        Multiset m;
        if (j) m.add("t", MultiIndex::zero(dims), j);
        r.entries["t"].insert(m);
    }
    Multiset noise;
    noise.add("Xi", MultiIndex::zero(dims), 1);
    r.entries["t"].insert(noise);
    r.entries["Xi"].insert(Multiset{});
    return r;
}

/// I(Xi)Xi: root with a noise edge and one planted noise.
inline DecoratedTree she_cherry() {
    DecoratedTree t = DecoratedTree::noise("Xi", 2);
    int mid = (int)t.nodes.size();
    t.nodes.push_back({0, "t", MultiIndex::zero(2), MultiIndex::zero(2)});
    t.nodes.push_back({mid, "Xi", MultiIndex::zero(2), MultiIndex::zero(2)});
    return t;
}

/// Random decorated tree over the given alphabet, at most `max_edges` edges.
/// Shapes only need to be structurally valid, not rule-conforming.
inline DecoratedTree random_tree(std::mt19937& rng, const TypeTable& table, int dims, int max_edges,
                                 int dec_budget = 2) {
    DecoratedTree t = DecoratedTree::single(dims);
    std::uniform_int_distribution<int> coin(0, 99);
    int edges = std::uniform_int_distribution<int>(0, max_edges)(rng);
    std::vector<int> attachable{0};  // nodes that may receive children
    for (int e = 0; e < edges; ++e) {
        int at = attachable[std::uniform_int_distribution<size_t>(0, attachable.size() - 1)(rng)];
        bool noise = coin(rng) < 40;
        // at most one noise edge per node
        if (noise) {
            bool has = false;
            for (const auto& n : t.nodes)
                if (n.parent == at && table.is_noise(n.edge_type)) has = true;
            if (has) noise = false;
        }
        TreeNode n;
        n.parent = at;
        n.edge_dec = MultiIndex::zero(dims);
        n.node_dec = MultiIndex::zero(dims);
        if (noise) {
            const auto& ids = table.noise_types;
            n.edge_type = ids[std::uniform_int_distribution<size_t>(0, ids.size() - 1)(rng)];
            t.nodes.push_back(n);
        } else {
            const auto& ids = table.kernel_types;
            n.edge_type = ids[std::uniform_int_distribution<size_t>(0, ids.size() - 1)(rng)];
            if (coin(rng) < 15 && dec_budget > 0) {
                int i = std::uniform_int_distribution<int>(0, dims - 1)(rng);
                n.edge_dec = MultiIndex::unit(dims, i);
            }
            t.nodes.push_back(n);
            attachable.push_back((int)t.nodes.size() - 1);
        }
    }
    // sprinkle node decorations on non-noise nodes
    for (int i = 0; i < t.size(); ++i) {
        bool is_noise_leaf = t.nodes[i].parent >= 0 && table.is_noise(t.nodes[i].edge_type);
        if (!is_noise_leaf && coin(rng) < 20 && dec_budget > 0) {
            int dir = std::uniform_int_distribution<int>(0, dims - 1)(rng);
            t.nodes[i].node_dec = MultiIndex::unit(dims, dir);
        }
    }
    return t;
}

/// Relabels node ids by a random permutation (root moves too).
inline DecoratedTree shuffle_ids(std::mt19937& rng, const DecoratedTree& t) {
    std::vector<int> perm(t.size());
    for (int i = 0; i < t.size(); ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    DecoratedTree out;
    out.dims = t.dims;
    out.nodes.resize(t.size());
    for (int i = 0; i < t.size(); ++i) {
        TreeNode n = t.nodes[i];
        if (n.parent >= 0) n.parent = perm[n.parent];
        out.nodes[perm[i]] = n;
    }
    out.root = perm[t.root];
    return out;
}

}  // namespace rsttest
