#pragma once

// Test-only oracles, independent of the production enumeration path:
//  - brute-force tree generation (all shapes up to an edge budget, rule
//    applied only as a post-filter),
//  - automorphism counting by exhaustive bijection search.

#include <map>
#include <set>

#include "rstlab/rules.hpp"
#include "rstlab/tree.hpp"

namespace rstoracle {

using namespace rst;

/// Every edge decoration that occurs in some rule slot.
inline std::vector<MultiIndex> slot_decorations(const Rule& rule, const TypeTable& table, int dims) {
    std::set<MultiIndex> decs;
    decs.insert(MultiIndex::zero(dims));
    for (const auto& [t, set] : rule.entries)
        for (const auto& m : set)
            for (const auto& [slot, mult] : m.items)
                if (!table.is_noise(slot.type)) decs.insert(slot.dec);
    return {decs.begin(), decs.end()};
}

/// All decorated trees with at most max_edges edges whose homogeneity is below
/// `cutoff`, ignoring the rule except for the alphabet and the slot decoration
/// set. Depth-first with memoization per exact edge count.
inline std::vector<DecoratedTree> brute_force_trees(const Rule& rule, const TypeTable& table,
                                                    const Scaling& scaling, const Rational& cutoff,
                                                    int max_edges) {
    const int dims = scaling.dims();
    const auto edge_decs = slot_decorations(rule, table, dims);

    // most negative contribution a single additional edge can make
    Rational worst(0);
    for (const auto& xi : table.noise_types)
        if (table.homogeneity_of(xi) < worst) worst = table.homogeneity_of(xi);
    for (const auto& t : table.kernel_types)
        for (const auto& d : edge_decs) {
            Rational gain = table.homogeneity_of(t) - Rational(d.scaled_degree(scaling));
            if (gain < worst) worst = gain;
        }
    auto ceiling = [&](int edges) { return cutoff - Rational(max_edges - edges) * worst; };

    struct Item {
        DecoratedTree tree;
        Rational hom;
    };
    // memo[e] = all admissible trees with exactly e edges, deduped by code
    std::vector<std::vector<Item>> memo(max_edges + 1);
    std::vector<std::set<TreeCode>> seen(max_edges + 1);

    auto emit = [&](int e, DecoratedTree&& t) {
        Rational h = homogeneity(t, table, scaling);
        if (!(h < ceiling(e))) return;
        TreeCode c = canonical_encode(t);
        if (!seen[e].insert(c).second) return;
        memo[e].push_back(Item{std::move(t), h});
    };

    // e = 0: bare decorated nodes
    {
        Rational room = ceiling(0);
        int budget = room.is_positive() ? (int)std::min<long long>(10, room.num() / room.den() + 1) : 0;
        for (const auto& k : multi_indices_up_to(scaling, budget))
            emit(0, DecoratedTree::single(dims, k));
    }

    // branch inventory per subtree edge count p-1: (type, dec, subtree index)
    struct Branch {
        std::string type;
        MultiIndex dec;
        int sub_edges;  // -1 marks a noise branch
        int sub_index;
    };
    for (int e = 1; e <= max_edges; ++e) {
        std::vector<Branch> branches;
        for (int p = 1; p <= e; ++p) {
            if (p == 1)
                for (const auto& xi : table.noise_types)
                    branches.push_back(Branch{xi, MultiIndex::zero(dims), -1, -1});
            for (const auto& t : table.kernel_types)
                for (const auto& d : edge_decs)
                    for (int i = 0; i < (int)memo[p - 1].size(); ++i)
                        branches.push_back(Branch{t, d, p - 1, i});
        }
        auto branch_edges = [&](const Branch& b) { return b.sub_edges < 0 ? 1 : b.sub_edges + 1; };

        // non-decreasing multiset of branches totalling e edges
        std::vector<int> picked;
        std::function<void(int, int)> pick = [&](int from, int left) {
            if (left == 0) {
                // assemble with every root decoration that fits
                DecoratedTree t = DecoratedTree::single(dims);
                bool root_noise_used = false;
                for (int bi : picked) {
                    const Branch& b = branches[bi];
                    if (b.sub_edges < 0) {
                        if (root_noise_used) return;  // reduced trees: one noise per node
                        root_noise_used = true;
                        TreeNode leaf;
                        leaf.parent = t.root;
                        leaf.edge_type = b.type;
                        leaf.edge_dec = MultiIndex::zero(dims);
                        leaf.node_dec = MultiIndex::zero(dims);
                        t.nodes.push_back(leaf);
                    } else {
                        DecoratedTree planted =
                            plant(b.type, b.dec, memo[b.sub_edges][b.sub_index].tree, table);
                        // graft planted's branch under t's root
                        int base = (int)t.nodes.size();
                        for (int i = 1; i < planted.size(); ++i) {
                            TreeNode n = planted.nodes[i];
                            n.parent = n.parent == 0 ? t.root : base + n.parent - 1;
                            t.nodes.push_back(n);
                        }
                    }
                }
                Rational h0 = homogeneity(t, table, scaling);
                Rational room = ceiling(e) - h0;
                if (!room.is_positive()) return;
                long long q = room.num() / room.den();
                if (Rational(q) == room) --q;
                q = std::min<long long>(q, 10);  // same node-decoration cap as production
                for (const auto& k : multi_indices_up_to(scaling, (int)q)) {
                    DecoratedTree dec_t = t;
                    dec_t.nodes[dec_t.root].node_dec = k;
                    emit(e, std::move(dec_t));
                }
                return;
            }
            for (int i = from; i < (int)branches.size(); ++i) {
                int be = branch_edges(branches[i]);
                if (be > left) continue;
                picked.push_back(i);
                pick(i, left - be);
                picked.pop_back();
            }
        };
        pick(0, e);
    }

    std::vector<DecoratedTree> out;
    for (int e = 0; e <= max_edges; ++e)
        for (auto& it : memo[e])
            if (it.hom < cutoff) out.push_back(it.tree);
    return out;
}

/// Rule-conforming subset, keyed by code, per kernel target type.
inline std::map<std::string, std::map<TreeCode, DecoratedTree>> brute_force_family(
    const Rule& rule, const TypeTable& table, const Scaling& scaling, const Rational& cutoff,
    int max_edges) {
    auto all = brute_force_trees(rule, table, scaling, cutoff, max_edges);
    std::map<std::string, std::map<TreeCode, DecoratedTree>> fam;
    for (const auto& t : table.kernel_types)
        for (const auto& tree : all)
            if (conforms(tree, rule, t)) fam[t].emplace(canonical_encode(tree), tree);
    return fam;
}

/// Number of root-preserving bijections of the vertex set preserving parent
/// links, edge types, and both decorations. Exhaustive search.
inline long long count_automorphisms(const DecoratedTree& t) {
    std::vector<int> perm(t.size());
    for (int i = 0; i < t.size(); ++i) perm[i] = i;
    long long count = 0;
    std::sort(perm.begin(), perm.end());
    do {
        if (perm[t.root] != t.root) continue;
        bool ok = true;
        for (int i = 0; i < t.size() && ok; ++i) {
            const TreeNode& a = t.nodes[i];
            const TreeNode& b = t.nodes[perm[i]];
            if (a.parent < 0) {
                ok = b.parent < 0;
                continue;
            }
            ok = b.parent == perm[a.parent] && a.edge_type == b.edge_type &&
                 a.edge_dec == b.edge_dec && a.node_dec == b.node_dec;
        }
        if (ok) ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return count;
}

}  // namespace rstoracle
