#include "rstlab/rules.hpp"

#include <algorithm>
#include <functional>

namespace rst {

void Multiset::add(const std::string& type, const MultiIndex& dec, int mult) {
    if (mult <= 0) throw std::invalid_argument("Multiset::add: multiplicity must be positive");
    Slot s{type, dec};
    for (auto& [slot, m] : items) {
        if (slot == s) {
            m += mult;
            return;
        }
    }
    items.emplace_back(s, mult);
    std::sort(items.begin(), items.end());
}

int Multiset::count(const Slot& s) const {
    for (const auto& [slot, m] : items)
        if (slot == s) return m;
    return 0;
}

int Multiset::total() const {
    int n = 0;
    for (const auto& [slot, m] : items) n += m;
    return n;
}

std::vector<Multiset> Multiset::sub_multisets() const {
    std::vector<Multiset> out{Multiset{}};
    for (const auto& [slot, m] : items) {
        std::vector<Multiset> next;
        for (const auto& base : out)
            for (int c = 0; c <= m; ++c) {
                Multiset ext = base;
                if (c) ext.add(slot.type, slot.dec, c);
                next.push_back(std::move(ext));
            }
        out = std::move(next);
    }
    return out;
}

std::string Multiset::str() const {
    std::string s = "[";
    bool first = true;
    for (const auto& [slot, m] : items)
        for (int i = 0; i < m; ++i) {
            if (!first) s += ",";
            first = false;
            s += "(" + slot.type + "," + slot.dec.str() + ")";
        }
    return s + "]";
}

std::vector<std::string> check_normal(const Rule& rule, const TypeTable& table) {
    std::vector<std::string> violations;
    for (const auto& xi : table.noise_types) {
        const auto& set = rule.of(xi);
        if (set.size() != 1 || !set.begin()->empty())
            violations.push_back("noise type '" + xi + "' must have entry set {[]}");
    }
    for (const auto& t : table.kernel_types) {
        const auto& set = rule.of(t);
        if (set.empty()) {
            violations.push_back("kernel type '" + t + "' has no entries (the empty multiset must be admissible)");
            continue;
        }
        if (!rule.admits(t, Multiset{}))
            violations.push_back("kernel type '" + t + "' is missing the empty multiset");
        for (const auto& m : set) {
            int noise_slots = 0;
            for (const auto& [slot, mult] : m.items) {
                if (!table.has_type(slot.type)) {
                    violations.push_back("entry " + m.str() + " of '" + t + "' uses unknown type '" +
                                         slot.type + "'");
                    continue;
                }
                if (table.is_noise(slot.type)) {
                    noise_slots += mult;
                    if (!slot.dec.is_zero())
                        violations.push_back("entry " + m.str() + " of '" + t +
                                             "' has a derivative-decorated noise slot");
                }
            }
            if (noise_slots > 1)
                violations.push_back("entry " + m.str() + " of '" + t + "' has more than one noise slot");
            for (const auto& sub : m.sub_multisets())
                if (!rule.admits(t, sub))
                    violations.push_back("entry " + m.str() + " of '" + t + "' is missing sub-multiset " +
                                         sub.str());
        }
    }
    std::sort(violations.begin(), violations.end());
    violations.erase(std::unique(violations.begin(), violations.end()), violations.end());
    return violations;
}

namespace {

Rational reg_of_multiset(const Multiset& m, const TypeTable& table, const Scaling& scaling) {
    Rational r(0);
    for (const auto& [slot, mult] : m.items)
        r += Rational(mult) * (table.reg_of(slot.type) - Rational(slot.dec.scaled_degree(scaling)));
    return r;
}

}  // namespace

SubcritReport check_subcritical(const Rule& rule, const TypeTable& table, const Scaling& scaling) {
    SubcritReport rep;
    for (const auto& xi : table.noise_types) {
        if (table.reg_of(xi) > table.homogeneity_of(xi)) {
            rep.witness = {xi, Multiset{}};
            rep.message = "reg(" + xi + ") > hom(" + xi + ")";
            return rep;
        }
    }
    bool have = false;
    for (const auto& t : table.kernel_types) {
        for (const auto& m : rule.of(t)) {
            Rational slack =
                table.homogeneity_of(t) + reg_of_multiset(m, table, scaling) - table.reg_of(t);
            if (!slack.is_positive()) {
                rep.witness = {t, m};
                rep.message = "entry " + m.str() + " of '" + t + "' has slack " + slack.str();
                return rep;
            }
            if (!have || slack < rep.gap) rep.gap = slack;
            have = true;
        }
    }
    if (!have) {
        rep.message = "rule has no kernel entries";
        return rep;
    }
    rep.subcritical = true;
    return rep;
}

bool conforms(const DecoratedTree& tree, const Rule& rule, const std::string& target_type) {
    auto adj = tree.children();
    for (int u = 0; u < tree.size(); ++u) {
        Multiset m;
        for (int c : adj[u]) m.add(tree.nodes[c].edge_type, tree.nodes[c].edge_dec);
        const std::string& below = u == tree.root ? target_type : tree.nodes[u].edge_type;
        if (!rule.admits(below, m)) return false;
    }
    return true;
}

namespace {

struct PoolEntry {
    TreeCode code;
    Rational hom;
    int n_nodes;
};

// Validates the structural assumptions on a rule before enumeration.
void require_enumerable(const Rule& rule, const TypeTable& table) {
    auto v = check_normal(rule, table);
    if (!v.empty()) throw std::invalid_argument("enumerate_trees: rule is not normal: " + v.front());
}

}  // namespace

TreeFamily enumerate_trees(const Rule& rule, const TypeTable& table, const Scaling& scaling,
                           const Rational& cutoff, bool negative_only, const EnumOptions& opts) {
    require_enumerable(rule, table);
    SubcritReport sub = check_subcritical(rule, table, scaling);
    if (!sub.subcritical)
        throw std::invalid_argument("enumerate_trees: rule not subcritical: " + sub.message);
    const Rational gamma = negative_only && Rational(0) < cutoff ? Rational(0) : cutoff;
    const Rational delta = sub.gap;

    // Homogeneity ceiling per type: a family member of type l that is nested
    // inside another member obeys |tau| < max_t(gamma + |t| - reg(t)) - (|l| - reg(l)) - delta.
    Rational big = gamma;
    bool first = true;
    for (const auto& t : table.kernel_types) {
        Rational v = gamma + table.homogeneity_of(t) - table.reg_of(t);
        if (first || big < v) big = v;
        first = false;
    }
    std::map<std::string, Rational> ceil;
    for (const auto& t : table.kernel_types) {
        Rational nested = big - (table.homogeneity_of(t) - table.reg_of(t)) - delta;
        ceil[t] = gamma < nested ? nested : gamma;
    }

    TreeFamily fam;
    fam.cutoff = gamma;
    // per type, per node count: entries (grown stage by stage)
    std::map<std::string, std::vector<std::vector<PoolEntry>>> pool;
    for (const auto& t : table.kernel_types) pool[t] = {};

    std::map<std::string, std::map<TreeCode, FamilyEntry>> all;  // everything below the ceilings
    auto insert_tree = [&](const std::string& t, DecoratedTree&& tree, const Rational& h, int n) {
        TreeCode code = canonical_encode(tree);
        auto& slot = all[t];
        if (slot.count(code)) return;
        slot.emplace(code, FamilyEntry{std::move(tree), h, n});
        auto& pv = pool[t];
        if ((int)pv.size() <= n) pv.resize(n + 1);
        pv[n].push_back(PoolEntry{code, h, n});
        if (slot.size() > opts.max_family)
            throw std::runtime_error("enumerate_trees: family size guard exceeded (" +
                                     std::to_string(opts.max_family) + ") for type '" + t + "'");
    };

    const int dims = scaling.dims();
    int cap_deg = 0;
    {
        // node decoration cap as an integer scaled degree
        Rational c = opts.node_dec_cap;
        cap_deg = (int)(c.num() / c.den());
    }

    for (int stage = 1;; ++stage) {
        if (stage > opts.max_nodes)
            throw std::runtime_error("enumerate_trees: node-count guard exceeded (" +
                                     std::to_string(opts.max_nodes) + ") before the homogeneity floor closed");
        bool floor_open = false;
        for (const auto& t : table.kernel_types) {
            Rational floor = table.reg_of(t) - table.homogeneity_of(t) + Rational(stage) * delta;
            if (floor < ceil[t]) floor_open = true;
        }
        if (!floor_open) break;

        // snapshot of subtree candidates: sizes < stage only, so the pools we
        // point into stay untouched while this stage inserts
        std::map<std::string, std::vector<PoolEntry>> cands;
        for (const auto& [ty, pv] : pool) {
            auto& list = cands[ty];
            for (int n = 0; n < (int)pv.size() && n < stage; ++n)
                for (const auto& pe : pv[n]) list.push_back(pe);
        }

        for (const auto& t : table.kernel_types) {
            for (const Multiset& entry : rule.of(t)) {
                // split entry into the optional noise slot and kernel slot groups
                std::optional<Slot> noise;
                std::vector<std::pair<Slot, int>> groups;
                for (const auto& [slot, mult] : entry.items) {
                    if (table.is_noise(slot.type))
                        noise = slot;
                    else
                        groups.emplace_back(slot, mult);
                }
                int n_sub_total = stage - 1;
                if (groups.empty() && n_sub_total != 0) continue;

                Rational base_hom(0);
                if (noise) base_hom += table.homogeneity_of(noise->type);
                for (const auto& [slot, mult] : groups)
                    base_hom += Rational(mult) * (table.homogeneity_of(slot.type) -
                                                  Rational(slot.dec.scaled_degree(scaling)));

                // choose, per group, a non-decreasing multiset of subtrees
                std::vector<std::vector<const PoolEntry*>> chosen(groups.size());
                std::function<void(size_t, int, Rational)> assign = [&](size_t gi, int nodes_left,
                                                                        Rational hom_acc) {
                    if (gi == groups.size()) {
                        if (nodes_left != 0) return;
                        // root decorations within cap and remaining ceiling room
                        Rational room = ceil[t] - hom_acc;
                        if (!room.is_positive()) return;
                        long long q = room.num() / room.den();  // floor for positive room
                        if (Rational(q) == room) --q;
                        int budget_deg = (int)std::min<long long>(cap_deg, q);
                        for (const auto& k : multi_indices_up_to(scaling, budget_deg)) {
                            Rational h = hom_acc + Rational(k.scaled_degree(scaling));
                            NormalForm nf;
                            nf.root_dec = k;
                            if (noise) nf.root_noise = noise->type;
                            for (size_t g = 0; g < groups.size(); ++g)
                                for (const PoolEntry* pe : chosen[g]) {
                                    NormalBranch b;
                                    b.type = groups[g].first.type;
                                    b.edge_dec = groups[g].first.dec;
                                    b.subtree = all[groups[g].first.type].at(pe->code).tree;
                                    b.subcode = pe->code;
                                    nf.branches.push_back(std::move(b));
                                }
                            insert_tree(t, assemble(nf, dims), h, stage);
                        }
                        return;
                    }
                    const auto& [slot, mult] = groups[gi];
                    // non-decreasing candidate choice avoids permuted duplicates
                    const auto& list = cands[slot.type];
                    std::function<void(int, int, int, Rational)> pick = [&](int depth, int from,
                                                                            int left, Rational acc) {
                        if (depth == mult) {
                            assign(gi + 1, left, acc);
                            return;
                        }
                        for (int i = from; i < (int)list.size(); ++i) {
                            const PoolEntry* pe = &list[i];
                            int remaining_slots = mult - depth - 1;
                            if (pe->n_nodes > left - remaining_slots) continue;
                            Rational acc2 = acc + pe->hom;
                            chosen[gi].push_back(pe);
                            pick(depth + 1, i, left - pe->n_nodes, acc2);
                            chosen[gi].pop_back();
                        }
                    };
                    pick(0, 0, nodes_left, hom_acc);
                };
                // hom_acc carries the running homogeneity: edge gains plus subtree homs
                assign(0, n_sub_total, base_hom);
            }
        }
    }

    for (auto& [t, trees] : all) {
        auto& out = fam.by_type[t];
        for (auto& [code, fe] : trees)
            if (fe.hom < gamma) out.emplace(code, fe);
    }
    return fam;
}

Multiset q_project(const Multiset& m, const TypeTable& table) {
    Multiset out;
    for (const auto& [slot, mult] : m.items) out.add(table.base_of(slot.type), slot.dec, mult);
    return out;
}

Rule extend_rule_noise(const Rule& rule, const TypeTable& extended_table,
                       const std::vector<std::string>& labels) {
    Rule out;
    for (const auto& xi : extended_table.noise_types) out.entries[xi].insert(Multiset{});
    for (const auto& [t, set] : rule.entries) {
        if (extended_table.is_noise(t)) continue;
        for (const Multiset& m : set) {
            // distribute each noise slot over its hatted variants
            std::vector<Multiset> acc{Multiset{}};
            for (const auto& [slot, mult] : m.items) {
                std::vector<Multiset> next;
                if (!extended_table.is_noise(slot.type)) {
                    for (auto base : acc) {
                        base.add(slot.type, slot.dec, mult);
                        next.push_back(std::move(base));
                    }
                } else {
                    std::vector<std::string> variants{slot.type};
                    for (const auto& l : labels) variants.push_back(hat_noise_id(slot.type, l));
                    // compositions of `mult` over the variants
                    std::vector<std::vector<int>> comps;
                    std::vector<int> cur(variants.size(), 0);
                    std::function<void(size_t, int)> rec = [&](size_t i, int left) {
                        if (i + 1 == variants.size()) {
                            cur[i] = left;
                            comps.push_back(cur);
                            return;
                        }
                        for (int c = 0; c <= left; ++c) {
                            cur[i] = c;
                            rec(i + 1, left - c);
                        }
                    };
                    rec(0, mult);
                    for (const auto& base : acc)
                        for (const auto& comp : comps) {
                            Multiset ext = base;
                            for (size_t v = 0; v < variants.size(); ++v)
                                if (comp[v]) ext.add(variants[v], slot.dec, comp[v]);
                            next.push_back(std::move(ext));
                        }
                }
                acc = std::move(next);
            }
            for (auto& ext : acc) out.entries[t].insert(std::move(ext));
        }
    }
    return out;
}

Rule extend_rule_dual(const Rule& rule, const TypeTable& extended_table, const Scaling& scaling,
                      int dual_factor_cap) {
    Rule out;
    for (const auto& xi : extended_table.noise_types) out.entries[xi].insert(Multiset{});

    std::vector<std::string> base_kernels, dual_kernels;
    for (const auto& k : extended_table.kernel_types) {
        if (extended_table.is_dual(k))
            dual_kernels.push_back(k);
        else
            base_kernels.push_back(k);
    }

    // R~(t): kernel slots optionally retyped to duals, plus up to cap extra (l~,0)
    for (const auto& t : base_kernels) {
        for (const Multiset& m : rule.of(t)) {
            std::vector<Multiset> acc{Multiset{}};
            for (const auto& [slot, mult] : m.items) {
                std::vector<Multiset> next;
                if (extended_table.is_noise(slot.type)) {
                    for (auto base : acc) {
                        base.add(slot.type, slot.dec, mult);
                        next.push_back(std::move(base));
                    }
                } else {
                    for (int j = 0; j <= mult; ++j)
                        for (auto base : acc) {
                            if (mult - j) base.add(slot.type, slot.dec, mult - j);
                            if (j) base.add(dual_kernel_id(slot.type), slot.dec, j);
                            next.push_back(std::move(base));
                        }
                }
                acc = std::move(next);
            }
            // extra dual factors with zero decoration, total count <= cap
            std::vector<Multiset> extras{Multiset{}};
            std::function<void(size_t, int, Multiset)> grow = [&](size_t i, int left, Multiset cur) {
                if (i == dual_kernels.size()) return;
                for (int c = 1; c <= left; ++c) {
                    Multiset nxt = cur;
                    nxt.add(dual_kernels[i], MultiIndex::zero(scaling.dims()), c);
                    extras.push_back(nxt);
                    grow(i + 1, left - c, nxt);
                }
                grow(i + 1, left, cur);
            };
            grow(0, dual_factor_cap, Multiset{});
            for (const auto& base : acc)
                for (const auto& ex : extras) {
                    Multiset ext = base;
                    for (const auto& [slot, mult] : ex.items) ext.add(slot.type, slot.dec, mult);
                    out.entries[t].insert(std::move(ext));
                }
        }
    }

    // witness slots: every (l,k) with l a base kernel occurring in the rule
    std::set<Slot> witness_slots;
    for (const auto& [t, set] : rule.entries)
        for (const Multiset& m : set)
            for (const auto& [slot, mult] : m.items)
                if (!extended_table.is_noise(slot.type)) witness_slots.insert(slot);

    // R~(t~) = { N in R~(t) : exists (l,k) with N + {(l,k)} in R~(t) }
    for (const auto& t : base_kernels) {
        const std::string td = dual_kernel_id(t);
        for (const Multiset& m : out.of(t)) {
            bool ok = false;
            for (const Slot& w : witness_slots) {
                Multiset ext = m;
                ext.add(w.type, w.dec, 1);
                if (out.admits(t, ext)) {
                    ok = true;
                    break;
                }
            }
            if (ok) out.entries[td].insert(m);
        }
        out.entries[td].insert(Multiset{});  // sub-multiset closure floor
    }

    SubcritReport rep = check_subcritical(out, extended_table, scaling);
    if (!rep.subcritical)
        throw std::runtime_error("extend_rule_dual: extension not subcritical (theta too large?): " +
                                 rep.message);
    return out;
}

}  // namespace rst
