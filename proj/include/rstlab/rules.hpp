#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rstlab/tree.hpp"
#include "rstlab/types.hpp"

namespace rst {

/// One admissible child-edge slot: (type id, derivative decoration).
struct Slot {
    std::string type;
    MultiIndex dec;

    bool operator<(const Slot& o) const {
        if (type != o.type) return type < o.type;
        return dec < o.dec;
    }
    bool operator==(const Slot& o) const { return type == o.type && dec == o.dec; }
};

/// Finite multiset over (type, multi-index), stored as a sorted run-length list.
struct Multiset {
    std::vector<std::pair<Slot, int>> items;

    void add(const std::string& type, const MultiIndex& dec, int mult = 1);
    int count(const Slot& s) const;
    int total() const;
    bool empty() const { return items.empty(); }

    bool operator<(const Multiset& o) const { return items < o.items; }
    bool operator==(const Multiset& o) const { return items == o.items; }

    /// All sub-multisets (including empty and itself).
    std::vector<Multiset> sub_multisets() const;

    /// "[ (t,(0,0)), (t,(0,0)), (Xi,(0,0)) ]"-style display.
    std::string str() const;
};

/// Grammar the trees must conform to: type id -> finite set of multisets.
struct Rule {
    std::map<std::string, std::set<Multiset>> entries;

    const std::set<Multiset>& of(const std::string& type) const {
        static const std::set<Multiset> kEmpty;
        auto it = entries.find(type);
        return it == entries.end() ? kEmpty : it->second;
    }
    bool admits(const std::string& type, const Multiset& m) const { return of(type).count(m) > 0; }
};

/// Empty list iff the rule is normal: noise entries are exactly {emptyset},
/// kernel entry sets are sub-multiset closed (which forces the empty multiset
/// to be admissible), and each multiset respects the at-most-one-noise
/// assumption with zero derivative.
std::vector<std::string> check_normal(const Rule& rule, const TypeTable& table);

struct SubcritReport {
    bool subcritical = false;
    Rational gap;                                       // minimal slack when subcritical
    std::optional<std::pair<std::string, Multiset>> witness;  // violating (type, entry)
    std::string message;
};

/// Tests reg(t) < |t|_s + inf_N reg(N) over kernel types, with
/// reg(N) = sum (reg(l) - |k|_s); noise types must satisfy reg(Xi) <= |Xi|_s.
SubcritReport check_subcritical(const Rule& rule, const TypeTable& table, const Scaling& scaling);

/// True iff at every vertex the multiset of outgoing edges belongs to the rule
/// entry of the incoming edge type (target_type at the root).
bool conforms(const DecoratedTree& tree, const Rule& rule, const std::string& target_type);

struct FamilyEntry {
    DecoratedTree tree;
    Rational hom;
    int n_nodes = 0;  // #N(tau)
};

/// Conforming trees below a homogeneity cutoff, keyed by canonical code,
/// one family per kernel target type.
struct TreeFamily {
    std::map<std::string, std::map<TreeCode, FamilyEntry>> by_type;
    Rational cutoff;

    const std::map<TreeCode, FamilyEntry>& of(const std::string& type) const {
        static const std::map<TreeCode, FamilyEntry> kEmpty;
        auto it = by_type.find(type);
        return it == by_type.end() ? kEmpty : it->second;
    }
    size_t total_size() const {
        size_t n = 0;
        for (const auto& [k, v] : by_type) n += v.size();
        return n;
    }
};

struct EnumOptions {
    Rational node_dec_cap = Rational(10);  // max |n(u)|_s during generation
    int max_nodes = 256;                   // hard guard, aborts loudly when hit
    size_t max_family = 2000000;           // hard guard on family size
};

/// Staged-closure enumeration of all rule-conforming trees with homogeneity
/// strictly below the cutoff (below 0 when negative_only). Termination relies
/// on the subcriticality gap; a non-subcritical rule throws.
TreeFamily enumerate_trees(const Rule& rule, const TypeTable& table, const Scaling& scaling,
                           const Rational& cutoff, bool negative_only = false,
                           const EnumOptions& opts = {});

/// q on multisets.
Multiset q_project(const Multiset& m, const TypeTable& table);

/// Extended rule R^I: every noise occurrence may be retyped to any (Xi,i);
/// table must already contain the hatted types (extend_table_noise).
Rule extend_rule_noise(const Rule& rule, const TypeTable& extended_table,
                       const std::vector<std::string>& labels);

/// Kernel-dual extension: kernel slots may be retyped t -> t~ and up to
/// `dual_factor_cap` extra (t~,0) factors are admitted; entries of the dual
/// types are restricted by the witness condition. Table must already contain
/// the dual types (extend_table_dual); throws (naming the violating entry)
/// if the extension is not subcritical for the table's theta.
Rule extend_rule_dual(const Rule& rule, const TypeTable& extended_table, const Scaling& scaling,
                      int dual_factor_cap = 3);

}  // namespace rst
