#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rstlab/types.hpp"

namespace rst {

/// One vertex of a decorated tree. Every non-root vertex owns the edge to its
/// parent (type + derivative decoration e); the root has parent == -1.
struct TreeNode {
    int parent = -1;
    std::string edge_type;  // empty at the root
    MultiIndex edge_dec;    // e on the parent edge, zero on noise edges
    MultiIndex node_dec;    // n at this vertex
};

/// Rooted typed decorated tree (reduced: no extended decoration). Vertices
/// above noise edges are leaves and carry zero decorations; they are stored
/// as ordinary nodes but do not belong to N(tau).
struct DecoratedTree {
    std::vector<TreeNode> nodes;
    int root = 0;
    int dims = 2;  // d+1, decoration length

    /// Bare node with decoration k (the tree X^k, or the trivial tree for k=0).
    static DecoratedTree single(int dims, MultiIndex k = {});
    /// Single noise edge below a bare root (the tree Xi).
    static DecoratedTree noise(const std::string& noise_type, int dims);

    int size() const { return (int)nodes.size(); }
    std::vector<std::vector<int>> children() const;  // adjacency by node id

    /// Structural validation: parent links form one tree rooted at `root`,
    /// decoration lengths match, noise edges end in bare leaves.
    void validate(const TypeTable& table) const;
};

using TreeCode = std::string;

/// Canonical string encoding; equal codes iff isomorphic as typed decorated
/// rooted trees. Grammar: NODE := (k0,...,kd) '{' EDGE (',' EDGE)* '}',
/// EDGE := typeid '^(' k0,...,kd ')' '->' NODE, children sorted by
/// (type id, edge decoration, subcode).
TreeCode canonical_encode(const DecoratedTree& tree);

/// Parses the canonical grammar back into a tree (inverse of canonical_encode
/// up to isomorphism).
DecoratedTree decode_tree(const TreeCode& code, int dims);

/// |tau|_s = sum_e (hom(t(e)) - |e(e)|_s) + sum_u |n(u)|_s, exact.
Rational homogeneity(const DecoratedTree& tree, const TypeTable& table, const Scaling& scaling);

/// Symmetry factor S(tau) via the normal-form recursion
/// S(X^k Xi prod_i J_{t_i}^{k_i}[tau_i]^{p_i}) = k! prod_i S(tau_i)^{p_i} p_i!.
long long symmetry_factor(const DecoratedTree& tree);

/// One grouped branch of the normal form.
struct NormalBranch {
    std::string type;
    MultiIndex edge_dec;
    DecoratedTree subtree;
    TreeCode subcode;
    int multiplicity = 1;
};

/// tau = X^k Xi prod_i J_{t_i}^{k_i}[tau_i]^{p_i} with distinct triples.
struct NormalForm {
    MultiIndex root_dec;
    std::optional<std::string> root_noise;  // at most one by assumption
    std::vector<NormalBranch> branches;     // sorted by (type, dec, subcode)
};

/// Throws SpecViolation if more than one noise edge sits at the root.
NormalForm normal_form(const DecoratedTree& tree, const TypeTable& table);

/// Reassembles a tree from its normal form (inverse up to isomorphism).
DecoratedTree assemble(const NormalForm& nf, int dims);

/// J_t^k[tau]: new root joined to the old root by a kernel edge (t, k).
DecoratedTree plant(const std::string& kernel_type, const MultiIndex& k, const DecoratedTree& tree,
                    const TypeTable& table);

/// Copy of the subtree hanging above the parent edge of `top` (that edge
/// excluded), re-rooted at `top`.
DecoratedTree subtree_above(const DecoratedTree& tree, int top);

/// Node ids belonging to N(tau): vertices that are not upper ends of noise edges.
std::vector<int> tree_nodes_N(const DecoratedTree& tree, const TypeTable& table);

/// Kernel-edge upper vertices grouped by their lower vertex, and the optional
/// noise child type, for one node.
struct NodeSlots {
    std::vector<int> kernel_children;      // node ids (upper vertices)
    std::optional<int> noise_child;        // node id of the noise leaf
};
NodeSlots node_slots(const DecoratedTree& tree, const std::vector<std::vector<int>>& adj, int u,
                     const TypeTable& table);

/// Retypes every edge via the given map (ids not present stay fixed).
DecoratedTree retype(const DecoratedTree& tree, const std::map<std::string, std::string>& type_map);

/// q-projection on trees: every extended type replaced by its base type.
DecoratedTree q_project(const DecoratedTree& tree, const TypeTable& table);

}  // namespace rst
