#include "rstlab/tree.hpp"

#include <algorithm>
#include <tuple>

namespace rst {

DecoratedTree DecoratedTree::single(int dims, MultiIndex k) {
    DecoratedTree t;
    t.dims = dims;
    TreeNode n;
    n.edge_dec = MultiIndex::zero(dims);
    n.node_dec = k.dims() == 0 ? MultiIndex::zero(dims) : k;
    t.nodes.push_back(n);
    t.root = 0;
    return t;
}

DecoratedTree DecoratedTree::noise(const std::string& noise_type, int dims) {
    DecoratedTree t = single(dims);
    TreeNode leaf;
    leaf.parent = 0;
    leaf.edge_type = noise_type;
    leaf.edge_dec = MultiIndex::zero(dims);
    leaf.node_dec = MultiIndex::zero(dims);
    t.nodes.push_back(leaf);
    return t;
}

std::vector<std::vector<int>> DecoratedTree::children() const {
    std::vector<std::vector<int>> adj(nodes.size());
    for (int i = 0; i < size(); ++i)
        if (nodes[i].parent >= 0) adj[nodes[i].parent].push_back(i);
    return adj;
}

void DecoratedTree::validate(const TypeTable& table) const {
    if (nodes.empty()) throw std::invalid_argument("tree: empty node list");
    if (root < 0 || root >= size()) throw std::invalid_argument("tree: bad root index");
    if (nodes[root].parent != -1) throw std::invalid_argument("tree: root has a parent");
    auto adj = children();
    // reachability from root and parent sanity
    std::vector<char> seen(size(), 0);
    std::vector<int> stack{root};
    int count = 0;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        if (seen[u]) throw std::invalid_argument("tree: cycle detected");
        seen[u] = 1;
        ++count;
        for (int c : adj[u]) stack.push_back(c);
    }
    if (count != size()) throw std::invalid_argument("tree: not connected / multiple roots");
    for (int i = 0; i < size(); ++i) {
        const TreeNode& n = nodes[i];
        if (n.node_dec.dims() != dims || n.edge_dec.dims() != dims)
            throw std::invalid_argument("tree: decoration length mismatch");
        if (i == root) continue;
        if (!table.has_type(n.edge_type))
            throw std::invalid_argument("tree: unknown edge type '" + n.edge_type + "'");
        if (table.is_noise(n.edge_type)) {
            if (!adj[i].empty()) throw std::invalid_argument("tree: noise edge upper vertex is not a leaf");
            if (!n.node_dec.is_zero())
                throw std::invalid_argument("tree: noise leaf carries a node decoration");
            if (!n.edge_dec.is_zero())
                throw std::invalid_argument("tree: noise edge carries a derivative decoration");
        }
    }
}

namespace {

std::string encode_rec(const DecoratedTree& t, const std::vector<std::vector<int>>& adj, int u) {
    std::vector<std::tuple<std::string, MultiIndex, std::string>> edges;
    edges.reserve(adj[u].size());
    for (int c : adj[u])
        edges.emplace_back(t.nodes[c].edge_type, t.nodes[c].edge_dec, encode_rec(t, adj, c));
    std::sort(edges.begin(), edges.end());
    std::string s = t.nodes[u].node_dec.str();
    s += "{";
    for (size_t i = 0; i < edges.size(); ++i) {
        if (i) s += ",";
        s += std::get<0>(edges[i]) + "^" + std::get<1>(edges[i]).str() + "->" + std::get<2>(edges[i]);
    }
    s += "}";
    return s;
}

}  // namespace

TreeCode canonical_encode(const DecoratedTree& tree) {
    auto adj = tree.children();
    return encode_rec(tree, adj, tree.root);
}

namespace {

struct Parser {
    const std::string& s;
    size_t pos = 0;
    int dims;

    explicit Parser(const std::string& str, int d) : s(str), dims(d) {}

    char peek() const { return pos < s.size() ? s[pos] : '\0'; }
    void expect(char c) {
        if (peek() != c) throw std::invalid_argument("TreeCode parse: expected '" + std::string(1, c) + "' at " + std::to_string(pos));
        ++pos;
    }
    MultiIndex tuple() {
        expect('(');
        std::vector<int> ks;
        while (peek() != ')') {
            size_t used = 0;
            int v = std::stoi(s.substr(pos), &used);
            pos += used;
            ks.push_back(v);
            if (peek() == ',') ++pos;
        }
        expect(')');
        if ((int)ks.size() != dims) throw std::invalid_argument("TreeCode parse: decoration arity mismatch");
        return MultiIndex(ks);
    }
    int node(DecoratedTree& t, int parent, std::string etype, MultiIndex edec) {
        MultiIndex dec = tuple();
        TreeNode n;
        n.parent = parent;
        n.edge_type = std::move(etype);
        n.edge_dec = edec.dims() ? edec : MultiIndex::zero(dims);
        n.node_dec = dec;
        t.nodes.push_back(n);
        int id = (int)t.nodes.size() - 1;
        expect('{');
        while (peek() != '}') {
            std::string ty;
            while (peek() != '^') {
                if (peek() == '\0') throw std::invalid_argument("TreeCode parse: truncated edge");
                ty += s[pos++];
            }
            expect('^');
            MultiIndex ed = tuple();
            expect('-');
            expect('>');
            node(t, id, ty, ed);
            if (peek() == ',') ++pos;
        }
        expect('}');
        return id;
    }
};

}  // namespace

DecoratedTree decode_tree(const TreeCode& code, int dims) {
    DecoratedTree t;
    t.dims = dims;
    Parser p(code, dims);
    t.root = p.node(t, -1, "", MultiIndex::zero(dims));
    if (p.pos != code.size()) throw std::invalid_argument("TreeCode parse: trailing garbage");
    return t;
}

Rational homogeneity(const DecoratedTree& tree, const TypeTable& table, const Scaling& scaling) {
    Rational h(0);
    for (int i = 0; i < tree.size(); ++i) {
        const TreeNode& n = tree.nodes[i];
        h += Rational(n.node_dec.scaled_degree(scaling));
        if (i == tree.root) continue;
        h += table.homogeneity_of(n.edge_type) - Rational(n.edge_dec.scaled_degree(scaling));
    }
    return h;
}

DecoratedTree subtree_above(const DecoratedTree& tree, int top) {
    DecoratedTree out;
    out.dims = tree.dims;
    auto adj = tree.children();
    std::vector<int> remap(tree.size(), -1);
    std::vector<int> stack{top};
    // BFS-ish copy preserving parent-before-child order
    std::vector<int> order;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        order.push_back(u);
        for (int c : adj[u]) stack.push_back(c);
    }
    for (int u : order) {
        TreeNode n = tree.nodes[u];
        if (u == top) {
            n.parent = -1;
            n.edge_type.clear();
            n.edge_dec = MultiIndex::zero(tree.dims);
        } else {
            n.parent = remap[tree.nodes[u].parent];
        }
        out.nodes.push_back(n);
        remap[u] = (int)out.nodes.size() - 1;
    }
    out.root = remap[top];
    return out;
}

std::vector<int> tree_nodes_N(const DecoratedTree& tree, const TypeTable& table) {
    std::vector<int> out;
    for (int i = 0; i < tree.size(); ++i) {
        if (i != tree.root && table.is_noise(tree.nodes[i].edge_type)) continue;
        out.push_back(i);
    }
    return out;
}

NodeSlots node_slots(const DecoratedTree& tree, const std::vector<std::vector<int>>& adj, int u,
                     const TypeTable& table) {
    NodeSlots slots;
    for (int c : adj[u]) {
        if (table.is_noise(tree.nodes[c].edge_type)) {
            if (slots.noise_child)
                throw SpecViolation("node carries more than one noise edge (assumption on noises)");
            slots.noise_child = c;
        } else {
            slots.kernel_children.push_back(c);
        }
    }
    return slots;
}

NormalForm normal_form(const DecoratedTree& tree, const TypeTable& table) {
    auto adj = tree.children();
    NodeSlots slots = node_slots(tree, adj, tree.root, table);
    NormalForm nf;
    nf.root_dec = tree.nodes[tree.root].node_dec;
    if (slots.noise_child) nf.root_noise = tree.nodes[*slots.noise_child].edge_type;
    std::vector<NormalBranch> raw;
    for (int c : slots.kernel_children) {
        NormalBranch b;
        b.type = tree.nodes[c].edge_type;
        b.edge_dec = tree.nodes[c].edge_dec;
        b.subtree = subtree_above(tree, c);
        b.subcode = canonical_encode(b.subtree);
        raw.push_back(std::move(b));
    }
    std::sort(raw.begin(), raw.end(), [](const NormalBranch& a, const NormalBranch& b) {
        return std::tie(a.type, a.edge_dec, a.subcode) < std::tie(b.type, b.edge_dec, b.subcode);
    });
    for (auto& b : raw) {
        if (!nf.branches.empty()) {
            NormalBranch& last = nf.branches.back();
            if (last.type == b.type && last.edge_dec == b.edge_dec && last.subcode == b.subcode) {
                ++last.multiplicity;
                continue;
            }
        }
        nf.branches.push_back(std::move(b));
    }
    return nf;
}

namespace {

void graft(DecoratedTree& host, int at, const DecoratedTree& sub, const std::string& etype,
           const MultiIndex& edec) {
    auto adj = sub.children();
    std::vector<int> remap(sub.size(), -1);
    std::vector<int> stack{sub.root};
    std::vector<int> order;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        order.push_back(u);
        for (int c : adj[u]) stack.push_back(c);
    }
    for (int u : order) {
        TreeNode n = sub.nodes[u];
        if (u == sub.root) {
            n.parent = at;
            n.edge_type = etype;
            n.edge_dec = edec;
        } else {
            n.parent = remap[sub.nodes[u].parent];
        }
        host.nodes.push_back(n);
        remap[u] = (int)host.nodes.size() - 1;
    }
}

}  // namespace

DecoratedTree assemble(const NormalForm& nf, int dims) {
    DecoratedTree t = DecoratedTree::single(dims, nf.root_dec);
    if (nf.root_noise) {
        TreeNode leaf;
        leaf.parent = t.root;
        leaf.edge_type = *nf.root_noise;
        leaf.edge_dec = MultiIndex::zero(dims);
        leaf.node_dec = MultiIndex::zero(dims);
        t.nodes.push_back(leaf);
    }
    for (const auto& b : nf.branches)
        for (int m = 0; m < b.multiplicity; ++m) graft(t, t.root, b.subtree, b.type, b.edge_dec);
    return t;
}

long long symmetry_factor(const DecoratedTree& tree) {
    // Branches are grouped by (type, edge decoration, subtree code) exactly as
    // in the normal form. A noise branch always forms a singleton group with
    // S = 1 and contributes nothing, so the grouping can stay type-agnostic.
    auto adj = tree.children();
    std::function<long long(int)> rec = [&](int u) -> long long {
        std::vector<std::tuple<std::string, MultiIndex, std::string>> keys;
        std::vector<long long> subs;
        for (int c : adj[u]) {
            keys.emplace_back(tree.nodes[c].edge_type, tree.nodes[c].edge_dec,
                              encode_rec(tree, adj, c));
            subs.push_back(rec(c));
        }
        // group identical (type, dec, code) branches
        std::vector<int> idx(keys.size());
        for (size_t i = 0; i < idx.size(); ++i) idx[i] = (int)i;
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return keys[a] < keys[b]; });
        long long s = tree.nodes[u].node_dec.factorial();
        size_t i = 0;
        while (i < idx.size()) {
            size_t j = i;
            while (j < idx.size() && keys[idx[j]] == keys[idx[i]]) ++j;
            long long p = (long long)(j - i);
            long long sub = subs[idx[i]];
            for (long long q = 0; q < p; ++q) s *= sub;
            for (long long q = 2; q <= p; ++q) s *= q;
            i = j;
        }
        return s;
    };
    return rec(tree.root);
}

DecoratedTree plant(const std::string& kernel_type, const MultiIndex& k, const DecoratedTree& tree,
                    const TypeTable& table) {
    if (!table.is_kernel(kernel_type))
        throw std::invalid_argument("plant: '" + kernel_type + "' is not a kernel type");
    DecoratedTree t = DecoratedTree::single(tree.dims);
    graft(t, t.root, tree, kernel_type, k.dims() ? k : MultiIndex::zero(tree.dims));
    return t;
}

DecoratedTree retype(const DecoratedTree& tree, const std::map<std::string, std::string>& type_map) {
    DecoratedTree out = tree;
    for (auto& n : out.nodes) {
        if (n.parent < 0) continue;
        auto it = type_map.find(n.edge_type);
        if (it != type_map.end()) n.edge_type = it->second;
    }
    return out;
}

DecoratedTree q_project(const DecoratedTree& tree, const TypeTable& table) {
    DecoratedTree out = tree;
    for (auto& n : out.nodes)
        if (n.parent >= 0) n.edge_type = table.base_of(n.edge_type);
    return out;
}

}  // namespace rst
