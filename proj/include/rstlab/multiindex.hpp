#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rstlab/rational.hpp"

namespace rst {

/// Parabolic space-time scaling s : {0..d} -> N, s(0) the time weight.
struct Scaling {
    std::vector<int> weights;  // size d+1, all >= 1

    Scaling() : weights{2, 1} {}
    explicit Scaling(std::vector<int> w) : weights(std::move(w)) {
        if (weights.empty()) throw std::invalid_argument("Scaling: empty weight list");
        for (int v : weights)
            if (v < 1) throw std::invalid_argument("Scaling: weights must be >= 1");
    }

    int dims() const { return (int)weights.size(); }        // d+1
    int spatial_dim() const { return (int)weights.size() - 1; }
    int abs() const {
        int s = 0;
        for (int v : weights) s += v;
        return s;
    }
};

/// Multi-index k in N^{d+1}; |k|_s = sum s(i) k_i.
struct MultiIndex {
    std::vector<int> k;  // size d+1, entries >= 0

    MultiIndex() = default;
    explicit MultiIndex(int dims) : k(dims, 0) {}
    explicit MultiIndex(std::vector<int> entries) : k(std::move(entries)) {
        for (int v : k)
            if (v < 0) throw std::invalid_argument("MultiIndex: negative entry");
    }

    static MultiIndex zero(int dims) { return MultiIndex(dims); }
    static MultiIndex unit(int dims, int i) {
        MultiIndex m(dims);
        m.k.at(i) = 1;
        return m;
    }

    int dims() const { return (int)k.size(); }
    bool is_zero() const {
        for (int v : k)
            if (v) return false;
        return true;
    }
    int order() const {
        int s = 0;
        for (int v : k) s += v;
        return s;
    }
    int scaled_degree(const Scaling& s) const {
        if (dims() != s.dims()) throw std::invalid_argument("MultiIndex: scaling dims mismatch");
        int acc = 0;
        for (int i = 0; i < dims(); ++i) acc += s.weights[i] * k[i];
        return acc;
    }

    MultiIndex operator+(const MultiIndex& o) const {
        MultiIndex r = *this;
        for (int i = 0; i < dims(); ++i) r.k[i] += o.k[i];
        return r;
    }
    /// Componentwise difference; throws if any entry would go negative.
    MultiIndex operator-(const MultiIndex& o) const {
        MultiIndex r = *this;
        for (int i = 0; i < dims(); ++i) {
            r.k[i] -= o.k[i];
            if (r.k[i] < 0) throw std::domain_error("MultiIndex: negative difference");
        }
        return r;
    }
    bool operator<=(const MultiIndex& o) const {
        for (int i = 0; i < dims(); ++i)
            if (k[i] > o.k[i]) return false;
        return true;
    }
    bool operator==(const MultiIndex& o) const { return k == o.k; }
    bool operator!=(const MultiIndex& o) const { return !(*this == o); }
    bool operator<(const MultiIndex& o) const { return k < o.k; }

    /// k! = prod_i k_i!
    long long factorial() const {
        long long f = 1;
        for (int v : k)
            for (int j = 2; j <= v; ++j) f *= j;
        return f;
    }

    /// "(k0,k1,...,kd)"
    std::string str() const {
        std::string s = "(";
        for (int i = 0; i < dims(); ++i) {
            if (i) s += ",";
            s += std::to_string(k[i]);
        }
        return s + ")";
    }
};

/// binom(n, m) componentwise, 0 when m is not <= n.
inline long long multi_binomial(const MultiIndex& n, const MultiIndex& m) {
    if (!(m <= n)) return 0;
    long long b = 1;
    for (int i = 0; i < n.dims(); ++i) {
        int nn = n.k[i], mm = m.k[i];
        long long c = 1;
        for (int j = 1; j <= mm; ++j) c = c * (nn - mm + j) / j;
        b *= c;
    }
    return b;
}

/// All multi-indices with |k|_s <= budget (budget < 0 yields nothing).
inline std::vector<MultiIndex> multi_indices_up_to(const Scaling& s, int budget) {
    std::vector<MultiIndex> out;
    if (budget < 0) return out;
    MultiIndex cur(s.dims());
    // odometer over entries bounded by remaining scaled budget
    std::function<void(int, int)> rec = [&](int pos, int left) {
        if (pos == s.dims()) {
            out.push_back(cur);
            return;
        }
        int w = s.weights[pos];
        for (int v = 0; v * w <= left; ++v) {
            cur.k[pos] = v;
            rec(pos + 1, left - v * w);
        }
        cur.k[pos] = 0;
    };
    rec(0, budget);
    return out;
}

}  // namespace rst
