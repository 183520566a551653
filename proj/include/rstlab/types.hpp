#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "rstlab/multiindex.hpp"
#include "rstlab/rational.hpp"

namespace rst {

/// Thrown when a structural assumption of the calculus is violated
/// (e.g. two noise edges at one node).
struct SpecViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The static alphabet of a structure: kernel types L+, noise types L-,
/// homogeneity |.|_s and reg on types. Extended alphabets (hatted noises,
/// dual kernels) live in the same table; `base` maps extended ids back to
/// their base type (the projection q) and is the identity on base types.
struct TypeTable {
    std::vector<std::string> kernel_types;
    std::vector<std::string> noise_types;
    std::map<std::string, Rational> hom;
    std::map<std::string, Rational> reg;
    std::map<std::string, std::string> base;
    std::set<std::string> dual_kernels;  // the t~ copies
    std::set<std::string> hat_noises;    // the (Xi,i) copies

    bool is_kernel(const std::string& t) const {
        for (const auto& k : kernel_types)
            if (k == t) return true;
        return false;
    }
    bool is_noise(const std::string& t) const {
        for (const auto& n : noise_types)
            if (n == t) return true;
        return false;
    }
    bool has_type(const std::string& t) const { return is_kernel(t) || is_noise(t); }

    const Rational& homogeneity_of(const std::string& t) const {
        auto it = hom.find(t);
        if (it == hom.end()) throw std::invalid_argument("unknown type id '" + t + "'");
        return it->second;
    }
    const Rational& reg_of(const std::string& t) const {
        auto it = reg.find(t);
        if (it == reg.end()) throw std::invalid_argument("no reg entry for type '" + t + "'");
        return it->second;
    }
    /// q on type ids: identity on base types.
    std::string base_of(const std::string& t) const {
        auto it = base.find(t);
        return it == base.end() ? t : it->second;
    }
    bool is_dual(const std::string& t) const { return dual_kernels.count(t) > 0; }
    bool is_hat(const std::string& t) const { return hat_noises.count(t) > 0; }

    void add_kernel(const std::string& id, Rational h, Rational r) {
        kernel_types.push_back(id);
        hom[id] = h;
        reg[id] = r;
        base[id] = id;
    }
    void add_noise(const std::string& id, Rational h, Rational r) {
        noise_types.push_back(id);
        hom[id] = h;
        reg[id] = r;
        base[id] = id;
    }

    /// Checks the invariants: disjoint id sets, hom > 0 on kernels, hom < 0 on
    /// noises. Throws on the first violation.
    void validate() const {
        std::set<std::string> seen;
        for (const auto& t : kernel_types) {
            if (!seen.insert(t).second) throw std::invalid_argument("duplicate type id '" + t + "'");
            if (!homogeneity_of(t).is_positive())
                throw std::invalid_argument("kernel type '" + t + "' must have positive homogeneity");
        }
        for (const auto& t : noise_types) {
            if (!seen.insert(t).second) throw std::invalid_argument("duplicate type id '" + t + "'");
            if (!homogeneity_of(t).is_negative())
                throw std::invalid_argument("noise type '" + t + "' must have negative homogeneity");
        }
    }
};

/// Id for the hatted copy (Xi, label).
inline std::string hat_noise_id(const std::string& noise, const std::string& label) {
    return noise + "@" + label;
}

/// Id for the dual kernel copy t~.
inline std::string dual_kernel_id(const std::string& kernel) { return kernel + "~"; }

/// Extends the noise alphabet by hatted copies (Xi,i), i in `labels`, with
/// hom((Xi,i)) = hom(Xi) and reg((Xi,i)) = reg(Xi).
inline TypeTable extend_table_noise(const TypeTable& t, const std::vector<std::string>& labels) {
    TypeTable out = t;
    for (const auto& xi : t.noise_types) {
        if (t.is_hat(xi)) continue;
        for (const auto& l : labels) {
            std::string id = hat_noise_id(xi, l);
            out.noise_types.push_back(id);
            out.hom[id] = t.homogeneity_of(xi);
            out.reg[id] = t.reg_of(xi);
            out.base[id] = t.base_of(xi);
            out.hat_noises.insert(id);
        }
    }
    return out;
}

/// Extends the kernel alphabet by the dual copies t~ with hom(t~) = hom(t)
/// and reg(t~) = theta.
inline TypeTable extend_table_dual(const TypeTable& t, const Rational& theta) {
    if (!theta.is_positive()) throw std::invalid_argument("theta must be > 0");
    TypeTable out = t;
    for (const auto& k : t.kernel_types) {
        if (t.is_dual(k)) continue;
        std::string id = dual_kernel_id(k);
        out.kernel_types.push_back(id);
        out.hom[id] = t.homogeneity_of(k);
        out.reg[id] = theta;
        out.base[id] = t.base_of(k);
        out.dual_kernels.insert(id);
    }
    return out;
}

}  // namespace rst
