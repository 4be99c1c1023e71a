#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "infgon/bigint.hpp"
#include "infgon/errors.hpp"

namespace infgon {

// Variables are named by the curves they measure; a plain string keeps every
// container ordering deterministic.
using VarId = std::string;

// Exponent vector of a Laurent monomial.  Zero exponents are never stored.
using Exponents = std::map<VarId, int>;

struct Monomial {
    BigInt coeff;
    Exponents exps;
};

inline int total_degree(const Exponents& e) {
    int d = 0;
    for (auto& [v, k] : e) d += k;
    return d;
}

inline std::string exps_str(const Exponents& e) {
    if (e.empty()) return "1";
    std::string s;
    for (auto& [v, k] : e) {
        if (!s.empty()) s += "*";
        s += v;
        if (k != 1) s += "^" + std::to_string(k);
    }
    return s;
}

// Canonical term order: total degree, then lexicographic on the sorted
// (variable, exponent) pairs.  Matches the printed order of the text form.
struct ExpOrder {
    bool operator()(const Exponents& a, const Exponents& b) const {
        int da = total_degree(a), db = total_degree(b);
        if (da != db) return da < db;
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    }
};

// Exact multivariate Laurent polynomial in canonical form.
class Laurent {
public:
    Laurent() = default;
    static Laurent zero() { return Laurent(); }
    static Laurent one() { return constant(1); }
    static Laurent constant(long long c) {
        Laurent p;
        if (c != 0) p.terms_[Exponents{}] = BigInt(c);
        return p;
    }
    static Laurent var(const VarId& v, int exp = 1) {
        Laurent p;
        Exponents e;
        if (exp != 0) e[v] = exp;
        p.terms_[e] = BigInt(1);
        return p;
    }
    static Laurent monomial(const BigInt& c, const Exponents& e) {
        Laurent p;
        if (!c.is_zero()) p.terms_[e] = c;
        return p;
    }

    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }
    const std::map<Exponents, BigInt, ExpOrder>& terms() const { return terms_; }

    friend Laurent operator+(const Laurent& a, const Laurent& b) {
        Laurent r = a;
        for (auto& [e, c] : b.terms_) r.add_term(e, c);
        return r;
    }
    friend Laurent operator-(const Laurent& a, const Laurent& b) {
        Laurent r = a;
        for (auto& [e, c] : b.terms_) r.add_term(e, -c);
        return r;
    }
    Laurent& operator+=(const Laurent& b) { *this = *this + b; return *this; }

    friend Laurent operator*(const Laurent& a, const Laurent& b) {
        Laurent r;
        for (auto& [ea, ca] : a.terms_)
            for (auto& [eb, cb] : b.terms_) {
                Exponents e = ea;
                for (auto& [v, k] : eb) {
                    int nk = (e.count(v) ? e[v] : 0) + k;
                    if (nk == 0) e.erase(v); else e[v] = nk;
                }
                r.add_term(e, ca * cb);
            }
        return r;
    }

    friend bool operator==(const Laurent& a, const Laurent& b) {
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const Laurent& a, const Laurent& b) { return !(a == b); }

    // Exact division by a single monomial; the divisor coefficient must be +-1.
    Laurent div_by_monomial(const Monomial& m) const {
        if (!m.coeff.is_unit() && !(-m.coeff).is_unit())
            throw Error("NonMonomialDivisor", "divisor coefficient must be +1 or -1");
        Laurent r;
        bool flip = m.coeff.negative();
        for (auto& [e, c] : terms_) {
            Exponents ne = e;
            for (auto& [v, k] : m.exps) {
                int nk = (ne.count(v) ? ne[v] : 0) - k;
                if (nk == 0) ne.erase(v); else ne[v] = nk;
            }
            r.add_term(ne, flip ? -c : c);
        }
        return r;
    }
    Laurent div_by_var(const VarId& v, int exp = 1) const {
        Monomial m;
        m.coeff = BigInt(1);
        m.exps[v] = exp;
        return div_by_monomial(m);
    }

    bool all_coeffs_positive() const {
        for (auto& [e, c] : terms_)
            if (c.negative() || c.is_zero()) return false;
        return true;
    }

    // Smallest exponent of `v` over all terms (0 if v absent everywhere).
    int min_exponent(const VarId& v) const {
        int m = 0;
        bool first = true;
        for (auto& [e, c] : terms_) {
            auto it = e.find(v);
            int k = it == e.end() ? 0 : it->second;
            if (first || k < m) { m = k; first = false; }
        }
        return m;
    }

    double eval(const std::map<VarId, double>& vals) const {
        double total = 0;
        for (auto& [e, c] : terms_) {
            double t = c.to_double();
            for (auto& [v, k] : e) {
                auto it = vals.find(v);
                if (it == vals.end())
                    throw Error("UnboundVariable", "no value for " + v);
                double x = it->second;
                for (int i = 0; i < std::abs(k); ++i) t = k > 0 ? t * x : t / x;
            }
            total += t;
        }
        return total;
    }

    // Canonical text form, reproducible across runs.
    std::string str() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (auto& [e, c] : terms_) {
            std::string cs = c.str();
            bool neg = !cs.empty() && cs[0] == '-';
            if (neg) cs = cs.substr(1);
            if (s.empty()) s += neg ? "-" : "";
            else s += neg ? " - " : " + ";
            if (cs == "1" && !e.empty()) s += exps_str(e);
            else {
                s += cs;
                if (!e.empty()) s += "*" + exps_str(e);
            }
        }
        return s;
    }

private:
    std::map<Exponents, BigInt, ExpOrder> terms_;

    void add_term(const Exponents& e, const BigInt& c) {
        if (c.is_zero()) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) { terms_[e] = c; return; }
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
};

}  // namespace infgon
