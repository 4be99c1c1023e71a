#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace infgon {

// Signed arbitrary-precision integer, base 1e9 limbs.
// Supports exactly what exact Laurent arithmetic needs: add, sub, mul,
// compare, stringify.  Division is never required (monomial divisors
// have unit coefficient).
class BigInt {
public:
    BigInt() = default;
    BigInt(long long v) {
        if (v < 0) { neg_ = true; }
        unsigned long long u = neg_ ? 0ull - static_cast<unsigned long long>(v)
                                    : static_cast<unsigned long long>(v);
        while (u) { limbs_.push_back(static_cast<uint32_t>(u % kBase)); u /= kBase; }
    }

    bool is_zero() const { return limbs_.empty(); }
    bool negative() const { return neg_; }

    friend bool operator==(const BigInt& a, const BigInt& b) {
        return a.neg_ == b.neg_ && a.limbs_ == b.limbs_;
    }
    friend bool operator!=(const BigInt& a, const BigInt& b) { return !(a == b); }
    friend bool operator<(const BigInt& a, const BigInt& b) {
        if (a.neg_ != b.neg_) return a.neg_;
        int c = cmp_mag(a.limbs_, b.limbs_);
        return a.neg_ ? c > 0 : c < 0;
    }

    BigInt operator-() const {
        BigInt r = *this;
        if (!r.is_zero()) r.neg_ = !r.neg_;
        return r;
    }

    friend BigInt operator+(const BigInt& a, const BigInt& b) {
        if (a.neg_ == b.neg_) {
            BigInt r; r.neg_ = a.neg_; r.limbs_ = add_mag(a.limbs_, b.limbs_);
            r.trim(); return r;
        }
        int c = cmp_mag(a.limbs_, b.limbs_);
        if (c == 0) return BigInt();
        BigInt r;
        if (c > 0) { r.limbs_ = sub_mag(a.limbs_, b.limbs_); r.neg_ = a.neg_; }
        else       { r.limbs_ = sub_mag(b.limbs_, a.limbs_); r.neg_ = b.neg_; }
        r.trim(); return r;
    }
    friend BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }
    BigInt& operator+=(const BigInt& b) { *this = *this + b; return *this; }

    friend BigInt operator*(const BigInt& a, const BigInt& b) {
        if (a.is_zero() || b.is_zero()) return BigInt();
        BigInt r;
        r.neg_ = a.neg_ != b.neg_;
        r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
        for (size_t i = 0; i < a.limbs_.size(); ++i) {
            unsigned long long carry = 0;
            for (size_t j = 0; j < b.limbs_.size() || carry; ++j) {
                unsigned long long cur = r.limbs_[i + j] + carry;
                if (j < b.limbs_.size())
                    cur += static_cast<unsigned long long>(a.limbs_[i]) * b.limbs_[j];
                r.limbs_[i + j] = static_cast<uint32_t>(cur % kBase);
                carry = cur / kBase;
            }
        }
        r.trim(); return r;
    }

    std::string str() const {
        if (limbs_.empty()) return "0";
        std::string s = neg_ ? "-" : "";
        s += std::to_string(limbs_.back());
        for (size_t i = limbs_.size() - 1; i-- > 0;) {
            std::string part = std::to_string(limbs_[i]);
            s += std::string(9 - part.size(), '0') + part;
        }
        return s;
    }

    double to_double() const {
        double v = 0;
        for (size_t i = limbs_.size(); i-- > 0;) v = v * kBase + limbs_[i];
        return neg_ ? -v : v;
    }

    bool is_unit() const { return limbs_.size() == 1 && limbs_[0] == 1; }

private:
    static constexpr uint32_t kBase = 1000000000u;
    bool neg_ = false;
    std::vector<uint32_t> limbs_;  // little endian, no leading zeros

    void trim() {
        while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
        if (limbs_.empty()) neg_ = false;
    }
    static int cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
        if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
        for (size_t i = a.size(); i-- > 0;)
            if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
        return 0;
    }
    static std::vector<uint32_t> add_mag(const std::vector<uint32_t>& a,
                                         const std::vector<uint32_t>& b) {
        std::vector<uint32_t> r(std::max(a.size(), b.size()) + 1, 0);
        uint64_t carry = 0;
        for (size_t i = 0; i < r.size(); ++i) {
            uint64_t cur = carry;
            if (i < a.size()) cur += a[i];
            if (i < b.size()) cur += b[i];
            r[i] = static_cast<uint32_t>(cur % kBase);
            carry = cur / kBase;
        }
        return r;
    }
    // pre: |a| >= |b|
    static std::vector<uint32_t> sub_mag(const std::vector<uint32_t>& a,
                                         const std::vector<uint32_t>& b) {
        std::vector<uint32_t> r = a;
        int64_t borrow = 0;
        for (size_t i = 0; i < r.size(); ++i) {
            int64_t cur = static_cast<int64_t>(r[i]) - borrow - (i < b.size() ? b[i] : 0);
            if (cur < 0) { cur += kBase; borrow = 1; } else borrow = 0;
            r[i] = static_cast<uint32_t>(cur);
        }
        return r;
    }
};

}  // namespace infgon
