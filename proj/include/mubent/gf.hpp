#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mubent::gf {

// Arithmetic in GF(p^k) for small prime powers (order <= 64 in practice).
// Elements are dense coefficient vectors over GF(p); the modulus is the
// lexicographically smallest monic irreducible polynomial of degree k, found
// by exhaustive search, so field labeling is reproducible.

namespace poly {

// Polynomials over GF(p) as coefficient vectors, c[j] is the coefficient of
// t^j. Trailing zeros are allowed; degree ignores them.

inline int degree(const std::vector<int>& c) {
    for (int j = static_cast<int>(c.size()) - 1; j >= 0; --j) {
        if (c[j] != 0) return j;
    }
    return -1;  // zero polynomial
}

inline std::vector<int> mul(const std::vector<int>& a, const std::vector<int>& b, int p) {
    if (a.empty() || b.empty()) return {};
    std::vector<int> out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            out[i + j] = (out[i + j] + a[i] * b[j]) % p;
        }
    }
    return out;
}

// Remainder of a modulo monic m.
inline std::vector<int> mod(std::vector<int> a, const std::vector<int>& m, int p) {
    const int dm = degree(m);
    for (int da = degree(a); da >= dm; da = degree(a)) {
        const int factor = a[da];  // m is monic
        for (int j = 0; j <= dm; ++j) {
            a[da - dm + j] = ((a[da - dm + j] - factor * m[j]) % p + p) % p;
        }
    }
    a.resize(dm > 0 ? dm : 1, 0);
    return a;
}

inline bool is_zero(const std::vector<int>& c) { return degree(c) < 0; }

}  // namespace poly

inline bool is_prime(int n) {
    if (n < 2) return false;
    for (int f = 2; f * f <= n; ++f) {
        if (n % f == 0) return false;
    }
    return true;
}

class GaloisField;

struct FieldElement {
    const GaloisField* field = nullptr;
    std::vector<int> coeffs;  // length k, residues mod p

    bool operator==(const FieldElement& other) const { return coeffs == other.coeffs; }
};

class GaloisField {
  public:
    GaloisField(int p, int k) : p_(p), k_(k) {
        if (!is_prime(p)) {
            throw std::invalid_argument("GaloisField: p = " + std::to_string(p) +
                                        " is not prime");
        }
        if (k < 1) {
            throw std::invalid_argument("GaloisField: k must be >= 1");
        }
        order_ = 1;
        for (int j = 0; j < k; ++j) {
            order_ *= static_cast<std::uint64_t>(p);
        }
        modulus_ = find_modulus();
    }

    int p() const { return p_; }
    int k() const { return k_; }
    std::uint64_t order() const { return order_; }
    const std::vector<int>& modulus() const { return modulus_; }

    // Element with the given enumeration index; digits base p, little-endian:
    // index n maps to coefficients (n mod p, (n/p) mod p, ...).
    FieldElement element(std::uint64_t index) const {
        if (index >= order_) {
            throw std::invalid_argument("GaloisField: element index out of range");
        }
        FieldElement e;
        e.field = this;
        e.coeffs.resize(k_);
        for (int j = 0; j < k_; ++j) {
            e.coeffs[j] = static_cast<int>(index % p_);
            index /= p_;
        }
        return e;
    }

    std::uint64_t index_of(const FieldElement& x) const {
        std::uint64_t n = 0;
        for (int j = k_ - 1; j >= 0; --j) {
            n = n * p_ + static_cast<std::uint64_t>(x.coeffs[j]);
        }
        return n;
    }

    FieldElement zero() const { return element(0); }
    FieldElement one() const { return element(1 % order_); }

    FieldElement add(const FieldElement& x, const FieldElement& y) const {
        check_membership(x, y);
        FieldElement out;
        out.field = this;
        out.coeffs.resize(k_);
        for (int j = 0; j < k_; ++j) {
            out.coeffs[j] = (x.coeffs[j] + y.coeffs[j]) % p_;
        }
        return out;
    }

    FieldElement sub(const FieldElement& x, const FieldElement& y) const {
        check_membership(x, y);
        FieldElement out;
        out.field = this;
        out.coeffs.resize(k_);
        for (int j = 0; j < k_; ++j) {
            out.coeffs[j] = ((x.coeffs[j] - y.coeffs[j]) % p_ + p_) % p_;
        }
        return out;
    }

    FieldElement neg(const FieldElement& x) const { return sub(zero(), x); }

    FieldElement mul(const FieldElement& x, const FieldElement& y) const {
        check_membership(x, y);
        std::vector<int> prod = poly::mul(x.coeffs, y.coeffs, p_);
        std::vector<int> red = poly::mod(std::move(prod), modulus_, p_);
        FieldElement out;
        out.field = this;
        out.coeffs = std::move(red);
        out.coeffs.resize(k_, 0);
        return out;
    }

    // Multiply by a prime-subfield scalar.
    FieldElement scale(int a, const FieldElement& x) const {
        a = ((a % p_) + p_) % p_;
        FieldElement out;
        out.field = this;
        out.coeffs.resize(k_);
        for (int j = 0; j < k_; ++j) {
            out.coeffs[j] = (a * x.coeffs[j]) % p_;
        }
        return out;
    }

    FieldElement pow(FieldElement x, std::uint64_t e) const {
        FieldElement acc = one();
        while (e > 0) {
            if (e & 1) acc = mul(acc, x);
            x = mul(x, x);
            e >>= 1;
        }
        return acc;
    }

    FieldElement inverse(const FieldElement& x) const {
        if (is_zero(x)) {
            throw std::invalid_argument("GaloisField: zero has no inverse");
        }
        return pow(x, order_ - 2);
    }

    bool is_zero(const FieldElement& x) const {
        for (int c : x.coeffs) {
            if (c != 0) return false;
        }
        return true;
    }

    // Absolute trace x + x^p + ... + x^(p^(k-1)); lands in the prime subfield
    // and is returned as a residue mod p.
    int field_trace(const FieldElement& x) const {
        check_membership(x);
        FieldElement acc = x;
        FieldElement term = x;
        for (int j = 1; j < k_; ++j) {
            term = pow(term, static_cast<std::uint64_t>(p_));
            acc = add(acc, term);
        }
        for (int j = 1; j < k_; ++j) {
            if (acc.coeffs[j] != 0) {
                throw std::runtime_error("GaloisField: trace not in prime subfield");
            }
        }
        return acc.coeffs[0];
    }

    bool same_field(const GaloisField& other) const {
        return p_ == other.p_ && k_ == other.k_ && modulus_ == other.modulus_;
    }

  private:
    void check_membership(const FieldElement& x) const {
        if (x.field == nullptr || !same_field(*x.field)) {
            throw std::invalid_argument("GaloisField: element belongs to a different field");
        }
    }
    void check_membership(const FieldElement& x, const FieldElement& y) const {
        check_membership(x);
        check_membership(y);
    }

    // Monic degree-k candidates enumerated by their non-leading coefficients
    // read as a base-p counter; the first irreducible wins.
    std::vector<int> find_modulus() const {
        for (std::uint64_t n = 0; n < order_; ++n) {
            std::vector<int> cand(k_ + 1, 0);
            std::uint64_t v = n;
            for (int j = 0; j < k_; ++j) {
                cand[j] = static_cast<int>(v % p_);
                v /= p_;
            }
            cand[k_] = 1;
            if (is_irreducible(cand)) return cand;
        }
        throw std::runtime_error("GaloisField: no irreducible modulus found");
    }

    // Trial division by every monic polynomial of degree 1..k/2.
    bool is_irreducible(const std::vector<int>& cand) const {
        if (k_ == 1) return true;
        for (int deg = 1; 2 * deg <= k_; ++deg) {
            std::uint64_t count = 1;
            for (int j = 0; j < deg; ++j) {
                count *= static_cast<std::uint64_t>(p_);
            }
            for (std::uint64_t n = 0; n < count; ++n) {
                std::vector<int> div(deg + 1, 0);
                std::uint64_t v = n;
                for (int j = 0; j < deg; ++j) {
                    div[j] = static_cast<int>(v % p_);
                    v /= p_;
                }
                div[deg] = 1;
                if (poly::is_zero(poly::mod(cand, div, p_))) return false;
            }
        }
        return true;
    }

    int p_;
    int k_;
    std::uint64_t order_;
    std::vector<int> modulus_;
};

// d = p^k decomposition; nullopt-style result via bool.
struct PrimePower {
    int p = 0;
    int k = 0;
    bool valid = false;
};

inline PrimePower prime_power_decompose(std::uint64_t d) {
    PrimePower out;
    if (d < 2) return out;
    std::uint64_t rest = d;
    for (int f = 2; static_cast<std::uint64_t>(f) * f <= rest; ++f) {
        if (rest % f == 0) {
            int k = 0;
            while (rest % f == 0) {
                rest /= f;
                ++k;
            }
            if (rest != 1) return out;  // second prime factor
            out = {f, k, true};
            return out;
        }
    }
    out = {static_cast<int>(rest), 1, true};  // d itself prime
    return out;
}

inline std::vector<std::pair<int, int>> factorize(std::uint64_t d) {
    std::vector<std::pair<int, int>> factors;
    std::uint64_t rest = d;
    for (std::uint64_t f = 2; f * f <= rest; ++f) {
        if (rest % f == 0) {
            int k = 0;
            while (rest % f == 0) {
                rest /= f;
                ++k;
            }
            factors.emplace_back(static_cast<int>(f), k);
        }
    }
    if (rest > 1) factors.emplace_back(static_cast<int>(rest), 1);
    return factors;
}

}  // namespace mubent::gf
