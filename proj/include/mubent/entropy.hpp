#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mubent/linalg.hpp"

namespace mubent {

// Probability distribution over d outcomes.
class Distribution {
  public:
    explicit Distribution(std::vector<double> probs, double tol = 1e-10)
        : p_(std::move(probs)) {
        if (p_.empty()) {
            throw std::invalid_argument("Distribution: empty");
        }
        double total = 0.0;
        for (double x : p_) {
            if (x < 0.0) {
                throw std::invalid_argument("Distribution: negative probability " +
                                            detail::fmt_double(x));
            }
            total += x;
        }
        if (std::abs(total - 1.0) > tol) {
            throw std::invalid_argument("Distribution: sum = " + detail::fmt_double(total) +
                                        " is not 1");
        }
    }

    std::size_t size() const { return p_.size(); }
    const std::vector<double>& probs() const { return p_; }

  private:
    std::vector<double> p_;
};

// Shannon entropy in bits; 0 log 0 = 0.
inline double shannon(std::span<const double> p) {
    double h = 0.0;
    for (double x : p) {
        if (x > 1e-300) {
            h -= x * std::log2(x);
        }
    }
    return h;
}

inline double shannon(const Distribution& dist) { return shannon(std::span(dist.probs())); }

inline double index_of_coincidence(std::span<const double> p) {
    double c = 0.0;
    for (double x : p) {
        c += x * x;
    }
    return c;
}

inline double index_of_coincidence(const Distribution& dist) {
    return index_of_coincidence(std::span(dist.probs()));
}

// Renyi entropy of order q > 1, in bits: log2(sum p^q) / (1 - q).
inline double renyi(std::span<const double> p, double q) {
    if (!(q > 1.0)) {
        throw std::invalid_argument("renyi: order q must be > 1");
    }
    double s = 0.0;
    for (double x : p) {
        if (x > 1e-300) {
            s += std::pow(x, q);
        }
    }
    return std::log2(s) / (1.0 - q);
}

inline double renyi(const Distribution& dist, double q) { return renyi(std::span(dist.probs()), q); }

// Tsallis entropy of order q > 1: (1 - sum p^q) / (q - 1).
inline double tsallis(std::span<const double> p, double q) {
    if (!(q > 1.0)) {
        throw std::invalid_argument("tsallis: order q must be > 1");
    }
    double s = 0.0;
    for (double x : p) {
        if (x > 1e-300) {
            s += std::pow(x, q);
        }
    }
    return (1.0 - s) / (q - 1.0);
}

inline double tsallis(const Distribution& dist, double q) {
    return tsallis(std::span(dist.probs()), q);
}

// Harremoes-Topsoe lower bound on Shannon entropy given an index of
// coincidence: affine in ic for each integer k, tight at the uniform
// distribution on k+1 outcomes.
inline double ht_lower_bound(double ic, int k) {
    if (k < 1) {
        throw std::invalid_argument("ht_lower_bound: k must be >= 1");
    }
    const double kk = static_cast<double>(k);
    const double lg_k = std::log2(kk);
    const double lg_k1 = std::log2(kk + 1.0);
    const double intercept = (kk + 1.0) * lg_k1 - kk * lg_k;
    const double slope = kk * (kk + 1.0) * (lg_k1 - lg_k);
    return intercept - slope * ic;
}

}  // namespace mubent
