#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "mubent/harness.hpp"
#include "mubent/linalg.hpp"
#include "mubent/mub.hpp"
#include "mubent/rng.hpp"

namespace test_util {

inline mubent::ComplexMatrix random_hermitian(std::size_t d, mubent::rng::Stream& stream) {
    mubent::ComplexMatrix g(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            g(i, j) = stream.next_complex_gaussian();
        }
    }
    mubent::ComplexMatrix h(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            h(i, j) = 0.5 * (g(i, j) + std::conj(g(j, i)));
        }
    }
    return h;
}

inline mubent::DensityMatrix random_density(std::size_t d, std::uint64_t seed,
                                            std::uint64_t index) {
    mubent::CampaignConfig cfg;
    cfg.d = d;
    cfg.seed = seed;
    cfg.ensemble = mubent::StateEnsemble::hilbert_schmidt_mixed;
    return mubent::sample_state(cfg, index);
}

inline mubent::DensityMatrix random_pure(std::size_t d, std::uint64_t seed, std::uint64_t index) {
    mubent::CampaignConfig cfg;
    cfg.d = d;
    cfg.seed = seed;
    cfg.ensemble = mubent::StateEnsemble::haar_pure;
    return mubent::sample_state(cfg, index);
}

// Mixes columns (i, j) of the given basis by a real Givens rotation; the basis
// stays orthonormal but loses unbiasedness against the others.
inline mubent::MubSet corrupted_set(const mubent::MubSet& s, std::size_t basis_index,
                                    double angle, double accept_tol = 0.5) {
    std::vector<mubent::Basis> bases;
    for (std::size_t m = 0; m < s.count(); ++m) {
        if (m != basis_index) {
            bases.push_back(s.basis(m));
            continue;
        }
        mubent::ComplexMatrix u = s.basis(m).vectors();
        const double c = std::cos(angle), sn = std::sin(angle);
        for (std::size_t r = 0; r < u.rows(); ++r) {
            const mubent::cplx a = u(r, 0);
            const mubent::cplx b = u(r, 1);
            u(r, 0) = c * a + sn * b;
            u(r, 1) = -sn * a + c * b;
        }
        bases.emplace_back(std::move(u));
    }
    return mubent::MubSet(std::move(bases), accept_tol, {"corrupted", 0, false});
}

// True when the two bases agree up to per-vector phases and reordering:
// every squared overlap is 0 or 1 and the pattern is a permutation.
inline bool bases_match(const mubent::Basis& a, const mubent::Basis& b, double tol = 1e-9) {
    const std::size_t d = a.dim();
    if (b.dim() != d) return false;
    std::vector<int> row_hits(d, 0), col_hits(d, 0);
    for (std::size_t i = 0; i < d; ++i) {
        const auto u = a.vector(i);
        for (std::size_t j = 0; j < d; ++j) {
            const double ov = std::norm(mubent::inner_product(u, b.vector(j)));
            if (std::abs(ov - 1.0) < tol) {
                ++row_hits[i];
                ++col_hits[j];
            } else if (ov > tol) {
                return false;
            }
        }
    }
    for (std::size_t i = 0; i < d; ++i) {
        if (row_hits[i] != 1 || col_hits[i] != 1) return false;
    }
    return true;
}

}  // namespace test_util
