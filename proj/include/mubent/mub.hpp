#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mubent/gf.hpp"
#include "mubent/linalg.hpp"
#include "mubent/rng.hpp"

namespace mubent {

// Orthonormal basis of C^d, stored as the columns of a unitary matrix.
class Basis {
  public:
    explicit Basis(ComplexMatrix vectors, double tol = 1e-10)
        : dim_(vectors.rows()), vecs_(std::move(vectors)) {
        if (vecs_.cols() != dim_ || dim_ == 0) {
            throw std::invalid_argument("Basis: need a square nonempty matrix of column vectors");
        }
        const double dev = orthonormality_deviation();
        if (dev > tol) {
            throw std::invalid_argument("Basis: columns not orthonormal, deviation = " +
                                        detail::fmt_double(dev));
        }
    }

    std::size_t dim() const { return dim_; }
    const ComplexMatrix& vectors() const { return vecs_; }
    std::vector<cplx> vector(std::size_t i) const { return vecs_.column(i); }

    // max-norm of U^dag U - I
    double orthonormality_deviation() const {
        double dev = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) {
            for (std::size_t j = 0; j < dim_; ++j) {
                cplx g(0.0, 0.0);
                for (std::size_t r = 0; r < dim_; ++r) {
                    g += std::conj(vecs_(r, i)) * vecs_(r, j);
                }
                const cplx target = (i == j) ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
                dev = std::max(dev, std::abs(g - target));
            }
        }
        return dev;
    }

  private:
    std::size_t dim_;
    ComplexMatrix vecs_;
};

struct MubMetadata {
    std::string construction;
    std::uint64_t seed = 0;
    bool seeded = false;
};

struct MubVerification {
    bool is_mub = false;
    double worst_overlap_deviation = 0.0;
    double worst_orthonormality = 0.0;
};

// Exhaustive pairwise check: every squared cross-basis overlap must equal 1/d.
inline MubVerification verify_mub_set(std::span<const Basis> bases, double tol) {
    if (bases.empty()) {
        throw std::invalid_argument("verify_mub_set: no bases");
    }
    const std::size_t d = bases.front().dim();
    for (const Basis& b : bases) {
        if (b.dim() != d) {
            throw std::invalid_argument("verify_mub_set: dimension mismatch between bases");
        }
    }
    MubVerification out;
    for (const Basis& b : bases) {
        out.worst_orthonormality = std::max(out.worst_orthonormality, b.orthonormality_deviation());
    }
    const double target = 1.0 / static_cast<double>(d);
    for (std::size_t m = 0; m < bases.size(); ++m) {
        for (std::size_t n = m + 1; n < bases.size(); ++n) {
            const ComplexMatrix& u = bases[m].vectors();
            const ComplexMatrix& v = bases[n].vectors();
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t j = 0; j < d; ++j) {
                    cplx ov(0.0, 0.0);
                    for (std::size_t r = 0; r < d; ++r) {
                        ov += std::conj(u(r, i)) * v(r, j);
                    }
                    out.worst_overlap_deviation =
                        std::max(out.worst_overlap_deviation, std::abs(std::norm(ov) - target));
                }
            }
        }
    }
    out.is_mub = out.worst_overlap_deviation <= tol && out.worst_orthonormality <= tol;
    return out;
}

// Ordered family of pairwise mutually unbiased bases.
class MubSet {
  public:
    MubSet(std::vector<Basis> bases, double unbiasedness_tol = 1e-9, MubMetadata meta = {})
        : bases_(std::move(bases)), tol_(unbiasedness_tol), meta_(std::move(meta)) {
        const MubVerification check = verify_mub_set(std::span(bases_), tol_);
        if (!check.is_mub) {
            throw std::invalid_argument(
                "MubSet: unbiasedness check failed, worst overlap deviation = " +
                detail::fmt_double(check.worst_overlap_deviation) + ", tol = " +
                detail::fmt_double(tol_));
        }
        dim_ = bases_.front().dim();
    }

    std::size_t dim() const { return dim_; }
    std::size_t count() const { return bases_.size(); }
    const std::vector<Basis>& bases() const { return bases_; }
    const Basis& basis(std::size_t m) const { return bases_.at(m); }
    double unbiasedness_tol() const { return tol_; }
    const MubMetadata& metadata() const { return meta_; }

    MubSet prefix(std::size_t m) const {
        if (m == 0 || m > bases_.size()) {
            throw std::invalid_argument("MubSet: invalid prefix length");
        }
        return MubSet(std::vector<Basis>(bases_.begin(), bases_.begin() + m), tol_, meta_);
    }

  private:
    std::vector<Basis> bases_;
    double tol_;
    MubMetadata meta_;
    std::size_t dim_;
};

inline std::uint64_t content_hash(const MubSet& s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (const Basis& b : s.bases()) {
        const std::uint64_t bh = content_hash(b.vectors());
        for (int i = 0; i < 8; ++i) {
            h = (h ^ static_cast<unsigned char>(bh >> (8 * i))) * 0x100000001B3ULL;
        }
    }
    return h;
}

// Standard basis plus the discrete Fourier basis; unbiased for every d >= 2.
inline MubSet fourier_pair(std::size_t d) {
    if (d < 2) {
        throw std::invalid_argument("fourier_pair: need d >= 2");
    }
    ComplexMatrix fourier(d, d);
    const double root = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < d; ++i) {
            const double angle =
                2.0 * M_PI * static_cast<double>((i * j) % d) / static_cast<double>(d);
            fourier(i, j) = std::polar(root, angle);
        }
    }
    std::vector<Basis> bases;
    bases.emplace_back(ComplexMatrix::identity(d));
    bases.emplace_back(std::move(fourier));
    return MubSet(std::move(bases), 1e-12, {"fourier_pair", 0, false});
}

// Maximal commuting class of generalized Pauli operators X(a)Z(b) under
// field labeling.
struct PauliClass {
    std::size_t dim = 0;
    std::string label;
    std::vector<ComplexMatrix> members;  // d - 1 commuting unitaries
};

namespace detail {

// X(a)Z(b) in the field-element basis: |x> -> chi(b x) |x + a> with
// chi(y) = exp(2 pi i tr(y) / p).
inline ComplexMatrix pauli_xz(const gf::GaloisField& field, const gf::FieldElement& a,
                              const gf::FieldElement& b) {
    const std::size_t d = static_cast<std::size_t>(field.order());
    ComplexMatrix w(d, d);
    for (std::size_t xi = 0; xi < d; ++xi) {
        const gf::FieldElement x = field.element(xi);
        const std::size_t target = static_cast<std::size_t>(field.index_of(field.add(x, a)));
        const int tr = field.field_trace(field.mul(b, x));
        const double angle = 2.0 * M_PI * static_cast<double>(tr) / static_cast<double>(field.p());
        w(target, xi) = std::polar(1.0, angle);
    }
    return w;
}

}  // namespace detail

// The d^2 - 1 non-identity generalized Paulis partitioned into d + 1 maximal
// commuting classes: {Z(b)} plus {X(a)Z(mu a)} for each field element mu.
inline std::vector<PauliClass> make_pauli_classes(const gf::GaloisField& field) {
    const std::size_t d = static_cast<std::size_t>(field.order());
    std::vector<PauliClass> classes;
    classes.reserve(d + 1);

    PauliClass zclass;
    zclass.dim = d;
    zclass.label = "Z";
    for (std::size_t bi = 1; bi < d; ++bi) {
        zclass.members.push_back(detail::pauli_xz(field, field.zero(), field.element(bi)));
    }
    classes.push_back(std::move(zclass));

    for (std::size_t mi = 0; mi < d; ++mi) {
        const gf::FieldElement mu = field.element(mi);
        PauliClass c;
        c.dim = d;
        c.label = "XZ^mu[" + std::to_string(mi) + "]";
        for (std::size_t ai = 1; ai < d; ++ai) {
            const gf::FieldElement a = field.element(ai);
            c.members.push_back(detail::pauli_xz(field, a, field.mul(mu, a)));
        }
        classes.push_back(std::move(c));
    }
    return classes;
}

inline constexpr std::uint64_t kDefaultConstructionSeed = 0x6D7562736574ULL;

namespace detail {

// Joint eigenbasis of a commuting class, found by diagonalizing a random
// Hermitian combination of the members and their adjoints, then verifying
// that every member is actually diagonal in the result.
inline Basis joint_eigenbasis(const PauliClass& cls, std::uint64_t seed, std::size_t class_index,
                              double diag_tol = 1e-9) {
    const std::size_t d = cls.dim;
    const int max_attempts = 16;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        rng::Stream stream(seed, "joint-eigenbasis",
                           static_cast<std::uint64_t>(class_index) * 64 + attempt);
        ComplexMatrix h(d, d);
        for (const ComplexMatrix& w : cls.members) {
            const cplx alpha = stream.next_complex_gaussian();
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t j = 0; j < d; ++j) {
                    h(i, j) += alpha * w(i, j) + std::conj(alpha) * std::conj(w(j, i));
                }
            }
        }
        const EigenSystem eig = hermitian_eigensystem(h, 1e-9);
        const ComplexMatrix vdag = eig.eigenvectors.adjoint();
        bool all_diagonal = true;
        for (const ComplexMatrix& w : cls.members) {
            const ComplexMatrix t = vdag * (w * eig.eigenvectors);
            double off = 0.0;
            for (std::size_t i = 0; i < d && all_diagonal; ++i) {
                for (std::size_t j = 0; j < d; ++j) {
                    if (i != j) off = std::max(off, std::abs(t(i, j)));
                }
            }
            if (off > diag_tol) {
                all_diagonal = false;
                break;
            }
        }
        if (all_diagonal) {
            return Basis(eig.eigenvectors);
        }
    }
    throw std::runtime_error("joint_eigenbasis: no nondegenerate combination found for class " +
                             cls.label);
}

}  // namespace detail

// Full set of d + 1 mutually unbiased bases for prime-power d. Basis 1 is the
// standard basis (joint eigenbasis of the clock class); the others are joint
// eigenbases of the shifted classes. Deterministic for fixed (d, seed), and
// the result is always re-verified before being returned.
inline MubSet construct_full(std::size_t d, std::uint64_t seed = kDefaultConstructionSeed) {
    const gf::PrimePower pp = gf::prime_power_decompose(d);
    if (!pp.valid) {
        std::string msg = "construct_full: d = " + std::to_string(d) +
                          " is not a prime power (d = ";
        const auto factors = gf::factorize(d);
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (i > 0) msg += " * ";
            msg += std::to_string(factors[i].first);
            if (factors[i].second > 1) msg += "^" + std::to_string(factors[i].second);
        }
        msg += ")";
        throw std::invalid_argument(msg);
    }
    const gf::GaloisField field(pp.p, pp.k);
    const std::vector<PauliClass> classes = make_pauli_classes(field);

    std::vector<Basis> bases;
    bases.reserve(d + 1);
    // Clock class members are diagonal already; its joint eigenbasis is the
    // standard basis in natural order.
    bases.emplace_back(ComplexMatrix::identity(d));
    for (std::size_t ci = 1; ci < classes.size(); ++ci) {
        bases.push_back(detail::joint_eigenbasis(classes[ci], seed, ci));
    }
    return MubSet(std::move(bases), 1e-9, {"pauli_classes", seed, true});
}

// Closed-form construction for odd prime d: the standard basis plus the d
// quadratic-phase bases with components omega^(m j^2 + i j) / sqrt(d).
// Independent of the class-based route; used to cross-check it.
inline MubSet odd_prime_quadratic_mubs(std::size_t d) {
    if (!gf::is_prime(static_cast<int>(d)) || d % 2 == 0) {
        throw std::invalid_argument("odd_prime_quadratic_mubs: d must be an odd prime");
    }
    std::vector<Basis> bases;
    bases.reserve(d + 1);
    bases.emplace_back(ComplexMatrix::identity(d));
    const double root = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::size_t m = 0; m < d; ++m) {
        ComplexMatrix u(d, d);
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                const std::size_t exponent = (m * j * j + i * j) % d;
                const double angle =
                    2.0 * M_PI * static_cast<double>(exponent) / static_cast<double>(d);
                u(j, i) = std::polar(root, angle);
            }
        }
        bases.emplace_back(std::move(u));
    }
    return MubSet(std::move(bases), 1e-9, {"quadratic_phase", 0, false});
}

// Basis m of the output is the Kronecker product of basis m of each input;
// M = min(M1, M2). Cross-basis overlaps multiply, so unbiasedness carries
// over at 1/(d1 d2).
inline MubSet tensor_compose(const MubSet& s1, const MubSet& s2) {
    const std::size_t m = std::min(s1.count(), s2.count());
    if (m == 0) {
        throw std::invalid_argument("tensor_compose: empty input");
    }
    std::vector<Basis> bases;
    bases.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        bases.emplace_back(kron(s1.basis(i).vectors(), s2.basis(i).vectors()));
    }
    const double tol = std::max(s1.unbiasedness_tol(), s2.unbiasedness_tol());
    return MubSet(std::move(bases), tol, {"tensor", 0, false});
}

// Best-effort construction of M MUBs in dimension d: the full prime-power
// family when available, the Fourier pair for M = 2, and the tensor product
// of full prime-power families otherwise.
inline MubSet auto_mub_set(std::size_t d, std::size_t M,
                           std::uint64_t seed = kDefaultConstructionSeed) {
    if (M < 1) {
        throw std::invalid_argument("auto_mub_set: need M >= 1");
    }
    const gf::PrimePower pp = gf::prime_power_decompose(d);
    if (pp.valid) {
        if (M > d + 1) {
            throw std::invalid_argument("auto_mub_set: only d + 1 = " + std::to_string(d + 1) +
                                        " bases available for d = " + std::to_string(d));
        }
        return construct_full(d, seed).prefix(M);
    }
    if (M <= 2) {
        return fourier_pair(d).prefix(M);
    }
    const auto factors = gf::factorize(d);
    std::size_t available = 0;
    MubSet composed = [&] {
        std::vector<MubSet> parts;
        for (const auto& [p, k] : factors) {
            std::size_t q = 1;
            for (int j = 0; j < k; ++j) q *= static_cast<std::size_t>(p);
            parts.push_back(construct_full(q, seed));
        }
        MubSet acc = parts.front();
        for (std::size_t i = 1; i < parts.size(); ++i) {
            acc = tensor_compose(acc, parts[i]);
        }
        return acc;
    }();
    available = composed.count();
    if (M > available) {
        throw std::invalid_argument("auto_mub_set: only " + std::to_string(available) +
                                    " bases available for d = " + std::to_string(d) +
                                    " via tensor composition");
    }
    return composed.prefix(M);
}

}  // namespace mubent
