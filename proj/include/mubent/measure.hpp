#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mubent/entropy.hpp"
#include "mubent/linalg.hpp"
#include "mubent/mub.hpp"

namespace mubent {

struct TableSource {
    std::uint64_t state_hash = 0;
    std::uint64_t mub_hash = 0;
};

// M x d matrix of measurement probabilities p[m][i] = <i_m| rho |i_m>,
// one row per basis. Basis order is semantically significant: the
// time-reversal convention below conjugates relative to basis 1.
class ProbabilityTable {
  public:
    ProbabilityTable(std::size_t bases, std::size_t dim, std::vector<double> probs,
                     TableSource source)
        : m_(bases), d_(dim), p_(std::move(probs)), source_(source) {
        if (p_.size() != m_ * d_) {
            throw std::invalid_argument("ProbabilityTable: size mismatch");
        }
    }

    std::size_t bases() const { return m_; }
    std::size_t dim() const { return d_; }
    const TableSource& source() const { return source_; }

    std::span<const double> row(std::size_t m) const {
        return std::span(p_).subspan(m * d_, d_);
    }
    double at(std::size_t m, std::size_t i) const { return p_[m * d_ + i]; }
    const std::vector<double>& raw() const { return p_; }

  private:
    std::size_t m_, d_;
    std::vector<double> p_;
    TableSource source_;
};

namespace detail {

// <v| rho |v>, real part; the imaginary part must be rounding noise.
inline double expectation(const ComplexMatrix& rho, const std::vector<cplx>& v) {
    const std::vector<cplx> rv = rho.apply(v);
    const cplx e = inner_product(v, rv);
    if (std::abs(e.imag()) > 1e-12) {
        throw std::runtime_error("expectation: non-real value, imag = " +
                                 fmt_double(e.imag()));
    }
    return e.real();
}

}  // namespace detail

// Measurement probabilities of rho in every basis of the set. Rounding
// negatives down to -1e-12 are clamped to zero and the row renormalized;
// anything more negative is an error.
inline ProbabilityTable probability_table(const DensityMatrix& rho, const MubSet& s) {
    if (rho.dim() != s.dim()) {
        throw std::invalid_argument("probability_table: state dim " + std::to_string(rho.dim()) +
                                    " != basis dim " + std::to_string(s.dim()));
    }
    const std::size_t d = s.dim();
    const std::size_t m_count = s.count();
    std::vector<double> p(m_count * d);
    for (std::size_t m = 0; m < m_count; ++m) {
        const ComplexMatrix& u = s.basis(m).vectors();
        double row_sum = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            double value = detail::expectation(rho.matrix(), u.column(i));
            if (value < 0.0) {
                if (value < -1e-12) {
                    throw std::runtime_error("probability_table: negative probability " +
                                             detail::fmt_double(value));
                }
                value = 0.0;
            }
            p[m * d + i] = value;
            row_sum += value;
        }
        if (std::abs(row_sum - 1.0) > 1e-10) {
            throw std::runtime_error("probability_table: row sum " +
                                     detail::fmt_double(row_sum) + " is not 1");
        }
        for (std::size_t i = 0; i < d; ++i) {
            p[m * d + i] /= row_sum;
        }
    }
    return ProbabilityTable(m_count, d, std::move(p),
                            {content_hash(rho.matrix()), content_hash(s)});
}

struct CoincidenceSummary {
    std::vector<double> per_basis_ic;  // sum_i p^2 per basis
    double total_ic = 0.0;
    double bound_c = 0.0;  // Tr(rho^2) + (M - 1) / d
    double margin = 0.0;   // bound_c - total_ic; negative beyond tol flags a non-MUB family
    bool theorem1_violated = false;
};

inline CoincidenceSummary coincidence_summary(const ProbabilityTable& table,
                                              const DensityMatrix& rho, double tol = 1e-10) {
    if (table.source().state_hash != content_hash(rho.matrix())) {
        throw std::invalid_argument("coincidence_summary: table was not generated from this state");
    }
    CoincidenceSummary out;
    out.per_basis_ic.reserve(table.bases());
    for (std::size_t m = 0; m < table.bases(); ++m) {
        const double ic = index_of_coincidence(table.row(m));
        out.per_basis_ic.push_back(ic);
        out.total_ic += ic;
    }
    out.bound_c = rho.purity() + (static_cast<double>(table.bases()) - 1.0) /
                                     static_cast<double>(table.dim());
    out.margin = out.bound_c - out.total_ic;
    out.theorem1_violated = out.margin < -tol;
    return out;
}

// |sum_m sum_i p^2 - (Tr rho^2 + 1)| for a complete set of d + 1 bases.
inline double larsen_ivanovic_residual(const DensityMatrix& rho, const MubSet& s) {
    if (s.count() != s.dim() + 1) {
        throw std::invalid_argument("larsen_ivanovic_residual: need M = d + 1, got M = " +
                                    std::to_string(s.count()));
    }
    const ProbabilityTable table = probability_table(rho, s);
    double total = 0.0;
    for (std::size_t m = 0; m < table.bases(); ++m) {
        total += index_of_coincidence(table.row(m));
    }
    return std::abs(total - (rho.purity() + 1.0));
}

struct ProofCheckReport {
    double basis_orthonormality_err = 0.0;
    double coeff_identity_err = 0.0;
    double inner_product_err = 0.0;
};

namespace detail {

// Time reversal relative to basis 1: conjugate the expansion coefficients in
// that basis, so T v = B1 conj(B1^dag v).
inline std::vector<cplx> time_reversed(const ComplexMatrix& basis1, const std::vector<cplx>& v) {
    const std::size_t d = v.size();
    std::vector<cplx> coeffs(d, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < d; ++i) {
        cplx acc(0.0, 0.0);
        for (std::size_t r = 0; r < d; ++r) {
            acc += std::conj(basis1(r, i)) * v[r];
        }
        coeffs[i] = std::conj(acc);
    }
    std::vector<cplx> out(d, cplx(0.0, 0.0));
    for (std::size_t r = 0; r < d; ++r) {
        cplx acc(0.0, 0.0);
        for (std::size_t i = 0; i < d; ++i) {
            acc += basis1(r, i) * coeffs[i];
        }
        out[r] = acc;
    }
    return out;
}

inline std::vector<cplx> tensor_vector(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    std::vector<cplx> out(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            out[i * b.size() + j] = a[i] * b[j];
        }
    }
    return out;
}

}  // namespace detail

// The two-qudit states |Phi> = sum_i |i_1>|i_1>* / sqrt(d) and
// |phi_mk> = sum_i omega^(k(i-1)) |i_m>|i_m>* / sqrt(d) used in the proof of
// the coincidence bound, with omega = exp(2 pi i / d).
//
// Reported errors:
//   (a) max deviation of the M(d-1)+1 states from pairwise orthonormality,
//   (b) |sum |rho_mk|^2 - ((1/d) sum p^2 - M/d^2)| with
//       rho_mk = (1/d) sum_i omega^(-k(i-1)) p_im,
//   (c) |<Phi| rho^2 x I |Phi> - Tr(rho^2)/d|.
inline ProofCheckReport proof_construction_check(const DensityMatrix& rho, const MubSet& s) {
    const std::size_t d = s.dim();
    const std::size_t m_count = s.count();
    if (m_count * (d - 1) + 1 > d * d) {
        throw std::invalid_argument(
            "proof_construction_check: M(d-1)+1 > d^2, not a MUB family");
    }
    if (rho.dim() != d) {
        throw std::invalid_argument("proof_construction_check: dimension mismatch");
    }
    const ComplexMatrix& basis1 = s.basis(0).vectors();
    const double inv_root_d = 1.0 / std::sqrt(static_cast<double>(d));

    // |Phi> and all |phi_mk>.
    std::vector<std::vector<cplx>> states;
    states.reserve(m_count * (d - 1) + 1);
    {
        std::vector<cplx> phi(d * d, cplx(0.0, 0.0));
        for (std::size_t i = 0; i < d; ++i) {
            const std::vector<cplx> v = basis1.column(i);
            const std::vector<cplx> pair = detail::tensor_vector(v, detail::time_reversed(basis1, v));
            for (std::size_t r = 0; r < d * d; ++r) {
                phi[r] += inv_root_d * pair[r];
            }
        }
        states.push_back(std::move(phi));
    }
    for (std::size_t m = 0; m < m_count; ++m) {
        const ComplexMatrix& u = s.basis(m).vectors();
        for (std::size_t k = 1; k < d; ++k) {
            std::vector<cplx> state(d * d, cplx(0.0, 0.0));
            for (std::size_t i = 0; i < d; ++i) {
                const double angle = 2.0 * M_PI * static_cast<double>((k * i) % d) /
                                     static_cast<double>(d);
                const cplx phase = std::polar(inv_root_d, angle);
                const std::vector<cplx> v = u.column(i);
                const std::vector<cplx> pair =
                    detail::tensor_vector(v, detail::time_reversed(basis1, v));
                for (std::size_t r = 0; r < d * d; ++r) {
                    state[r] += phase * pair[r];
                }
            }
            states.push_back(std::move(state));
        }
    }

    ProofCheckReport out;
    for (std::size_t a = 0; a < states.size(); ++a) {
        for (std::size_t b = a; b < states.size(); ++b) {
            const cplx g = inner_product(states[a], states[b]);
            const cplx target = (a == b) ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
            out.basis_orthonormality_err =
                std::max(out.basis_orthonormality_err, std::abs(g - target));
        }
    }

    const ProbabilityTable table = probability_table(rho, s);
    double coeff_sum = 0.0;
    double p_square_sum = 0.0;
    for (std::size_t m = 0; m < m_count; ++m) {
        const auto row = table.row(m);
        p_square_sum += index_of_coincidence(row);
        for (std::size_t k = 1; k < d; ++k) {
            cplx rho_mk(0.0, 0.0);
            for (std::size_t i = 0; i < d; ++i) {
                const double angle = -2.0 * M_PI * static_cast<double>((k * i) % d) /
                                     static_cast<double>(d);
                rho_mk += std::polar(1.0 / static_cast<double>(d), angle) * row[i];
            }
            coeff_sum += std::norm(rho_mk);
        }
    }
    const double dd = static_cast<double>(d);
    const double mm = static_cast<double>(m_count);
    out.coeff_identity_err = std::abs(coeff_sum - (p_square_sum / dd - mm / (dd * dd)));

    // <Phi| rho^2 x I |Phi> via (rho x I)|Phi> paired with itself.
    const std::vector<cplx>& phi = states.front();
    std::vector<cplx> rho_phi(d * d, cplx(0.0, 0.0));
    const ComplexMatrix& rm = rho.matrix();
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t ip = 0; ip < d; ++ip) {
            const cplx rij = rm(i, ip);
            if (rij == cplx(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < d; ++j) {
                rho_phi[i * d + j] += rij * phi[ip * d + j];
            }
        }
    }
    const double lhs = inner_product(rho_phi, rho_phi).real();
    out.inner_product_err = std::abs(lhs - rho.purity() / dd);
    return out;
}

// Fourier coefficients rho_mk of one probability row, k = 0..d-1.
inline std::vector<cplx> row_fourier_modes(std::span<const double> row) {
    const std::size_t d = row.size();
    std::vector<cplx> modes(d);
    for (std::size_t k = 0; k < d; ++k) {
        cplx acc(0.0, 0.0);
        for (std::size_t i = 0; i < d; ++i) {
            const double angle =
                -2.0 * M_PI * static_cast<double>((k * i) % d) / static_cast<double>(d);
            acc += std::polar(1.0 / static_cast<double>(d), angle) * row[i];
        }
        modes[k] = acc;
    }
    return modes;
}

// Joint outcome probabilities for matched local MUB measurements: one dA x dB
// table per basis index m.
struct JointProbabilityTables {
    std::size_t bases = 0;
    std::size_t dim_a = 0;
    std::size_t dim_b = 0;
    std::vector<std::vector<double>> tables;  // tables[m][i * dim_b + s]
};

inline JointProbabilityTables joint_probability_table(const DensityMatrix& rho_ab,
                                                      const MubSet& sa, const MubSet& sb) {
    if (sa.count() != sb.count()) {
        throw std::invalid_argument("joint_probability_table: basis counts differ");
    }
    const std::size_t da = sa.dim();
    const std::size_t db = sb.dim();
    if (rho_ab.dim() != da * db) {
        throw std::invalid_argument("joint_probability_table: state dim != dA * dB");
    }
    JointProbabilityTables out;
    out.bases = sa.count();
    out.dim_a = da;
    out.dim_b = db;
    out.tables.resize(out.bases);
    for (std::size_t m = 0; m < out.bases; ++m) {
        std::vector<double>& t = out.tables[m];
        t.resize(da * db);
        double total = 0.0;
        for (std::size_t i = 0; i < da; ++i) {
            const std::vector<cplx> u = sa.basis(m).vector(i);
            for (std::size_t sv = 0; sv < db; ++sv) {
                const std::vector<cplx> v = sb.basis(m).vector(sv);
                double value =
                    detail::expectation(rho_ab.matrix(), detail::tensor_vector(u, v));
                if (value < 0.0) {
                    if (value < -1e-12) {
                        throw std::runtime_error(
                            "joint_probability_table: negative probability " +
                            detail::fmt_double(value));
                    }
                    value = 0.0;
                }
                t[i * db + sv] = value;
                total += value;
            }
        }
        if (std::abs(total - 1.0) > 1e-10) {
            throw std::runtime_error("joint_probability_table: table sum " +
                                     detail::fmt_double(total) + " is not 1");
        }
        for (double& x : t) {
            x /= total;
        }
    }
    return out;
}

}  // namespace mubent
