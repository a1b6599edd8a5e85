#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace mubent {

using cplx = std::complex<double>;

namespace detail {

inline std::string fmt_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

}  // namespace detail

// Dense complex matrix, row-major storage. Dimensions here stay small
// (d <= a few hundred), so everything is straightforward O(n^3) dense code.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;

    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, cplx(0.0, 0.0)) {}

    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
        : rows_(rows), cols_(cols), data_(std::move(entries)) {
        if (data_.size() != rows_ * cols_) {
            throw std::invalid_argument("ComplexMatrix: entry count does not match dimensions");
        }
        for (const cplx& z : data_) {
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
                throw std::invalid_argument("ComplexMatrix: non-finite entry");
            }
        }
    }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<cplx>& data() const { return data_; }

    ComplexMatrix adjoint() const {
        ComplexMatrix out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                out(j, i) = std::conj((*this)(i, j));
            }
        }
        return out;
    }

    ComplexMatrix operator*(const ComplexMatrix& rhs) const {
        if (cols_ != rhs.rows_) {
            throw std::invalid_argument("ComplexMatrix: inner dimensions do not match");
        }
        ComplexMatrix out(rows_, rhs.cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t k = 0; k < cols_; ++k) {
                const cplx a = (*this)(i, k);
                if (a == cplx(0.0, 0.0)) continue;
                for (std::size_t j = 0; j < rhs.cols_; ++j) {
                    out(i, j) += a * rhs(k, j);
                }
            }
        }
        return out;
    }

    ComplexMatrix operator+(const ComplexMatrix& rhs) const {
        check_same_shape(rhs);
        ComplexMatrix out = *this;
        for (std::size_t i = 0; i < data_.size(); ++i) {
            out.data_[i] += rhs.data_[i];
        }
        return out;
    }

    ComplexMatrix operator-(const ComplexMatrix& rhs) const {
        check_same_shape(rhs);
        ComplexMatrix out = *this;
        for (std::size_t i = 0; i < data_.size(); ++i) {
            out.data_[i] -= rhs.data_[i];
        }
        return out;
    }

    ComplexMatrix scaled(cplx factor) const {
        ComplexMatrix out = *this;
        for (cplx& z : out.data_) {
            z *= factor;
        }
        return out;
    }

    cplx trace() const {
        cplx t(0.0, 0.0);
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) {
            t += (*this)(i, i);
        }
        return t;
    }

    // max |a_ij|
    double max_abs() const {
        double m = 0.0;
        for (const cplx& z : data_) {
            m = std::max(m, std::abs(z));
        }
        return m;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const cplx& z : data_) {
            s += std::norm(z);
        }
        return std::sqrt(s);
    }

    // max |a_ij - conj(a_ji)|
    double hermiticity_deviation() const {
        double dev = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                dev = std::max(dev, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
            }
        }
        return dev;
    }

    // Matrix-vector products used by the measurement hot paths.
    std::vector<cplx> apply(const std::vector<cplx>& v) const {
        if (v.size() != cols_) {
            throw std::invalid_argument("ComplexMatrix: vector length does not match");
        }
        std::vector<cplx> out(rows_, cplx(0.0, 0.0));
        for (std::size_t i = 0; i < rows_; ++i) {
            cplx acc(0.0, 0.0);
            const cplx* row = &data_[i * cols_];
            for (std::size_t j = 0; j < cols_; ++j) {
                acc += row[j] * v[j];
            }
            out[i] = acc;
        }
        return out;
    }

    // Column j as a vector.
    std::vector<cplx> column(std::size_t j) const {
        std::vector<cplx> out(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            out[i] = (*this)(i, j);
        }
        return out;
    }

  private:
    void check_same_shape(const ComplexMatrix& rhs) const {
        if (rows_ != rhs.rows_ || cols_ != rhs.cols_) {
            throw std::invalid_argument("ComplexMatrix: shape mismatch");
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

inline cplx inner_product(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("inner_product: length mismatch");
    }
    cplx acc(0.0, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += std::conj(a[i]) * b[i];
    }
    return acc;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ia = 0; ia < a.rows(); ++ia) {
        for (std::size_t ja = 0; ja < a.cols(); ++ja) {
            const cplx f = a(ia, ja);
            if (f == cplx(0.0, 0.0)) continue;
            for (std::size_t ib = 0; ib < b.rows(); ++ib) {
                for (std::size_t jb = 0; jb < b.cols(); ++jb) {
                    out(ia * b.rows() + ib, ja * b.cols() + jb) = f * b(ib, jb);
                }
            }
        }
    }
    return out;
}

struct EigenSystem {
    std::vector<double> eigenvalues;  // ascending
    ComplexMatrix eigenvectors;       // orthonormal columns, one per eigenvalue
};

// Cyclic Jacobi diagonalization for complex Hermitian matrices. Deterministic:
// eigenvalues ascend, ties are kept in sweep order, and each eigenvector's
// first component above threshold is rotated to be real positive.
inline EigenSystem hermitian_eigensystem(const ComplexMatrix& a, double herm_tol = 1e-10) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("hermitian_eigensystem: matrix is not square");
    }
    const double herm_dev = a.hermiticity_deviation();
    if (herm_dev > herm_tol) {
        throw std::invalid_argument("hermitian_eigensystem: input not Hermitian, |A - A^dag| = " +
                                    detail::fmt_double(herm_dev));
    }
    const std::size_t n = a.rows();
    ComplexMatrix w = a;
    // Symmetrize so rounding asymmetries cannot accumulate during sweeps.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const cplx s = 0.5 * (w(i, j) + std::conj(w(j, i)));
            w(i, j) = s;
            w(j, i) = std::conj(s);
        }
        w(i, i) = cplx(w(i, i).real(), 0.0);
    }
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double scale = std::max(w.frobenius_norm(), 1e-300);
    const double stop = 1e-15 * scale;
    const int max_sweeps = 100;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                off += std::norm(w(p, q));
            }
        }
        if (std::sqrt(2.0 * off) <= stop) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = w(p, q);
                const double mag = std::abs(apq);
                if (mag <= 1e-300) continue;
                const cplx phase = apq / mag;
                const double app = w(p, p).real();
                const double aqq = w(q, q).real();
                const double theta = (aqq - app) / (2.0 * mag);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // Unitary 2x2 block [[c, -s*phase], [s*conj(phase), c]] applied
                // as W <- U^dag W U, V <- V U.
                for (std::size_t i = 0; i < n; ++i) {
                    const cplx wip = w(i, p);
                    const cplx wiq = w(i, q);
                    w(i, p) = c * wip + s * std::conj(phase) * wiq;
                    w(i, q) = -s * phase * wip + c * wiq;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    const cplx wpj = w(p, j);
                    const cplx wqj = w(q, j);
                    w(p, j) = c * wpj + s * phase * wqj;
                    w(q, j) = -s * std::conj(phase) * wpj + c * wqj;
                }
                w(p, q) = cplx(0.0, 0.0);
                w(q, p) = cplx(0.0, 0.0);
                for (std::size_t i = 0; i < n; ++i) {
                    const cplx vip = v(i, p);
                    const cplx viq = v(i, q);
                    v(i, p) = c * vip + s * std::conj(phase) * viq;
                    v(i, q) = -s * phase * vip + c * viq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return w(i, i).real() < w(j, j).real(); });

    EigenSystem out;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t src = order[k];
        out.eigenvalues[k] = w(src, src).real();
        // Phase convention: first component with non-negligible magnitude is
        // made real positive.
        double colmax = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            colmax = std::max(colmax, std::abs(v(i, src)));
        }
        cplx rot(1.0, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const cplx z = v(i, src);
            if (std::abs(z) > 1e-9 * colmax) {
                rot = std::conj(z) / std::abs(z);
                break;
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            out.eigenvectors(i, k) = v(i, src) * rot;
        }
    }
    return out;
}

// Hermitian, positive semidefinite, unit-trace operator; the state rho.
class DensityMatrix {
  public:
    explicit DensityMatrix(ComplexMatrix m) : dim_(m.rows()), mat_(std::move(m)) {
        if (dim_ < 2 || mat_.cols() != dim_) {
            throw std::invalid_argument("DensityMatrix: need a square matrix with d >= 2");
        }
        const double herm = mat_.hermiticity_deviation();
        if (herm > 1e-12) {
            throw std::invalid_argument("DensityMatrix: not Hermitian, deviation = " +
                                        detail::fmt_double(herm));
        }
        const cplx tr = mat_.trace();
        if (std::abs(tr - cplx(1.0, 0.0)) > 1e-12) {
            throw std::invalid_argument("DensityMatrix: trace = " + detail::fmt_double(tr.real()) +
                                        " is not 1");
        }
        const auto eig = hermitian_eigensystem(mat_, 1e-10);
        if (eig.eigenvalues.front() < -1e-10) {
            throw std::invalid_argument("DensityMatrix: negative eigenvalue " +
                                        detail::fmt_double(eig.eigenvalues.front()));
        }
    }

    std::size_t dim() const { return dim_; }
    const ComplexMatrix& matrix() const { return mat_; }

    // Tr(rho^2); by Hermiticity this is the squared Frobenius norm.
    double purity() const {
        double s = 0.0;
        for (const cplx& z : mat_.data()) {
            s += std::norm(z);
        }
        return s;
    }

  private:
    std::size_t dim_;
    ComplexMatrix mat_;
};

class PureState {
  public:
    explicit PureState(std::vector<cplx> amplitudes) : amps_(std::move(amplitudes)) {
        if (amps_.size() < 2) {
            throw std::invalid_argument("PureState: need dim >= 2");
        }
        double norm2 = 0.0;
        for (const cplx& z : amps_) {
            norm2 += std::norm(z);
        }
        if (std::abs(std::sqrt(norm2) - 1.0) > 1e-12) {
            throw std::invalid_argument("PureState: norm = " +
                                        detail::fmt_double(std::sqrt(norm2)) + " is not 1");
        }
    }

    std::size_t dim() const { return amps_.size(); }
    const std::vector<cplx>& amplitudes() const { return amps_; }

    DensityMatrix projector() const {
        const std::size_t d = amps_.size();
        ComplexMatrix m(d, d);
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                m(i, j) = amps_[i] * std::conj(amps_[j]);
            }
        }
        return DensityMatrix(std::move(m));
    }

  private:
    std::vector<cplx> amps_;
};

// FNV-1a over the raw bytes of the entries; used for provenance checks on
// derived tables.
inline std::uint64_t content_hash(const ComplexMatrix& m) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    auto mix_u64 = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h = (h ^ static_cast<unsigned char>(v >> (8 * i))) * 0x100000001B3ULL;
        }
    };
    mix_u64(m.rows());
    mix_u64(m.cols());
    for (const cplx& z : m.data()) {
        std::uint64_t bits;
        double re = z.real(), im = z.imag();
        static_assert(sizeof(double) == sizeof(std::uint64_t));
        std::memcpy(&bits, &re, 8);
        mix_u64(bits);
        std::memcpy(&bits, &im, 8);
        mix_u64(bits);
    }
    return h;
}

}  // namespace mubent
