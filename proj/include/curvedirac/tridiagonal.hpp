#pragma once

// Eigenpairs of real (generally nonsymmetric) tridiagonal matrices.
//
// When every product sub_i * super_i is positive the matrix is diagonally
// similar to a symmetric tridiagonal one, so its spectrum is real; eigenvalues
// then come from Sturm-sequence bisection and vectors from inverse iteration.
// Otherwise a Francis double-shift QR on the (dense) Hessenberg form supplies
// the eigenvalues, and vectors again come from inverse iteration.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "curvedirac/errors.hpp"

namespace curvedirac {

/// sub[i] = M(i+1, i), diag[i] = M(i, i), super[i] = M(i, i+1).
struct TridiagonalMatrix {
    std::vector<double> sub;
    std::vector<double> diag;
    std::vector<double> super;

    std::size_t size() const noexcept { return diag.size(); }

    void validate() const {
        if (diag.empty() || sub.size() + 1 != diag.size() || super.size() + 1 != diag.size()) {
            throw ConfigError("tridiagonal: inconsistent band lengths");
        }
        auto finite = [](const std::vector<double>& v) {
            return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
        };
        if (!finite(sub) || !finite(diag) || !finite(super)) {
            throw DomainError("tridiagonal: non-finite entry");
        }
    }

    /// max row sum of |entries|
    double norm_inf() const {
        double best = 0.0;
        for (std::size_t i = 0; i < size(); ++i) {
            double row = std::abs(diag[i]);
            if (i > 0) row += std::abs(sub[i - 1]);
            if (i + 1 < size()) row += std::abs(super[i]);
            best = std::max(best, row);
        }
        return best;
    }

    std::vector<double> multiply(const std::vector<double>& x) const {
        const std::size_t n = size();
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            double acc = diag[i] * x[i];
            if (i > 0) acc += sub[i - 1] * x[i - 1];
            if (i + 1 < n) acc += super[i] * x[i + 1];
            y[i] = acc;
        }
        return y;
    }

    bool symmetrizable() const {
        for (std::size_t i = 0; i < sub.size(); ++i) {
            if (!(sub[i] * super[i] > 0.0)) {
                return false;
            }
        }
        return true;
    }
};

enum class EigenPath { SymmetrizedBisection, HessenbergQR };

inline std::string_view to_string(EigenPath path) {
    return path == EigenPath::SymmetrizedBisection ? "symmetrized-bisection" : "hessenberg-qr";
}

struct EigenPairs {
    std::vector<double> values;                // ascending
    std::vector<std::vector<double>> vectors;  // unit 2-norm, one per value
    EigenPath path = EigenPath::SymmetrizedBisection;
    double max_imag_residue = 0.0;             // |Im lambda| / |lambda|, QR path only
};

/// Largest Hessenberg fallback the solver will attempt (dense O(n^2) storage).
inline constexpr std::size_t max_dense_qr_size = 2000;

/// Diagonal D with D M D^{-1} symmetric, given sub_i super_i > 0:
/// d_{i+1} / d_i = sqrt(super_i / sub_i). Scaled so that max d = 1.
inline std::vector<double> symmetrizing_scales(const TridiagonalMatrix& m) {
    const std::size_t n = m.size();
    std::vector<double> log_d(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        log_d[i + 1] = log_d[i] + 0.5 * (std::log(std::abs(m.super[i])) - std::log(std::abs(m.sub[i])));
    }
    const double top = *std::max_element(log_d.begin(), log_d.end());
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = std::exp(log_d[i] - top);
    }
    return d;
}

/// Symmetric tridiagonal with off-diagonal sign(super_i) sqrt(sub_i super_i),
/// exactly similar to `m` through symmetrizing_scales().
inline TridiagonalMatrix symmetrized(const TridiagonalMatrix& m) {
    TridiagonalMatrix s;
    s.diag = m.diag;
    s.sub.resize(m.sub.size());
    for (std::size_t i = 0; i < m.sub.size(); ++i) {
        s.sub[i] = std::copysign(std::sqrt(m.sub[i] * m.super[i]), m.super[i]);
    }
    s.super = s.sub;
    return s;
}

/// Number of eigenvalues of the symmetric tridiagonal (diag, off^2) below x.
inline std::size_t sturm_count(const std::vector<double>& diag, const std::vector<double>& off_sq,
                               double x, double pivot_floor) {
    std::size_t count = 0;
    double q = diag[0] - x;
    for (std::size_t i = 0;; ++i) {
        if (std::abs(q) < pivot_floor) {
            q = -pivot_floor;
        }
        if (q < 0.0) {
            ++count;
        }
        if (i + 1 == diag.size()) {
            break;
        }
        q = diag[i + 1] - x - off_sq[i] / q;
    }
    return count;
}

namespace detail {

// Solves (M - shift I) x = rhs by Gaussian elimination with partial pivoting.
// Tiny pivots are replaced by `pivot_floor`, which is what inverse iteration
// needs when the shift is an accurate eigenvalue.
inline std::vector<double> solve_shifted(const TridiagonalMatrix& m, double shift,
                                         std::vector<double> rhs, double pivot_floor) {
    const std::size_t n = m.size();
    // Row i of the working band: columns i, i+1, i+2.
    std::vector<double> a0(n), a1(n, 0.0), a2(n, 0.0);
    std::vector<double> low(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        a0[i] = m.diag[i] - shift;
        if (i + 1 < n) a1[i] = m.super[i];
        if (i > 0) low[i] = m.sub[i - 1];
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        // Candidate rows i and i+1 share columns i .. i+2.
        if (std::abs(low[i + 1]) > std::abs(a0[i])) {
            std::swap(a0[i], low[i + 1]);
            std::swap(a1[i], a0[i + 1]);
            std::swap(a2[i], a1[i + 1]);
            std::swap(rhs[i], rhs[i + 1]);
        }
        if (std::abs(a0[i]) < pivot_floor) {
            a0[i] = std::copysign(pivot_floor, a0[i] == 0.0 ? 1.0 : a0[i]);
        }
        const double factor = low[i + 1] / a0[i];
        a0[i + 1] -= factor * a1[i];
        a1[i + 1] -= factor * a2[i];
        rhs[i + 1] -= factor * rhs[i];
    }
    if (std::abs(a0[n - 1]) < pivot_floor) {
        a0[n - 1] = std::copysign(pivot_floor, a0[n - 1] == 0.0 ? 1.0 : a0[n - 1]);
    }
    std::vector<double> x(n);
    for (std::size_t k = n; k-- > 0;) {
        double acc = rhs[k];
        if (k + 1 < n) acc -= a1[k] * x[k + 1];
        if (k + 2 < n) acc -= a2[k] * x[k + 2];
        x[k] = acc / a0[k];
    }
    return x;
}

inline double norm2(const std::vector<double>& v) {
    return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

inline void scale_to_unit(std::vector<double>& v) {
    const double n = norm2(v);
    for (double& x : v) x /= n;
}

inline double residual_norm(const TridiagonalMatrix& m, double lambda, const std::vector<double>& v) {
    auto mv = m.multiply(v);
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double r = mv[i] - lambda * v[i];
        acc += r * r;
    }
    return std::sqrt(acc);
}

// Inverse iteration, optionally re-orthogonalized against `basis` (needed for
// clustered eigenvalues of the symmetric matrix).
inline std::vector<double> inverse_iteration(const TridiagonalMatrix& m, double lambda,
                                             const std::vector<const std::vector<double>*>& basis,
                                             std::uint32_t seed) {
    const std::size_t n = m.size();
    const double scale = std::max(m.norm_inf(), std::numeric_limits<double>::min());
    const double eps = std::numeric_limits<double>::epsilon();
    const double pivot_floor = eps * scale;
    const double tolerance = 1e3 * eps * scale;

    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v) x = dist(rng);
    detail::scale_to_unit(v);

    double residual = std::numeric_limits<double>::infinity();
    for (int iteration = 0; iteration < 8; ++iteration) {
        v = solve_shifted(m, lambda, std::move(v), pivot_floor);
        for (const auto* q : basis) {
            const double overlap = std::inner_product(v.begin(), v.end(), q->begin(), 0.0);
            for (std::size_t i = 0; i < n; ++i) v[i] -= overlap * (*q)[i];
        }
        detail::scale_to_unit(v);
        residual = residual_norm(m, lambda, v);
        if (iteration >= 1 && residual <= tolerance) {
            return v;
        }
    }
    if (residual > 1e6 * tolerance) {
        std::ostringstream msg;
        msg << "inverse iteration did not converge for lambda = " << lambda
            << " (residual " << residual << ")";
        throw ConvergenceError(msg.str());
    }
    return v;
}

} // namespace detail

/// Eigenvalue with 0-based ascending index k of a symmetric tridiagonal, by bisection.
inline double bisect_eigenvalue(const std::vector<double>& diag, const std::vector<double>& off_sq,
                                std::size_t k, double lower, double upper, double pivot_floor) {
    for (int iteration = 0; iteration < 256; ++iteration) {
        const double mid = 0.5 * (lower + upper);
        if (mid <= lower || mid >= upper) {
            break;
        }
        if (upper - lower <= 2.0 * std::numeric_limits<double>::epsilon() *
                                 std::max(std::abs(lower), std::abs(upper))) {
            break;
        }
        if (sturm_count(diag, off_sq, mid, pivot_floor) > k) {
            upper = mid;
        } else {
            lower = mid;
        }
    }
    return 0.5 * (lower + upper);
}

/// Eigenvalues of a real upper Hessenberg matrix (row-major, n x n), by the
/// Francis double-shift QR iteration. A subdiagonal entry is deflated when
/// |h(l, l-1)| <= deflation * (|h(l-1, l-1)| + |h(l, l)|).
inline std::vector<std::complex<double>> hessenberg_qr_eigenvalues(std::vector<double> a, std::size_t n,
                                                                   double deflation = 1e-12,
                                                                   int max_iterations = 60) {
    auto at = [&a, n](long i, long j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
    std::vector<std::complex<double>> w(n);
    double anorm = 0.0;
    for (long i = 0; i < static_cast<long>(n); ++i) {
        for (long j = std::max(i - 1, 0L); j < static_cast<long>(n); ++j) {
            anorm += std::abs(at(i, j));
        }
    }
    const double eps = std::numeric_limits<double>::epsilon();
    long nn = static_cast<long>(n) - 1;
    double t = 0.0;
    while (nn >= 0) {
        int its = 0;
        long l = 0;
        do {
            for (l = nn; l > 0; --l) {
                double s = std::abs(at(l - 1, l - 1)) + std::abs(at(l, l));
                if (s == 0.0) s = anorm;
                if (std::abs(at(l, l - 1)) <= deflation * s) {
                    at(l, l - 1) = 0.0;
                    break;
                }
            }
            double x = at(nn, nn);
            if (l == nn) {
                w[nn--] = x + t;
            } else {
                double y = at(nn - 1, nn - 1);
                double ww = at(nn, nn - 1) * at(nn - 1, nn);
                if (l == nn - 1) {
                    const double p = 0.5 * (y - x);
                    const double q = p * p + ww;
                    double z = std::sqrt(std::abs(q));
                    x += t;
                    if (q >= 0.0) {
                        z = p + std::copysign(z, p);
                        w[nn - 1] = w[nn] = x + z;
                        if (z != 0.0) w[nn] = x - ww / z;
                    } else {
                        w[nn] = {x + p, -z};
                        w[nn - 1] = std::conj(w[nn]);
                    }
                    nn -= 2;
                } else {
                    if (its == max_iterations) {
                        std::ostringstream msg;
                        msg << "hessenberg QR: no convergence after " << its
                            << " iterations (subdiagonal residual " << std::abs(at(nn, nn - 1)) << ")";
                        throw ConvergenceError(msg.str());
                    }
                    if (its == 10 || its == 20) {
                        // exceptional shift
                        t += x;
                        for (long i = 0; i <= nn; ++i) at(i, i) -= x;
                        const double s = std::abs(at(nn, nn - 1)) + std::abs(at(nn - 1, nn - 2));
                        y = x = 0.75 * s;
                        ww = -0.4375 * s * s;
                    }
                    ++its;
                    long m = nn - 2;
                    double p = 0.0, q = 0.0, r = 0.0, z = 0.0;
                    for (; m >= l; --m) {
                        z = at(m, m);
                        r = x - z;
                        double s = y - z;
                        p = (r * s - ww) / at(m + 1, m) + at(m, m + 1);
                        q = at(m + 1, m + 1) - z - r - s;
                        r = at(m + 2, m + 1);
                        s = std::abs(p) + std::abs(q) + std::abs(r);
                        p /= s;
                        q /= s;
                        r /= s;
                        if (m == l) break;
                        const double u = std::abs(at(m, m - 1)) * (std::abs(q) + std::abs(r));
                        const double v =
                            std::abs(p) * (std::abs(at(m - 1, m - 1)) + std::abs(z) + std::abs(at(m + 1, m + 1)));
                        if (u <= eps * v) break;
                    }
                    for (long i = m; i < nn - 1; ++i) {
                        at(i + 2, i) = 0.0;
                        if (i != m) at(i + 2, i - 1) = 0.0;
                    }
                    for (long k = m; k < nn; ++k) {
                        if (k != m) {
                            p = at(k, k - 1);
                            q = at(k + 1, k - 1);
                            r = 0.0;
                            if (k + 1 != nn) r = at(k + 2, k - 1);
                            if ((x = std::abs(p) + std::abs(q) + std::abs(r)) != 0.0) {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        const double s = std::copysign(std::sqrt(p * p + q * q + r * r), p);
                        if (s != 0.0) {
                            if (k == m) {
                                if (l != m) at(k, k - 1) = -at(k, k - 1);
                            } else {
                                at(k, k - 1) = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            z = r / s;
                            q /= p;
                            r /= p;
                            for (long j = k; j <= nn; ++j) {
                                p = at(k, j) + q * at(k + 1, j);
                                if (k + 1 != nn) {
                                    p += r * at(k + 2, j);
                                    at(k + 2, j) -= p * z;
                                }
                                at(k + 1, j) -= p * y;
                                at(k, j) -= p * x;
                            }
                            const long mmin = nn < k + 3 ? nn : k + 3;
                            for (long i = l; i <= mmin; ++i) {
                                p = x * at(i, k) + y * at(i, k + 1);
                                if (k + 1 != nn) {
                                    p += z * at(i, k + 2);
                                    at(i, k + 2) -= p * r;
                                }
                                at(i, k + 1) -= p * q;
                                at(i, k) -= p;
                            }
                        }
                    }
                }
            }
        } while (l + 1 < nn);
    }
    return w;
}

namespace detail {

inline std::string spectrum_shortfall(std::size_t requested, std::size_t available, double threshold) {
    std::ostringstream msg;
    msg << "requested " << requested << " eigenvalues above " << threshold << " but only "
        << available << " exist";
    return msg.str();
}

inline EigenPairs symmetric_path(const TridiagonalMatrix& m, std::size_t count, double threshold) {
    const std::size_t n = m.size();
    const TridiagonalMatrix s = symmetrized(m);
    std::vector<double> off_sq(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) off_sq[i] = s.sub[i] * s.sub[i];

    // Gershgorin enclosure
    double lower = std::numeric_limits<double>::infinity();
    double upper = -lower;
    for (std::size_t i = 0; i < n; ++i) {
        double radius = 0.0;
        if (i > 0) radius += std::abs(s.sub[i - 1]);
        if (i + 1 < n) radius += std::abs(s.sub[i]);
        lower = std::min(lower, s.diag[i] - radius);
        upper = std::max(upper, s.diag[i] + radius);
    }
    const double scale = std::max(std::abs(lower), std::abs(upper));
    const double pivot_floor = std::numeric_limits<double>::epsilon() * std::max(scale, 1e-300);
    lower -= 2.0 * pivot_floor;
    upper += 2.0 * pivot_floor;

    // eigenvalues <= threshold
    const std::size_t skip = sturm_count(s.diag, off_sq, std::nextafter(threshold, upper), pivot_floor);
    const std::size_t available = n - skip;
    if (count > available) {
        throw SpectrumError(spectrum_shortfall(count, available, threshold), static_cast<int>(available));
    }

    EigenPairs out;
    out.path = EigenPath::SymmetrizedBisection;
    out.values.reserve(count);
    for (std::size_t j = 0; j < count; ++j) {
        out.values.push_back(bisect_eigenvalue(s.diag, off_sq, skip + j, std::max(lower, threshold), upper,
                                               pivot_floor));
    }

    const auto d = symmetrizing_scales(m);
    const double cluster = 1e-3 * s.norm_inf();
    std::vector<std::vector<double>> symmetric_vectors;
    symmetric_vectors.reserve(count);
    for (std::size_t j = 0; j < count; ++j) {
        std::vector<const std::vector<double>*> basis;
        for (std::size_t i = 0; i < j; ++i) {
            if (std::abs(out.values[j] - out.values[i]) < cluster) {
                basis.push_back(&symmetric_vectors[i]);
            }
        }
        symmetric_vectors.push_back(
            detail::inverse_iteration(s, out.values[j], basis, 0x5eed0000u + static_cast<std::uint32_t>(j)));
    }
    for (auto& y : symmetric_vectors) {
        std::vector<double> psi(n);
        for (std::size_t i = 0; i < n; ++i) psi[i] = y[i] / d[i];
        detail::scale_to_unit(psi);
        out.vectors.push_back(std::move(psi));
    }
    return out;
}

inline EigenPairs qr_path(const TridiagonalMatrix& m, std::size_t count, double threshold) {
    const std::size_t n = m.size();
    if (n > max_dense_qr_size) {
        throw ConvergenceError("operator is not symmetrizable and too large (" + std::to_string(n) +
                               " rows) for the dense Hessenberg QR fallback");
    }
    std::vector<double> dense(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        dense[i * n + i] = m.diag[i];
        if (i + 1 < n) {
            dense[i * n + i + 1] = m.super[i];
            dense[(i + 1) * n + i] = m.sub[i];
        }
    }
    auto eigenvalues = hessenberg_qr_eigenvalues(std::move(dense), n);
    std::sort(eigenvalues.begin(), eigenvalues.end(),
              [](const auto& a, const auto& b) { return a.real() < b.real(); });

    EigenPairs out;
    out.path = EigenPath::HessenbergQR;
    std::vector<std::complex<double>> kept;
    for (const auto& z : eigenvalues) {
        if (z.real() > threshold) kept.push_back(z);
    }
    if (count > kept.size()) {
        throw SpectrumError(spectrum_shortfall(count, kept.size(), threshold), static_cast<int>(kept.size()));
    }
    for (std::size_t j = 0; j < count; ++j) {
        const double residue = std::abs(kept[j].imag()) / std::abs(kept[j]);
        if (residue > 1e-8) {
            std::ostringstream msg;
            msg << "eigenvalue " << kept[j].real() << (kept[j].imag() < 0 ? " - " : " + ")
                << std::abs(kept[j].imag()) << "i is not real (relative residue " << residue << ")";
            throw ConvergenceError(msg.str());
        }
        out.max_imag_residue = std::max(out.max_imag_residue, residue);
        out.values.push_back(kept[j].real());
        out.vectors.push_back(detail::inverse_iteration(m, kept[j].real(), {},
                                                        0x5eed0000u + static_cast<std::uint32_t>(j)));
    }
    return out;
}

} // namespace detail

/// The `count` smallest eigenvalues strictly above `threshold`, with unit eigenvectors.
inline EigenPairs smallest_eigenpairs_above(const TridiagonalMatrix& m, std::size_t count, double threshold) {
    m.validate();
    if (count == 0) {
        throw ConfigError("eigenpair count must be at least 1");
    }
    if (m.size() == 1) {
        if (m.diag[0] <= threshold) {
            throw SpectrumError(detail::spectrum_shortfall(count, 0, threshold), 0);
        }
        if (count > 1) {
            throw SpectrumError(detail::spectrum_shortfall(count, 1, threshold), 1);
        }
        return {{m.diag[0]}, {{1.0}}, EigenPath::SymmetrizedBisection, 0.0};
    }
    return m.symmetrizable() ? detail::symmetric_path(m, count, threshold)
                             : detail::qr_path(m, count, threshold);
}

} // namespace curvedirac
