#include "rmt/svd.hpp"

#include <algorithm>
#include <cmath>

#include "rmt/errors.hpp"

namespace rmt {

namespace {

// Implicit-shift QR on the bidiagonal form, in the classic LINPACK/JAMA
// organization: four cases per pass (deflate, split, QR step, converge).
// Expects rows >= cols.
SvdResult svd_tall(const DenseMatrix& input, bool want_vectors) {
    const int m = static_cast<int>(input.rows());
    const int n = static_cast<int>(input.cols());

    DenseMatrix a = input;
    std::vector<double> s(n, 0.0), e(n, 0.0), work(m, 0.0);
    DenseMatrix u(m, n, 0.0), v(n, n, 0.0);

    // Bidiagonalize, storing the diagonal in s and superdiagonal in e.
    const int nct = std::min(m - 1, n);
    const int nrt = std::max(0, std::min(n - 2, m));
    for (int k = 0; k < std::max(nct, nrt); ++k) {
        if (k < nct) {
            s[k] = 0.0;
            for (int i = k; i < m; ++i) s[k] = std::hypot(s[k], a(i, k));
            if (s[k] != 0.0) {
                if (a(k, k) < 0.0) s[k] = -s[k];
                for (int i = k; i < m; ++i) a(i, k) /= s[k];
                a(k, k) += 1.0;
            }
            s[k] = -s[k];
        }
        for (int j = k + 1; j < n; ++j) {
            if (k < nct && s[k] != 0.0) {
                double t = 0.0;
                for (int i = k; i < m; ++i) t += a(i, k) * a(i, j);
                t = -t / a(k, k);
                for (int i = k; i < m; ++i) a(i, j) += t * a(i, k);
            }
            e[j] = a(k, j);
        }
        if (want_vectors && k < nct) {
            for (int i = k; i < m; ++i) u(i, k) = a(i, k);
        }
        if (k < nrt) {
            e[k] = 0.0;
            for (int i = k + 1; i < n; ++i) e[k] = std::hypot(e[k], e[i]);
            if (e[k] != 0.0) {
                if (e[k + 1] < 0.0) e[k] = -e[k];
                for (int i = k + 1; i < n; ++i) e[i] /= e[k];
                e[k + 1] += 1.0;
            }
            e[k] = -e[k];
            if (k + 1 < m && e[k] != 0.0) {
                for (int i = k + 1; i < m; ++i) work[i] = 0.0;
                for (int j = k + 1; j < n; ++j)
                    for (int i = k + 1; i < m; ++i) work[i] += e[j] * a(i, j);
                for (int j = k + 1; j < n; ++j) {
                    const double t = -e[j] / e[k + 1];
                    for (int i = k + 1; i < m; ++i) a(i, j) += t * work[i];
                }
            }
            if (want_vectors) {
                for (int i = k + 1; i < n; ++i) v(i, k) = e[i];
            }
        }
    }

    int p = std::min(n, m + 1);
    if (nct < n) s[nct] = a(nct, nct);
    if (m < p) s[p - 1] = 0.0;
    if (nrt + 1 < p) e[nrt] = a(nrt, p - 1);
    e[p - 1] = 0.0;

    if (want_vectors) {
        for (int j = nct; j < n; ++j) {
            for (int i = 0; i < m; ++i) u(i, j) = 0.0;
            u(j, j) = 1.0;
        }
        for (int k = nct - 1; k >= 0; --k) {
            if (s[k] != 0.0) {
                for (int j = k + 1; j < n; ++j) {
                    double t = 0.0;
                    for (int i = k; i < m; ++i) t += u(i, k) * u(i, j);
                    t = -t / u(k, k);
                    for (int i = k; i < m; ++i) u(i, j) += t * u(i, k);
                }
                for (int i = k; i < m; ++i) u(i, k) = -u(i, k);
                u(k, k) = 1.0 + u(k, k);
                for (int i = 0; i < k - 1; ++i) u(i, k) = 0.0;
            } else {
                for (int i = 0; i < m; ++i) u(i, k) = 0.0;
                u(k, k) = 1.0;
            }
        }
        for (int k = n - 1; k >= 0; --k) {
            if (k < nrt && e[k] != 0.0) {
                for (int j = k + 1; j < n; ++j) {
                    double t = 0.0;
                    for (int i = k + 1; i < n; ++i) t += v(i, k) * v(i, j);
                    t = -t / v(k + 1, k);
                    for (int i = k + 1; i < n; ++i) v(i, j) += t * v(i, k);
                }
            }
            for (int i = 0; i < n; ++i) v(i, k) = 0.0;
            v(k, k) = 1.0;
        }
    }

    // Main iteration.
    const int pp_init = p - 1;
    int iter = 0;
    int total_iter = 0;
    const double eps = std::ldexp(1.0, -52);
    const double tiny = std::ldexp(1.0, -966);
    while (p > 0) {
        if (iter > 500) throw NumericalError("bidiagonal QR iteration did not converge");
        int k, kase;
        for (k = p - 2; k >= -1; --k) {
            if (k == -1) break;
            if (std::abs(e[k]) <= tiny + eps * (std::abs(s[k]) + std::abs(s[k + 1]))) {
                e[k] = 0.0;
                break;
            }
        }
        if (k == p - 2) {
            kase = 4;
        } else {
            int ks;
            for (ks = p - 1; ks >= k; --ks) {
                if (ks == k) break;
                const double t = (ks != p ? std::abs(e[ks]) : 0.0) +
                                 (ks != k + 1 ? std::abs(e[ks - 1]) : 0.0);
                if (std::abs(s[ks]) <= tiny + eps * t) {
                    s[ks] = 0.0;
                    break;
                }
            }
            if (ks == k) {
                kase = 3;
            } else if (ks == p - 1) {
                kase = 1;
            } else {
                kase = 2;
                k = ks;
            }
        }
        ++k;

        switch (kase) {
            case 1: { // zero out e[p-2] against a negligible s[p-1]
                double f = e[p - 2];
                e[p - 2] = 0.0;
                for (int j = p - 2; j >= k; --j) {
                    double t = std::hypot(s[j], f);
                    const double cs = s[j] / t;
                    const double sn = f / t;
                    s[j] = t;
                    if (j != k) {
                        f = -sn * e[j - 1];
                        e[j - 1] = cs * e[j - 1];
                    }
                    if (want_vectors) {
                        for (int i = 0; i < n; ++i) {
                            t = cs * v(i, j) + sn * v(i, p - 1);
                            v(i, p - 1) = -sn * v(i, j) + cs * v(i, p - 1);
                            v(i, j) = t;
                        }
                    }
                }
                break;
            }
            case 2: { // split: zero out e[k-1] against a negligible s[k-1]
                double f = e[k - 1];
                e[k - 1] = 0.0;
                for (int j = k; j < p; ++j) {
                    double t = std::hypot(s[j], f);
                    const double cs = s[j] / t;
                    const double sn = f / t;
                    s[j] = t;
                    f = -sn * e[j];
                    e[j] = cs * e[j];
                    if (want_vectors) {
                        for (int i = 0; i < m; ++i) {
                            t = cs * u(i, j) + sn * u(i, k - 1);
                            u(i, k - 1) = -sn * u(i, j) + cs * u(i, k - 1);
                            u(i, j) = t;
                        }
                    }
                }
                break;
            }
            case 3: { // one implicit-shift QR step on the [k, p) block
                const double scale = std::max({std::abs(s[p - 1]), std::abs(s[p - 2]),
                                               std::abs(e[p - 2]), std::abs(s[k]),
                                               std::abs(e[k])});
                const double sp = s[p - 1] / scale;
                const double spm1 = s[p - 2] / scale;
                const double epm1 = e[p - 2] / scale;
                const double sk = s[k] / scale;
                const double ek = e[k] / scale;
                const double b = ((spm1 + sp) * (spm1 - sp) + epm1 * epm1) / 2.0;
                const double c = (sp * epm1) * (sp * epm1);
                double shift = 0.0;
                if (b != 0.0 || c != 0.0) {
                    shift = std::sqrt(b * b + c);
                    if (b < 0.0) shift = -shift;
                    shift = c / (b + shift);
                }
                double f = (sk + sp) * (sk - sp) + shift;
                double g = sk * ek;

                for (int j = k; j < p - 1; ++j) {
                    double t = std::hypot(f, g);
                    double cs = f / t;
                    double sn = g / t;
                    if (j != k) e[j - 1] = t;
                    f = cs * s[j] + sn * e[j];
                    e[j] = cs * e[j] - sn * s[j];
                    g = sn * s[j + 1];
                    s[j + 1] = cs * s[j + 1];
                    if (want_vectors) {
                        for (int i = 0; i < n; ++i) {
                            t = cs * v(i, j) + sn * v(i, j + 1);
                            v(i, j + 1) = -sn * v(i, j) + cs * v(i, j + 1);
                            v(i, j) = t;
                        }
                    }
                    t = std::hypot(f, g);
                    cs = f / t;
                    sn = g / t;
                    s[j] = t;
                    f = cs * e[j] + sn * s[j + 1];
                    s[j + 1] = -sn * e[j] + cs * s[j + 1];
                    g = sn * e[j + 1];
                    e[j + 1] = cs * e[j + 1];
                    if (want_vectors && j < m - 1) {
                        for (int i = 0; i < m; ++i) {
                            t = cs * u(i, j) + sn * u(i, j + 1);
                            u(i, j + 1) = -sn * u(i, j) + cs * u(i, j + 1);
                            u(i, j) = t;
                        }
                    }
                }
                e[p - 2] = f;
                ++iter;
                ++total_iter;
                break;
            }
            case 4: { // convergence; fix sign and restore order
                if (s[k] <= 0.0) {
                    s[k] = (s[k] < 0.0 ? -s[k] : 0.0);
                    if (want_vectors)
                        for (int i = 0; i < n; ++i) v(i, k) = -v(i, k);
                }
                while (k < pp_init) {
                    if (s[k] >= s[k + 1]) break;
                    std::swap(s[k], s[k + 1]);
                    if (want_vectors && k < n - 1)
                        for (int i = 0; i < n; ++i) std::swap(v(i, k), v(i, k + 1));
                    if (want_vectors && k < m - 1)
                        for (int i = 0; i < m; ++i) std::swap(u(i, k), u(i, k + 1));
                    ++k;
                }
                iter = 0;
                --p;
                break;
            }
        }
    }

    SvdResult res;
    res.singular_values = std::move(s);
    res.iterations = total_iter;
    if (want_vectors) {
        res.u = std::move(u);
        res.v = std::move(v);
        res.has_vectors = true;
    }
    return res;
}

} // namespace

SvdResult golub_kahan_svd(const DenseMatrix& a, bool want_vectors) {
    if (a.rows() == 0 || a.cols() == 0) throw ValidationError("svd of an empty matrix");
    if (!a.all_finite()) throw ValidationError("svd: matrix has non-finite entries");
    if (a.rows() >= a.cols()) return svd_tall(a, want_vectors);
    SvdResult res = svd_tall(a.transposed(), want_vectors);
    std::swap(res.u, res.v);
    return res;
}

std::vector<double> jacobi_singular_values(const DenseMatrix& a) {
    if (a.rows() == 0 || a.cols() == 0) throw ValidationError("svd of an empty matrix");
    if (!a.all_finite()) throw ValidationError("svd: matrix has non-finite entries");

    // Work on columns; transpose so there are at most `rows` of them.
    DenseMatrix w = a.rows() >= a.cols() ? a : a.transposed();
    const std::size_t m = w.rows(), n = w.cols();

    constexpr double kTol = 1e-15;
    constexpr int kMaxSweeps = 100;
    const double fro = w.frobenius_norm();
    // Columns at the numerical noise floor carry no usable direction and
    // are treated as already orthogonal.
    const double column_floor = 1e-15 * fro;
    bool converged = false;
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        converged = true;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    alpha += w(i, p) * w(i, p);
                    beta += w(i, q) * w(i, q);
                    gamma += w(i, p) * w(i, q);
                }
                if (std::sqrt(alpha) <= column_floor || std::sqrt(beta) <= column_floor)
                    continue;
                if (std::abs(gamma) <= kTol * std::sqrt(alpha * beta) || gamma == 0.0) continue;
                converged = false;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < m; ++i) {
                    const double wp = w(i, p), wq = w(i, q);
                    w(i, p) = c * wp - s * wq;
                    w(i, q) = s * wp + c * wq;
                }
            }
        }
    }
    if (!converged) throw NumericalError("one-sided Jacobi did not converge");

    std::vector<double> sv(n);
    for (std::size_t j = 0; j < n; ++j) {
        double nn = 0.0;
        for (std::size_t i = 0; i < m; ++i) nn += w(i, j) * w(i, j);
        sv[j] = std::sqrt(nn);
    }
    std::sort(sv.begin(), sv.end(), std::greater<>());
    return sv;
}

HouseholderQr::HouseholderQr(const DenseMatrix& a) : qr_(a), rdiag_(a.cols(), 0.0) {
    const std::size_t m = qr_.rows(), n = qr_.cols();
    if (m < n) throw ValidationError("HouseholderQr: need rows >= cols");
    for (std::size_t k = 0; k < n; ++k) {
        double nrm = 0.0;
        for (std::size_t i = k; i < m; ++i) nrm = std::hypot(nrm, qr_(i, k));
        if (nrm != 0.0) {
            if (qr_(k, k) < 0.0) nrm = -nrm;
            for (std::size_t i = k; i < m; ++i) qr_(i, k) /= nrm;
            qr_(k, k) += 1.0;
            for (std::size_t j = k + 1; j < n; ++j) {
                double sum = 0.0;
                for (std::size_t i = k; i < m; ++i) sum += qr_(i, k) * qr_(i, j);
                sum = -sum / qr_(k, k);
                for (std::size_t i = k; i < m; ++i) qr_(i, j) += sum * qr_(i, k);
            }
        }
        rdiag_[k] = -nrm;
    }
}

double HouseholderQr::min_abs_r_diag() const {
    double v = std::abs(rdiag_[0]);
    for (double d : rdiag_) v = std::min(v, std::abs(d));
    return v;
}

double HouseholderQr::max_abs_r_diag() const {
    double v = std::abs(rdiag_[0]);
    for (double d : rdiag_) v = std::max(v, std::abs(d));
    return v;
}

std::vector<double> HouseholderQr::apply_qt(std::span<const double> b) const {
    const std::size_t m = qr_.rows(), n = qr_.cols();
    if (b.size() != m) throw ValidationError("apply_qt: dimension mismatch");
    std::vector<double> y(b.begin(), b.end());
    for (std::size_t k = 0; k < n; ++k) {
        if (qr_(k, k) == 0.0) continue; // skipped reflector
        double sum = 0.0;
        for (std::size_t i = k; i < m; ++i) sum += qr_(i, k) * y[i];
        sum = -sum / qr_(k, k);
        for (std::size_t i = k; i < m; ++i) y[i] += sum * qr_(i, k);
    }
    return y;
}

std::vector<double> HouseholderQr::apply_q(std::span<const double> b) const {
    const std::size_t m = qr_.rows(), n = qr_.cols();
    if (b.size() != m) throw ValidationError("apply_q: dimension mismatch");
    std::vector<double> y(b.begin(), b.end());
    for (std::size_t k = n; k-- > 0;) {
        if (qr_(k, k) == 0.0) continue;
        double sum = 0.0;
        for (std::size_t i = k; i < m; ++i) sum += qr_(i, k) * y[i];
        sum = -sum / qr_(k, k);
        for (std::size_t i = k; i < m; ++i) y[i] += sum * qr_(i, k);
    }
    return y;
}

std::vector<double> HouseholderQr::solve_r(std::span<const double> b) const {
    const std::size_t n = qr_.cols();
    if (b.size() != n) throw ValidationError("solve_r: dimension mismatch");
    std::vector<double> x(b.begin(), b.end());
    for (std::size_t k = n; k-- > 0;) {
        for (std::size_t j = k + 1; j < n; ++j) x[k] -= qr_(k, j) * x[j];
        x[k] /= rdiag_[k];
    }
    return x;
}

std::vector<double> HouseholderQr::solve_rt(std::span<const double> b) const {
    const std::size_t n = qr_.cols();
    if (b.size() != n) throw ValidationError("solve_rt: dimension mismatch");
    std::vector<double> x(b.begin(), b.end());
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < k; ++j) x[k] -= qr_(j, k) * x[j];
        x[k] /= rdiag_[k];
    }
    return x;
}

std::vector<double> HouseholderQr::apply_r(std::span<const double> x) const {
    const std::size_t n = qr_.cols();
    if (x.size() != n) throw ValidationError("apply_r: dimension mismatch");
    std::vector<double> y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = rdiag_[i] * x[i];
        for (std::size_t j = i + 1; j < n; ++j) s += qr_(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

std::vector<double> HouseholderQr::apply_rt(std::span<const double> x) const {
    const std::size_t n = qr_.cols();
    if (x.size() != n) throw ValidationError("apply_rt: dimension mismatch");
    std::vector<double> y(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double s = rdiag_[j] * x[j];
        for (std::size_t i = 0; i < j; ++i) s += qr_(i, j) * x[i];
        y[j] = s;
    }
    return y;
}

} // namespace rmt
