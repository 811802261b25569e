#include "prox0/sym_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "prox0/errors.hpp"

namespace prox0 {

SymMatrix SymMatrix::identity(int order) {
    SymMatrix m(order);
    for (int i = 0; i < order; ++i) m.at(i, i) = 1.0;
    return m;
}

SymMatrix SymMatrix::scaled_identity(int order, double s) {
    SymMatrix m(order);
    for (int i = 0; i < order; ++i) m.at(i, i) = s;
    return m;
}

void SymMatrix::symmetrize() {
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double v = 0.5 * (at(i, j) + at(j, i));
            at(i, j) = v;
            at(j, i) = v;
        }
}

double SymMatrix::max_asymmetry() const {
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            worst = std::max(worst, std::abs(at(i, j) - at(j, i)));
    return worst;
}

namespace {

double off_diagonal_norm(const SymMatrix& m) {
    double s = 0.0;
    for (int i = 0; i < m.n; ++i)
        for (int j = 0; j < m.n; ++j)
            if (i != j) s = std::max(s, std::abs(m.at(i, j)));
    return s;
}

}  // namespace

EigenDecomposition eig_sym(const SymMatrix& input, double off_threshold) {
    if (input.n < 1) throw ValidationError("eig_sym: empty matrix");
    if (input.n > 16) throw ValidationError("eig_sym: order above 16 not supported");
    if (input.max_asymmetry() > 1e-12)
        throw ValidationError("eig_sym: matrix is not symmetric within 1e-12");

    const int n = input.n;
    SymMatrix a = input;
    a.symmetrize();
    std::vector<double> q(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) q[static_cast<size_t>(i) * n + i] = 1.0;

    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps && off_diagonal_norm(a) > off_threshold; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int r = p + 1; r < n; ++r) {
                const double apr = a.at(p, r);
                if (std::abs(apr) <= off_threshold) continue;
                const double app = a.at(p, p);
                const double arr = a.at(r, r);
                const double theta = 0.5 * (arr - app) / apr;
                // tangent of the rotation angle, smaller root for stability
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (int k = 0; k < n; ++k) {
                    const double akp = a.at(k, p);
                    const double akr = a.at(k, r);
                    a.at(k, p) = c * akp - s * akr;
                    a.at(k, r) = s * akp + c * akr;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a.at(p, k);
                    const double ark = a.at(r, k);
                    a.at(p, k) = c * apk - s * ark;
                    a.at(r, k) = s * apk + c * ark;
                }
                for (int k = 0; k < n; ++k) {
                    const double qkp = q[static_cast<size_t>(k) * n + p];
                    const double qkr = q[static_cast<size_t>(k) * n + r];
                    q[static_cast<size_t>(k) * n + p] = c * qkp - s * qkr;
                    q[static_cast<size_t>(k) * n + r] = s * qkp + c * qkr;
                }
            }
        }
    }

    EigenDecomposition d;
    d.n = n;
    d.values.resize(n);
    for (int i = 0; i < n; ++i) d.values[i] = a.at(i, i);

    // sort ascending, permute eigenvector columns accordingly
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return d.values[x] < d.values[y]; });
    std::vector<double> vals(n);
    std::vector<double> vecs(static_cast<size_t>(n) * n);
    for (int k = 0; k < n; ++k) {
        vals[k] = d.values[order[k]];
        for (int i = 0; i < n; ++i)
            vecs[static_cast<size_t>(i) * n + k] = q[static_cast<size_t>(i) * n + order[k]];
    }
    d.values = std::move(vals);
    d.vectors = std::move(vecs);
    return d;
}

SymMatrix sym_add(const SymMatrix& x, const SymMatrix& y) {
    SymMatrix r = x;
    for (size_t i = 0; i < r.a.size(); ++i) r.a[i] += y.a[i];
    return r;
}

SymMatrix sym_sub(const SymMatrix& x, const SymMatrix& y) {
    SymMatrix r = x;
    for (size_t i = 0; i < r.a.size(); ++i) r.a[i] -= y.a[i];
    return r;
}

SymMatrix sym_scale(const SymMatrix& x, double s) {
    SymMatrix r = x;
    for (double& v : r.a) v *= s;
    return r;
}

double sym_frobenius(const SymMatrix& x) { return std::sqrt(sym_dot(x, x)); }

double sym_dot(const SymMatrix& x, const SymMatrix& y) {
    double s = 0.0;
    for (size_t i = 0; i < x.a.size(); ++i) s += x.a[i] * y.a[i];
    return s;
}

std::vector<double> mat_mul(const std::vector<double>& x, const std::vector<double>& y, int n) {
    std::vector<double> r(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const double xik = x[static_cast<size_t>(i) * n + k];
            if (xik == 0.0) continue;
            for (int j = 0; j < n; ++j)
                r[static_cast<size_t>(i) * n + j] += xik * y[static_cast<size_t>(k) * n + j];
        }
    return r;
}

SymMatrix sym_congruence(const SymMatrix& m, const std::vector<double>& g) {
    const int n = m.n;
    std::vector<double> gt(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            gt[static_cast<size_t>(i) * n + j] = g[static_cast<size_t>(j) * n + i];
    auto mg = mat_mul(m.a, g, n);
    auto r = mat_mul(gt, mg, n);
    SymMatrix out(n);
    out.a = std::move(r);
    out.symmetrize();
    return out;
}

bool is_spd(const SymMatrix& m, double sym_tol) {
    if (m.n < 1 || m.a.size() != static_cast<size_t>(m.n) * m.n) return false;
    if (m.max_asymmetry() > sym_tol) return false;
    const auto d = eig_sym(m);
    return d.values.front() > 0.0;
}

bool spd_ldl_check(const SymMatrix& m) {
    const int n = m.n;
    if (n < 1 || m.a.size() != static_cast<size_t>(n) * n) return false;
    std::vector<double> l(static_cast<size_t>(n) * n, 0.0);
    std::vector<double> d(n, 0.0);
    for (int j = 0; j < n; ++j) {
        double dj = m.at(j, j);
        for (int k = 0; k < j; ++k) dj -= l[static_cast<size_t>(j) * n + k] * l[static_cast<size_t>(j) * n + k] * d[k];
        if (!(dj > 0.0) || !std::isfinite(dj)) return false;
        d[j] = dj;
        for (int i = j + 1; i < n; ++i) {
            double v = m.at(i, j);
            for (int k = 0; k < j; ++k)
                v -= l[static_cast<size_t>(i) * n + k] * l[static_cast<size_t>(j) * n + k] * d[k];
            l[static_cast<size_t>(i) * n + j] = v / dj;
        }
    }
    return true;
}

namespace {

// q diag(f(lambda)) q^T
SymMatrix apply_spectral(const EigenDecomposition& d, double (*f)(double)) {
    const int n = d.n;
    SymMatrix r(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k)
                s += d.vectors[static_cast<size_t>(i) * n + k] * f(d.values[k]) *
                     d.vectors[static_cast<size_t>(j) * n + k];
            r.at(i, j) = s;
            r.at(j, i) = s;
        }
    return r;
}

EigenDecomposition eig_spd_checked(const SymMatrix& m, const char* who) {
    const auto d = eig_sym(m);
    if (d.values.front() <= 0.0)
        throw ValidationError(std::string(who) + ": matrix is not positive definite");
    return d;
}

}  // namespace

SymMatrix spd_log(const SymMatrix& m) {
    return apply_spectral(eig_spd_checked(m, "spd_log"), [](double x) { return std::log(x); });
}

SymMatrix spd_exp(const SymMatrix& s) {
    return apply_spectral(eig_sym(s), [](double x) { return std::exp(x); });
}

SymMatrix spd_sqrt(const SymMatrix& m) {
    return apply_spectral(eig_spd_checked(m, "spd_sqrt"), [](double x) { return std::sqrt(x); });
}

SymMatrix spd_inv_sqrt(const SymMatrix& m) {
    return apply_spectral(eig_spd_checked(m, "spd_inv_sqrt"),
                          [](double x) { return 1.0 / std::sqrt(x); });
}

SymMatrix spd_pow(const SymMatrix& m, double t) {
    const auto d = eig_spd_checked(m, "spd_pow");
    const int n = d.n;
    SymMatrix r(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k)
                s += d.vectors[static_cast<size_t>(i) * n + k] * std::pow(d.values[k], t) *
                     d.vectors[static_cast<size_t>(j) * n + k];
            r.at(i, j) = s;
            r.at(j, i) = s;
        }
    return r;
}

namespace {

// w^{-1/2} m w^{-1/2}, symmetrized
SymMatrix whiten(const SymMatrix& m, const SymMatrix& w_inv_sqrt) {
    auto t = mat_mul(w_inv_sqrt.a, m.a, m.n);
    auto r = mat_mul(t, w_inv_sqrt.a, m.n);
    SymMatrix out(m.n);
    out.a = std::move(r);
    out.symmetrize();
    return out;
}

SymMatrix color(const SymMatrix& m, const SymMatrix& w_sqrt) {
    auto t = mat_mul(w_sqrt.a, m.a, m.n);
    auto r = mat_mul(t, w_sqrt.a, m.n);
    SymMatrix out(m.n);
    out.a = std::move(r);
    out.symmetrize();
    return out;
}

}  // namespace

double spd_distance(const SymMatrix& x, const SymMatrix& y) {
    const SymMatrix xs = spd_inv_sqrt(x);
    const SymMatrix w = whiten(y, xs);
    const auto d = eig_spd_checked(w, "spd_distance");
    double s = 0.0;
    for (double lam : d.values) {
        const double l = std::log(lam);
        s += l * l;
    }
    return std::sqrt(s);
}

SymMatrix spd_geodesic(const SymMatrix& x, const SymMatrix& y, double t) {
    if (t == 0.0) return x;
    if (t == 1.0) return y;
    const SymMatrix xh = spd_sqrt(x);
    const SymMatrix xih = spd_inv_sqrt(x);
    const SymMatrix w = spd_pow(whiten(y, xih), t);
    return color(w, xh);
}

SymMatrix spd_log_map(const SymMatrix& x, const SymMatrix& y) {
    const SymMatrix xh = spd_sqrt(x);
    const SymMatrix xih = spd_inv_sqrt(x);
    const SymMatrix w = spd_log(whiten(y, xih));
    return color(w, xh);
}

SymMatrix spd_exp_map(const SymMatrix& x, const SymMatrix& v) {
    const SymMatrix xh = spd_sqrt(x);
    const SymMatrix xih = spd_inv_sqrt(x);
    const SymMatrix w = spd_exp(whiten(v, xih));
    return color(w, xh);
}

double spd_tangent_norm(const SymMatrix& x, const SymMatrix& v) {
    return sym_frobenius(whiten(v, spd_inv_sqrt(x)));
}

}  // namespace prox0
