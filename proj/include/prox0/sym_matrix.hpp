#pragma once

#include <cstddef>
#include <vector>

namespace prox0 {

// Dense real symmetric matrix of small order (<= 16), stored row-major.
// The SPD backend works exclusively through these.
struct SymMatrix {
    int n = 0;
    std::vector<double> a;  // n*n, row-major, kept symmetric

    SymMatrix() = default;
    explicit SymMatrix(int order) : n(order), a(static_cast<size_t>(order) * order, 0.0) {}

    double& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    double at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }

    static SymMatrix identity(int order);
    static SymMatrix scaled_identity(int order, double s);

    void symmetrize();           // a <- (a + a^T)/2
    double max_asymmetry() const;

    bool operator==(const SymMatrix& o) const { return n == o.n && a == o.a; }
};

struct EigenDecomposition {
    std::vector<double> values;   // ascending
    std::vector<double> vectors;  // column k = eigenvector for values[k], row-major n*n
    int n = 0;
};

// Cyclic Jacobi rotations until every off-diagonal entry is below the
// threshold. Exact in one sweep for n = 2.
EigenDecomposition eig_sym(const SymMatrix& m, double off_threshold = 1e-13);

SymMatrix sym_add(const SymMatrix& x, const SymMatrix& y);
SymMatrix sym_sub(const SymMatrix& x, const SymMatrix& y);
SymMatrix sym_scale(const SymMatrix& x, double s);
double sym_frobenius(const SymMatrix& x);
double sym_dot(const SymMatrix& x, const SymMatrix& y);  // trace(x^T y)

// General (non-symmetric) product helpers on row-major buffers of order n.
std::vector<double> mat_mul(const std::vector<double>& x, const std::vector<double>& y, int n);

// Congruence g^T m g for a general square g (row-major).
SymMatrix sym_congruence(const SymMatrix& m, const std::vector<double>& g);

// Spectral functions. All of them throw ValidationError if the argument is
// not within tolerance of the required class (symmetric / positive definite).
bool is_spd(const SymMatrix& m, double sym_tol = 1e-12);
// Positive-definiteness via LDL factorization; no eigendecomposition.
bool spd_ldl_check(const SymMatrix& m);
SymMatrix spd_log(const SymMatrix& m);
SymMatrix spd_exp(const SymMatrix& s);   // argument symmetric, result SPD
SymMatrix spd_sqrt(const SymMatrix& m);
SymMatrix spd_inv_sqrt(const SymMatrix& m);
SymMatrix spd_pow(const SymMatrix& m, double t);

// Affine-invariant primitives used by the SPD space backend.
double spd_distance(const SymMatrix& x, const SymMatrix& y);
SymMatrix spd_geodesic(const SymMatrix& x, const SymMatrix& y, double t);
// Tangent vector at x pointing to y, with |log_x(y)| = d(x, y).
SymMatrix spd_log_map(const SymMatrix& x, const SymMatrix& y);
SymMatrix spd_exp_map(const SymMatrix& x, const SymMatrix& v);
// Norm of a tangent vector v at base point x.
double spd_tangent_norm(const SymMatrix& x, const SymMatrix& v);

}  // namespace prox0
