#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

namespace hermgeo {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

// Dense Hermitian matrix; symmetrized on construction.
class HermitianMatrix {
public:
    HermitianMatrix() = default;
    explicit HermitianMatrix(const CMatrix& a);
    static HermitianMatrix zero(int n);
    static HermitianMatrix identity(int n);
    static HermitianMatrix diagonal(const RVector& d);
    // For computed products whose rounding asymmetry is not meaningful input error.
    static HermitianMatrix hermitian_part(const CMatrix& a);

    int n() const { return static_cast<int>(m_.rows()); }
    const CMatrix& mat() const { return m_; }
    cplx operator()(int a, int b) const { return m_(a, b); }
    // max|A - A^dagger| of the raw input, before symmetrization
    double asymmetry() const { return asymmetry_; }

    HermitianMatrix operator+(const HermitianMatrix& o) const;
    HermitianMatrix operator-(const HermitianMatrix& o) const;
    HermitianMatrix operator*(double s) const;

private:
    CMatrix m_;
    double asymmetry_ = 0.0;
};

inline HermitianMatrix operator*(double s, const HermitianMatrix& h) { return h * s; }

class UnitaryMatrix {
public:
    UnitaryMatrix() = default;
    explicit UnitaryMatrix(const CMatrix& u);
    static UnitaryMatrix identity(int n);

    int n() const { return static_cast<int>(m_.rows()); }
    const CMatrix& mat() const { return m_; }
    UnitaryMatrix adjoint() const;
    UnitaryMatrix operator*(const UnitaryMatrix& o) const;

private:
    CMatrix m_;
};

struct BasisIndex {
    enum class Kind { RealOffdiag, ImagOffdiag, Diag, TracelessDiag };
    Kind kind;
    int a;  // 1-based
    int b;  // 1-based; equals a for diagonal kinds
};

std::string to_string(const BasisIndex& idx);

struct BasisElement {
    BasisIndex index;
    HermitianMatrix matrix;
};

double frobenius_inner(const HermitianMatrix& h, const HermitianMatrix& k);
double frobenius_norm(const HermitianMatrix& h);
double operator_2_norm(const HermitianMatrix& h);

// Ordering: for column b = 1..n, pairs (a,b) a<b as real then imag, then diag(b).
// The first k^2 elements span the upper-left k x k block.
std::vector<BasisElement> canonical_basis(int n);

// Generalized Gell-Mann ordering: per column b = 2..k, off-diagonals then the
// (b-1)-th Gram-Schmidt traceless diagonal.
std::vector<HermitianMatrix> traceless_basis(int k);

RVector expand(const HermitianMatrix& h);
HermitianMatrix from_coordinates(const RVector& x, int n);

// Coordinates of a k x k traceless block in traceless_basis(k).
RVector traceless_coordinates(const CMatrix& block);
CMatrix from_traceless_coordinates(const RVector& y, int k);

HermitianMatrix conjugate(const HermitianMatrix& h, const UnitaryMatrix& u);

void require_same_dim(int a, int b, const char* what);

}  // namespace hermgeo
