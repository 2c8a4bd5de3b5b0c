#include "hermgeo/hermitian.hpp"

#include "hermgeo/errors.hpp"
#include "hermgeo/spectral.hpp"

#include <cmath>
#include <sstream>

namespace hermgeo {

namespace {

constexpr double kAsymmetryTol = 1e-12;
constexpr double kUnitaryTol = 1e-10;
const double kSqrt2 = std::sqrt(2.0);

}  // namespace

void require_same_dim(int a, int b, const char* what) {
    if (a != b) {
        std::ostringstream os;
        os << what << ": dimension mismatch (" << a << " vs " << b << ")";
        throw DimensionMismatch(os.str());
    }
}

HermitianMatrix::HermitianMatrix(const CMatrix& a) {
    if (a.rows() != a.cols()) {
        throw DimensionMismatch("HermitianMatrix: matrix must be square");
    }
    if (a.rows() == 0) {
        throw InvalidArgument("HermitianMatrix: dimension must be > 0");
    }
    if (!a.allFinite()) {
        throw InvalidArgument("HermitianMatrix: entries must be finite");
    }
    const double scale = a.cwiseAbs().maxCoeff();
    asymmetry_ = (a - a.adjoint()).cwiseAbs().maxCoeff();
    if (asymmetry_ > kAsymmetryTol * scale) {
        std::ostringstream os;
        os << "HermitianMatrix: asymmetry " << asymmetry_ << " exceeds tolerance";
        throw NotHermitian(os.str());
    }
    m_ = 0.5 * (a + a.adjoint());
}

HermitianMatrix HermitianMatrix::hermitian_part(const CMatrix& a) {
    if (a.rows() != a.cols()) {
        throw DimensionMismatch("HermitianMatrix: matrix must be square");
    }
    if (a.rows() == 0 || !a.allFinite()) {
        throw InvalidArgument("HermitianMatrix: entries must be finite and dimension > 0");
    }
    HermitianMatrix h;
    h.asymmetry_ = (a - a.adjoint()).cwiseAbs().maxCoeff();
    h.m_ = 0.5 * (a + a.adjoint());
    return h;
}

HermitianMatrix HermitianMatrix::zero(int n) { return HermitianMatrix(CMatrix::Zero(n, n)); }

HermitianMatrix HermitianMatrix::identity(int n) {
    return HermitianMatrix(CMatrix::Identity(n, n));
}

HermitianMatrix HermitianMatrix::diagonal(const RVector& d) {
    return HermitianMatrix(CMatrix(d.cast<cplx>().asDiagonal()));
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& o) const {
    require_same_dim(n(), o.n(), "HermitianMatrix::operator+");
    return hermitian_part(m_ + o.m_);
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& o) const {
    require_same_dim(n(), o.n(), "HermitianMatrix::operator-");
    return hermitian_part(m_ - o.m_);
}

HermitianMatrix HermitianMatrix::operator*(double s) const { return hermitian_part(m_ * s); }

UnitaryMatrix::UnitaryMatrix(const CMatrix& u) {
    if (u.rows() != u.cols() || u.rows() == 0) {
        throw DimensionMismatch("UnitaryMatrix: matrix must be square and nonempty");
    }
    const auto n = u.rows();
    const double dev = (u.adjoint() * u - CMatrix::Identity(n, n)).norm();
    if (!(dev <= kUnitaryTol * std::sqrt(static_cast<double>(n)))) {
        std::ostringstream os;
        os << "UnitaryMatrix: ||U^dagger U - I||_F = " << dev;
        throw NotUnitary(os.str());
    }
    m_ = u;
}

UnitaryMatrix UnitaryMatrix::identity(int n) { return UnitaryMatrix(CMatrix::Identity(n, n)); }

UnitaryMatrix UnitaryMatrix::adjoint() const { return UnitaryMatrix(CMatrix(m_.adjoint())); }

UnitaryMatrix UnitaryMatrix::operator*(const UnitaryMatrix& o) const {
    require_same_dim(n(), o.n(), "UnitaryMatrix::operator*");
    return UnitaryMatrix(CMatrix(m_ * o.m_));
}

std::string to_string(const BasisIndex& idx) {
    std::ostringstream os;
    switch (idx.kind) {
        case BasisIndex::Kind::RealOffdiag: os << "re(" << idx.a << "," << idx.b << ")"; break;
        case BasisIndex::Kind::ImagOffdiag: os << "im(" << idx.a << "," << idx.b << ")"; break;
        case BasisIndex::Kind::Diag: os << "diag(" << idx.a << ")"; break;
        case BasisIndex::Kind::TracelessDiag: os << "tdiag(" << idx.a << ")"; break;
    }
    return os.str();
}

double frobenius_inner(const HermitianMatrix& h, const HermitianMatrix& k) {
    require_same_dim(h.n(), k.n(), "frobenius_inner");
    // tr(HK) = sum_ab H_ab K_ba = sum_ab H_ab conj(K_ab), real for Hermitian pairs
    return (h.mat().array() * k.mat().conjugate().array()).sum().real();
}

double frobenius_norm(const HermitianMatrix& h) { return h.mat().norm(); }

double operator_2_norm(const HermitianMatrix& h) {
    const Spectrum s = eigh(h);
    return std::max(std::abs(s.eigenvalues(0)), std::abs(s.eigenvalues(s.eigenvalues.size() - 1)));
}

std::vector<BasisElement> canonical_basis(int n) {
    if (n < 1) throw InvalidArgument("canonical_basis: n must be >= 1");
    std::vector<BasisElement> out;
    out.reserve(static_cast<size_t>(n) * n);
    const cplx r(1.0 / kSqrt2, 0.0);
    const cplx i(0.0, 1.0 / kSqrt2);
    for (int b = 0; b < n; ++b) {
        for (int a = 0; a < b; ++a) {
            CMatrix re = CMatrix::Zero(n, n);
            re(a, b) = r;
            re(b, a) = r;
            out.push_back({{BasisIndex::Kind::RealOffdiag, a + 1, b + 1}, HermitianMatrix(re)});
            CMatrix im = CMatrix::Zero(n, n);
            im(a, b) = -i;
            im(b, a) = i;
            out.push_back({{BasisIndex::Kind::ImagOffdiag, a + 1, b + 1}, HermitianMatrix(im)});
        }
        CMatrix d = CMatrix::Zero(n, n);
        d(b, b) = 1.0;
        out.push_back({{BasisIndex::Kind::Diag, b + 1, b + 1}, HermitianMatrix(d)});
    }
    return out;
}

namespace {

// Gram-Schmidt over sigma_aa - sigma_{a+1,a+1}, a = 1..k-1.
std::vector<RVector> traceless_diagonals(int k) {
    std::vector<RVector> out;
    for (int a = 0; a + 1 < k; ++a) {
        RVector v = RVector::Zero(k);
        v(a) = 1.0;
        v(a + 1) = -1.0;
        for (const auto& u : out) v -= u.dot(v) * u;
        v /= v.norm();
        out.push_back(v);
    }
    return out;
}

}  // namespace

std::vector<HermitianMatrix> traceless_basis(int k) {
    if (k < 2) throw InvalidArgument("traceless_basis: k must be >= 2");
    const auto diags = traceless_diagonals(k);
    std::vector<HermitianMatrix> out;
    out.reserve(static_cast<size_t>(k) * k - 1);
    const cplx r(1.0 / kSqrt2, 0.0);
    const cplx i(0.0, 1.0 / kSqrt2);
    for (int b = 1; b < k; ++b) {
        for (int a = 0; a < b; ++a) {
            CMatrix re = CMatrix::Zero(k, k);
            re(a, b) = r;
            re(b, a) = r;
            out.emplace_back(re);
            CMatrix im = CMatrix::Zero(k, k);
            im(a, b) = -i;
            im(b, a) = i;
            out.emplace_back(im);
        }
        out.push_back(HermitianMatrix::diagonal(diags[static_cast<size_t>(b - 1)]));
    }
    return out;
}

RVector expand(const HermitianMatrix& h) {
    const int n = h.n();
    RVector x(n * n);
    int c = 0;
    const auto& m = h.mat();
    for (int b = 0; b < n; ++b) {
        for (int a = 0; a < b; ++a) {
            x(c++) = kSqrt2 * m(a, b).real();
            x(c++) = -kSqrt2 * m(a, b).imag();
        }
        x(c++) = m(b, b).real();
    }
    return x;
}

HermitianMatrix from_coordinates(const RVector& x, int n) {
    if (x.size() != static_cast<Eigen::Index>(n) * n) {
        throw DimensionMismatch("from_coordinates: expected n^2 coordinates");
    }
    CMatrix m = CMatrix::Zero(n, n);
    int c = 0;
    for (int b = 0; b < n; ++b) {
        for (int a = 0; a < b; ++a) {
            const double re = x(c++) / kSqrt2;
            const double im = -x(c++) / kSqrt2;
            m(a, b) = cplx(re, im);
            m(b, a) = cplx(re, -im);
        }
        m(b, b) = x(c++);
    }
    return HermitianMatrix(m);
}

RVector traceless_coordinates(const CMatrix& block) {
    const int k = static_cast<int>(block.rows());
    const auto diags = traceless_diagonals(k);
    RVector y(k * k - 1);
    int c = 0;
    for (int b = 1; b < k; ++b) {
        for (int a = 0; a < b; ++a) {
            y(c++) = kSqrt2 * block(a, b).real();
            y(c++) = -kSqrt2 * block(a, b).imag();
        }
        y(c++) = diags[static_cast<size_t>(b - 1)].dot(block.diagonal().real());
    }
    return y;
}

CMatrix from_traceless_coordinates(const RVector& y, int k) {
    if (y.size() != static_cast<Eigen::Index>(k) * k - 1) {
        throw DimensionMismatch("from_traceless_coordinates: expected k^2 - 1 coordinates");
    }
    const auto diags = traceless_diagonals(k);
    CMatrix m = CMatrix::Zero(k, k);
    int c = 0;
    for (int b = 1; b < k; ++b) {
        for (int a = 0; a < b; ++a) {
            const double re = y(c++) / kSqrt2;
            const double im = -y(c++) / kSqrt2;
            m(a, b) = cplx(re, im);
            m(b, a) = cplx(re, -im);
        }
        m.diagonal() += (y(c++) * diags[static_cast<size_t>(b - 1)]).cast<cplx>();
    }
    return m;
}

HermitianMatrix conjugate(const HermitianMatrix& h, const UnitaryMatrix& u) {
    require_same_dim(h.n(), u.n(), "conjugate");
    return HermitianMatrix::hermitian_part(u.mat() * h.mat() * u.mat().adjoint());
}

}  // namespace hermgeo
