#pragma once

#include "hermgeo/hermitian.hpp"
#include "hermgeo/spectral.hpp"

namespace hermgeo {

// H = e^{iS} (H0 + B + c P0 + H_eff) e^{-iS}.
// The degenerate window is [offset, offset+k); offset 0 is the ground-state case.
// For the general variant all parts live in the original frame and `gauge` is U0.
struct SWDecomposition {
    int k = 0;
    int offset = 0;
    HermitianMatrix H0;
    HermitianMatrix S;
    HermitianMatrix B;
    double c = 0.0;
    HermitianMatrix H_eff;
    UnitaryMatrix rotation;  // e^{iS}
    UnitaryMatrix gauge;     // U0, identity for a diagonal base point
    double residual = 0.0;
    double s_projection_residual = 0.0;  // in-block part removed from the raw logarithm
    double s_norm = 0.0;                 // ||S||_2
    double r0 = 0.0;
    double perturbation_norm = 0.0;      // ||H - H0||_2
    bool within_r0 = false;
    bool s_norm_ok = false;

    HermitianMatrix T() const;  // c P0 in the frame of the parts
    HermitianMatrix reconstruct() const;
    // k x k block of H_eff in the gauge frame
    CMatrix heff_block() const;
};

struct ChartCoordinates {
    RVector x;  // S (2k(n-k)), then B ((n-k)^2), then T (1)
    RVector y;  // H_eff in traceless_basis(k)
};

// Diagonal base point in its own eigenframe.
struct BasePoint {
    UnitaryMatrix gauge;  // columns diagonalize G0
    RVector diagonal;     // window entries snapped to their mean
    int k = 0;
    int offset = 0;
};

HermitianMatrix projector_window(const Spectrum& spec, int k, int offset,
                                 double rel_tol = kDefaultRelTol);
HermitianMatrix projector_lowest_k(const Spectrum& spec, int k, double rel_tol = kDefaultRelTol);

UnitaryMatrix direct_rotation(const HermitianMatrix& P, const HermitianMatrix& P0);

SWDecomposition sw_decompose(const HermitianMatrix& H, const HermitianMatrix& H0, int k,
                             int offset = 0);

// G0 in Sigma_k (window sense); diagonalized, then decomposed and rotated back.
BasePoint make_base_point(const HermitianMatrix& G0, int k, int offset = 0,
                          double rel_tol = kDefaultRelTol);
SWDecomposition sw_decompose_general(const HermitianMatrix& H, const HermitianMatrix& G0, int k,
                                     int offset = 0);
SWDecomposition sw_decompose_general(const HermitianMatrix& H, const BasePoint& base);

ChartCoordinates chart_coordinates(const SWDecomposition& dec);

// Window membership mask for block bookkeeping.
bool in_window(int i, int k, int offset);

}  // namespace hermgeo
