#pragma once

#include "ssns/core.hpp"
#include "ssns/grid.hpp"

namespace ssns {

// Coefficient convention: samples u_j and coefficients c_m are related by
//   u_j = sum_m c_m exp(i 2*pi m.j / n) = sum_m c_m prod_a exp(i k_{m_a} (xi_{j_a} + L)),
// with k_m = (pi/L) m, m in {0..n/2-1, -n/2..-1}. Flattened row-major, last
// axis fastest. All transforms are c2c; real fields carry ~0 imaginary parts.

/// In-place forward: samples -> coefficients (normalized by n^-d).
void dft_forward(int d, int n, CArray& data);
/// In-place inverse: coefficients -> samples.
void dft_inverse(int d, int n, CArray& data);

CArray to_coeffs(const Grid& g, const CArray& samples);
CArray to_samples(const Grid& g, const CArray& coeffs);

/// Samples of a real field from its coefficients; the imaginary residue is
/// dropped (it is roundoff for conjugate-symmetric input).
Array to_real_samples(const Grid& g, const CArray& coeffs);
CArray real_to_coeffs(const Grid& g, const Array& samples);

/// Max |imag| / max |real| of the sample representation; conjugate-symmetry
/// diagnostic.
double imag_residue(const Grid& g, const CArray& coeffs);

}  // namespace ssns
