#include "ssns/fourier.hpp"

#include <unsupported/Eigen/FFT>

namespace ssns {

namespace {

Eigen::FFT<double>& engine() {
  thread_local Eigen::FFT<double> fft;
  return fft;
}

// Unnormalized forward DFT along every axis: X_m = sum_j x_j e^{-i 2pi m j / n}.
void raw_forward(int d, int n, CArray& data) {
  auto& fft = engine();
  const Eigen::Index N = data.size();
  Eigen::VectorXcd line(n), out(n);
  Eigen::Index inner = 1;
  for (int axis = d - 1; axis >= 0; --axis) {
    const Eigen::Index block = inner * n;
    for (Eigen::Index b = 0; b < N; b += block) {
      for (Eigen::Index off = 0; off < inner; ++off) {
        const Eigen::Index base = b + off;
        for (int t = 0; t < n; ++t) line[t] = data[base + t * inner];
        fft.fwd(out, line);
        for (int t = 0; t < n; ++t) data[base + t * inner] = out[t];
      }
    }
    inner = block;
  }
}

}  // namespace

void dft_forward(int d, int n, CArray& data) {
  raw_forward(d, n, data);
  double scale = 1.0;
  for (int a = 0; a < d; ++a) scale /= n;
  data *= scale;
}

void dft_inverse(int d, int n, CArray& data) {
  // sum_m c_m e^{+i...} = conj(raw_forward(conj(c)))
  data = data.conjugate();
  raw_forward(d, n, data);
  data = data.conjugate();
}

CArray to_coeffs(const Grid& g, const CArray& samples) {
  CArray c = samples;
  dft_forward(g.spec.d, g.spec.n, c);
  return c;
}

CArray to_samples(const Grid& g, const CArray& coeffs) {
  CArray s = coeffs;
  dft_inverse(g.spec.d, g.spec.n, s);
  return s;
}

Array to_real_samples(const Grid& g, const CArray& coeffs) {
  return to_samples(g, coeffs).real();
}

CArray real_to_coeffs(const Grid& g, const Array& samples) {
  CArray c = samples.cast<Complex>();
  dft_forward(g.spec.d, g.spec.n, c);
  return c;
}

double imag_residue(const Grid& g, const CArray& coeffs) {
  CArray s = to_samples(g, coeffs);
  double re = s.real().abs().maxCoeff();
  double im = s.imag().abs().maxCoeff();
  return re > 0 ? im / re : im;
}

}  // namespace ssns
