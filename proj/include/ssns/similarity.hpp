#pragma once

#include "ssns/calculus.hpp"

namespace ssns {

enum class MapDirection { ToSimilarity, ToPhysical };

/// Amplitude exponents of the similarity substitution: similarity field
/// equals t^w times the physical field evaluated at x = t^{1/alpha} xi.
inline double velocity_weight(double alpha) { return 1.0 - 1.0 / alpha; }
inline double forcing_weight(double alpha) { return 2.0 - 1.0 / alpha; }

struct ResampleReport {
  double lambda = 1.0;        // dilation factor applied to the coordinates
  double truncated_linf = 0;  // L-inf of the part sampled outside the box
  double boundary_tail = 0;   // relative L-inf of the input near the boundary
};

/// Trigonometric (Fourier-domain) resampling of the periodic interpolant at
/// the dilated points lambda*xi. Points falling outside the primary box are
/// zeroed: the fields this is used on are heat tails there, and periodic
/// wrap-around would otherwise inject O(1) ghost images.
State dilate(const Grid& g, const State& u, double lambda,
             ResampleReport* report = nullptr);

/// Similarity-coordinate map between physical and self-similar frames at
/// physical time t > 0 (tau = log t). weight = velocity_weight or
/// forcing_weight.
VectorField similarity_map(const VectorField& f, double t,
                           MapDirection direction, double weight,
                           ResampleReport* report = nullptr);

/// Evaluate the interpolant at coordinates rotated by -theta (2D); used for
/// the m-fold symmetry diagnostics. O(n^4), test-scale only.
State rotate_resample(const Grid& g, const State& u, double theta);

/// Zero-pad (or truncate) the spectrum onto another grid with the same d and
/// L; Nyquist rows are dropped. Exact on band-limited fields.
VectorField change_resolution(GridPtr to, const VectorField& f);
State change_resolution_state(const Grid& from, const Grid& to, const State& u);

}  // namespace ssns
