#pragma once

#include <memory>
#include <vector>

#include "ssns/core.hpp"

namespace ssns {

/// Discretization of the truncated spatial domain [-L, L)^d.
struct GridSpec {
  int d = 2;            // spatial dimension, 2 or 3
  int n = 64;           // modes per axis, power of two
  double L = 2.0 * kPi; // halfwidth, box is [-L, L)^d
  double alpha = 1.5;   // fractional order of the dissipation
  bool dealias = true;  // 2/3-rule on quadratic products

  bool operator==(const GridSpec&) const = default;
};

enum class GridUse {
  Semigroup,  // any alpha in (0, 2]
  Scenario,   // alpha restricted to (1/2 + d/4, 1 + d/2)
};

class Grid;
using GridPtr = std::shared_ptr<const Grid>;

/// Immutable grid with cached wavenumber lattice, coordinate samples and the
/// windowed coordinate multiplier. Safe to share read-only across threads.
class Grid {
public:
  const GridSpec spec;

  Eigen::Index size() const { return size_; }                 // n^d
  double dx() const { return 2.0 * spec.L / spec.n; }
  double cell_volume() const { return vol_cell_; }            // (2L/n)^d
  double box_volume() const { return vol_box_; }              // (2L)^d

  /// Derivative wavenumber along `axis` (Nyquist zeroed), flattened n^d.
  const Array& k(int axis) const { return k_[axis]; }
  /// |k|^2 with the full lattice (Nyquist included).
  const Array& kmag2() const { return kmag2_; }
  /// |k|^2 of the derivative lattice (Nyquist zeroed); the projection and
  /// stream-function multipliers use this so the discrete calculus closes.
  const Array& kmag2_deriv() const { return kmag2_deriv_; }
  /// |k|^alpha for the grid's alpha; |0|^alpha = 0.
  const Array& kalpha() const { return kalpha_; }
  /// |k|^s for arbitrary s (computed on demand, not cached).
  Array kpow(double s) const;
  /// 2/3-rule mask (1 keep, 0 zero) applied per axis.
  const Array& dealias_mask() const { return dealias_; }

  /// Coordinate samples xi_axis, flattened n^d.
  const Array& xi(int axis) const { return xi_[axis]; }
  /// Window chi: 1 on the identity region [-L/2, L/2)^d, 0 near the boundary.
  const Array& chi() const { return chi_; }
  /// Windowed coordinate multiplier psi_axis = chi * xi_axis.
  const Array& psi(int axis) const { return psi_[axis]; }
  /// Sponge damping sigma >= 0, zero on the identity region.
  const Array& sponge() const { return sponge_; }
  double sponge_strength() const { return sigma0_; }

  /// True if |xi|_inf <= L/2 everywhere the field's support sits; used for
  /// support-breach warnings, not enforcement.
  double identity_halfwidth() const { return 0.5 * spec.L; }

  static GridPtr make(const GridSpec& spec, GridUse use = GridUse::Semigroup);

private:
  explicit Grid(const GridSpec& s);

  Eigen::Index size_ = 0;
  double vol_cell_ = 0.0, vol_box_ = 0.0, sigma0_ = 0.0;
  std::vector<Array> k_, xi_, psi_;
  Array kmag2_, kmag2_deriv_, kalpha_, dealias_, chi_, sponge_;
};

/// Validating factory per the GridSpec invariants.
GridPtr make_grid(int d, int n, double L, double alpha, bool dealias,
                  GridUse use = GridUse::Semigroup);

}  // namespace ssns
