#pragma once

#include <cstdint>
#include <vector>

#include "tidecoh/coupling.hpp"
#include "tidecoh/rng.hpp"

namespace tidecoh {

class ResolutionError : public Error {
 public:
  using Error::Error;
};

// Far-field two-slit geometry in arbitrary but consistent length units.
// The defaults give an intensity fringe period of 1/8 across a pixel grid
// spanning [-5w, 5w], i.e. 16 periods inside |x| <= w and ~12.8 pixels per period.
struct ScreenGeometry {
  std::size_t n_pixels = 1024;
  double slit_separation = 8.0;
  double distance = 1.0;
  double wavelength = 1.0;
  double envelope_width = 1.0;

  // Period of the intensity fringes cos(2 pi s x / (lambda L)).
  double fringe_period() const { return wavelength * distance / slit_separation; }
};

/// Pixel-basis amplitudes <x|A>, <x|B> of the two slit states.
class ScreenModel {
 public:
  ScreenModel(ScreenGeometry geometry, std::vector<double> coords, CVector amp_a, CVector amp_b);

  const ScreenGeometry& geometry() const { return geometry_; }
  const std::vector<double>& coords() const { return coords_; }
  const CVector& amp_a() const { return amp_a_; }
  const CVector& amp_b() const { return amp_b_; }
  std::size_t n_pixels() const { return coords_.size(); }
  double pixel_pitch() const;

  // (|<x|A>|^2 + |<x|B>|^2) / 2, the fringe-free envelope.
  std::vector<double> envelope() const;

 private:
  ScreenGeometry geometry_;
  std::vector<double> coords_;
  CVector amp_a_;
  CVector amp_b_;
};

// amp_A(x) = g(x) exp(+i pi s x / (lambda L)), amp_B(x) = g(x) exp(-i pi s x / (lambda L)),
// with g a Gaussian of width w; each renormalized on the grid.
ScreenModel build_screen(const ScreenGeometry& geometry);

// |u_A <x|A> + u_B <x|B>|^2 for a slit-space state u, renormalized to sum 1.
std::vector<double> pixel_weights(const StateVector& atom_state, const ScreenModel& sm);

// sum_k magnitude_k^2 |psi_k(x)|^2 over the branches, normalized to sum 1.
std::vector<double> total_distribution(const RelativeDecomposition& rd, const ScreenModel& sm);

/// Envelope-corrected fringe visibility (P_max - P_min) / (P_max + P_min).
///
/// P is divided by the envelope over the central region |x| <= w, and the
/// extremes are those of the least-squares fringe a + b cos(kx) + c sin(kx)
/// at the geometry's fringe frequency, so pixel sampling phase does not bias
/// the peaks. Throws ResolutionError when the pixel pitch exceeds 1/8 of a
/// fringe period or the central region holds fewer than 3 periods.
double fringe_visibility(const std::vector<double>& p, const ScreenModel& sm);

struct HitHistogram {
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;
};

HitHistogram sample_hits(const std::vector<double>& p, std::uint64_t n, RngStream& rng);

}  // namespace tidecoh
