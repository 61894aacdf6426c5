// normtail/blend.hpp
//
// Smoothing a norm by blending its dual with the dual of a nearby smooth
// norm.  Given a base norm ||.|| and a smooth comparison norm pi with
//   ||x|| <= pi(x) <= sqrt(mu) ||x||            (mu > 1)
// the blended dual
//   q*(xi)^2 = gamma pi*(xi)^2 + (1 - gamma) ||xi||_*^2,   gamma = 1/(mu-1)
// defines (by duality) a norm q with
//   ||x||^2 <= q(x)^2 <= mu/(mu-1) ||x||^2  (<= 2 ||x||^2 once mu >= 2),
// i.e. a factor-2 smooth companion of the base norm.
//
// Desk-scale construction: both spaces must be vector-shaped with dimension
// at most 4; the primal value q(x) is recovered numerically from the dual.

#pragma once

#include "normtail/space.hpp"

#include <cstdint>

namespace normtail {

struct BlendNorm {
  SpaceDescriptor base;  // the norm being smoothed (duals via dual_norm)
  SpaceDescriptor pi;    // the smooth comparison norm
  double mu = 2.0;
  double gamma = 1.0;  // 1 / (mu - 1)

  // Blended dual norm q*(xi).
  double q_star(const Point& xi) const;

  // Primal norm q(x) = max_{xi != 0} <x, xi> / q*(xi), recovered by dense
  // direction sampling plus coordinate pattern-search refinement.
  double q_primal(const Point& x, int directions = 10000,
                  std::uint64_t seed = 1) const;
};

// Validates shapes (vector, dim <= 4, shared ambient), mu > 1, and the
// primal sandwich ||x|| <= pi(x) <= sqrt(mu) ||x|| on sampled directions.
BlendNorm blend_smooth_norm(const SpaceDescriptor& base,
                            const SpaceDescriptor& pi, double mu);

}  // namespace normtail
