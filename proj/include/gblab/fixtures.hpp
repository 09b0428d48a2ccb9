#pragma once
#include <string>

#include <nlohmann/json.hpp>

#include "gblab/frame.hpp"
#include "gblab/sine_gordon.hpp"

// Named chart fixtures: every frame identity in the library is exercised on
// at least one curved and one flat witness drawn from here.
namespace gblab::fixtures {

using frames::FrameConnection;

// Upper-half-plane chart, curvature -1: theta_i = dy_i/y_2, omega_12 = -dy_1/y_2.
FrameConnection hyperbolic_half_plane(int res);

// Polar chart of the radius-R sphere: theta = (R drho, R sin(rho) dphi),
// omega_12 = -cos(rho) dphi, curvature 1/R^2.
FrameConnection round_sphere(int res, double radius = 1.0);

// Square torus chart: theta = (du, dv), omega = 0.
FrameConnection flat_torus(int res);

// Net-angle chart of a curvature -1 surface: theta_1 = cos(t/2)(dz+dw),
// theta_2 = sin(t/2)(dw-dz), omega_12 = (t_z dz - t_w dw)/2 with t the net
// angle and derivatives taken by finite differences.
FrameConnection pseudosphere(const sg::SineGordonSolution& sol);

// Registry for closed-surface Euler-characteristic runs; names:
// "round_sphere", "flat_torus", "round_sphere_radius2".  FixtureError on
// unknown names.
FrameConnection closed_surface(const std::string& name, int res);

// A rank-n ambient connection restricted along a hypersurface (last frame
// vector normal) together with the induced rank-(n-1) connection on the same
// chart.  Names: "cylinder", "round_sphere", "flat_plane".
struct AdaptedPair {
  FrameConnection ambient;
  FrameConnection boundary;
};
AdaptedPair adapted_pair(const std::string& name, int res);

// Principal data for the pseudosphere chart: x = (cos(t/2), sin(t/2)),
// y = (z+w, w-z), analytic frame vectors, and the normal-connection form
// dt/2.
frames::PrincipalFrameData pseudosphere_principal(const sg::SineGordonSolution& sol);

// Chart + frame from JSON:
// { "axes": [{"lo":..,"hi":..,"res":..}, ...], "rank": n,
//   "theta": [[{"base":[axis,...], "values":[...] | "constant": c}, ...], ...],
//   "omega": [{"i":..,"j":.., "terms":[...]}...] }
// ConfigError on schema violations.
FrameConnection frame_from_json(const nlohmann::json& doc);
FrameConnection frame_from_file(const std::string& path);

}  // namespace gblab::fixtures
