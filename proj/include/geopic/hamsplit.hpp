#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geopic/feec.hpp"
#include "geopic/particles.hpp"

namespace geopic {

/// Particles, field coefficients and time.
struct SimState {
  ParticleSet particles;
  FieldCoeffs fields;
  double time = 0.0;
};

/// The four pieces of the 1d2v Hamiltonian whose flows are solved exactly.
enum class SubHamiltonian { HDE, HB, Hp1, Hp2 };

enum class PropagatorKind { lie, strang, order2_4lie, order4_3strang, order4_10lie, boris };

struct PropagatorId {
  PropagatorKind kind = PropagatorKind::strang;
  /// Free parameter of the four-stage second-order composition.
  double alpha = 0.1932;

  bool is_splitting() const { return kind != PropagatorKind::boris; }
  bool operator==(const PropagatorId&) const = default;
};

std::string_view to_string(PropagatorKind kind);
std::optional<PropagatorKind> parse_propagator(std::string_view name);

/// Exact flow of one sub-Hamiltonian over dt (any sign), in place.
/// Time is not advanced.
void flow(SubHamiltonian sub, SimState& state, double dt, const DeRhamComplex1d& complex);

/// One step of a sub-flow sequence: flow `sub` over `dt`.
struct Stage {
  SubHamiltonian sub;
  double dt;
};

/// Base first-order map, applied in the time order HDE, HB, Hp1, Hp2.
void lie_map(SimState& state, double dt, const DeRhamComplex1d& complex);
/// Its adjoint: the same exact flows in reverse order.
void lie_adjoint_map(SimState& state, double dt, const DeRhamComplex1d& complex);

/// Sub-flows (in the order they are applied) making up one step of a splitting
/// propagator. Consecutive flows of the same sub-Hamiltonian are merged.
std::vector<Stage> composition_stages(const PropagatorId& prop, double dt);

/// Composition coefficients, listed in application order.
struct CompositionCoefficients {
  static constexpr double kAlpha4Lie = 0.1932;
  static double gamma1();
  static double gamma2();
  /// a_1..a_5 and b_1..b_5 of the ten-stage fourth-order method.
  static std::array<double, 5> a();
  static std::array<double, 5> b();
};

/// Advances the state by one step of a splitting propagator.
void compose(const PropagatorId& prop, SimState& state, double dt, const DeRhamComplex1d& complex);

}  // namespace geopic
