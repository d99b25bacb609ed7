#pragma once

#include <string>

#include "tidecoh/coupling.hpp"
#include "tidecoh/rng.hpp"

namespace tidecoh {

// A two-slit preparation c_A|A> + c_B|B> together with its (d, e) coupling.
struct Scenario {
  complex c_a;
  complex c_b;
  complex d;
  complex e;

  StateVector system() const;
  CouplingSpec coupling() const;
  std::string describe() const;
};

// The balanced d = sqrt(0.8), e = sqrt(0.2) preparation used throughout the docs.
Scenario reference_scenario();

// Haar-random normalized complex (c_A, c_B) and (d, e).
Scenario random_scenario(RngStream& rng);

}  // namespace tidecoh
