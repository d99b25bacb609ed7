#include "tidecoh/scenario.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace tidecoh {

StateVector Scenario::system() const {
  CVector v(2);
  v << c_a, c_b;
  return StateVector::normalized(std::move(v), {slit_factor()});
}

CouplingSpec Scenario::coupling() const { return two_slit_coupling(d, e); }

std::string Scenario::describe() const {
  std::ostringstream os;
  os.precision(6);
  auto put = [&](const char* name, complex z) { os << name << "=" << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i"; };
  put("cA", c_a);
  os << " ";
  put("cB", c_b);
  os << " ";
  put("d", d);
  os << " ";
  put("e", e);
  return os.str();
}

Scenario reference_scenario() {
  const double h = std::sqrt(0.5);
  return {h, h, std::sqrt(0.8), std::sqrt(0.2)};
}

namespace {

std::pair<complex, complex> random_pair(RngStream& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const complex a(g(rng), g(rng));
  const complex b(g(rng), g(rng));
  const double n = std::sqrt(std::norm(a) + std::norm(b));
  return {a / n, b / n};
}

}  // namespace

Scenario random_scenario(RngStream& rng) {
  const auto [ca, cb] = random_pair(rng);
  const auto [d, e] = random_pair(rng);
  return {ca, cb, d, e};
}

}  // namespace tidecoh
