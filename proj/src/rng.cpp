#include "tidecoh/rng.hpp"

#include <cmath>

namespace tidecoh {

namespace {

// SplitMix64 finalizer; decorrelates nearby seeds and split indices.
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed) : id_(mix(seed)), engine_(id_) {}

RngStream RngStream::split(std::uint64_t index) const {
  RngStream child(0);
  child.id_ = mix(id_ ^ mix(index + 0x632be59bd9b4e019ULL));
  child.engine_.seed(child.id_);
  return child;
}

double RngStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::exponential(double rate) {
  return -std::log1p(-uniform()) / rate;
}

}  // namespace tidecoh
