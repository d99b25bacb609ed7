#include "tidecoh/numerics.hpp"

namespace tidecoh {

namespace {
Numerics g_numerics;
}

const Numerics& numerics() { return g_numerics; }

void set_numerics(const Numerics& n) { g_numerics = n; }

}  // namespace tidecoh
