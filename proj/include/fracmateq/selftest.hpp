#pragma once

#include <cstdint>
#include <ostream>

namespace fracmateq {

/// Quick property checks (kernel and fractional powers against quadrature,
/// Loewner-Heinz sampling, vec-permutation identities, condition-number
/// oracle dominance). Prints one line per check; true when all pass.
bool run_selftest(std::ostream& out, std::uint64_t seed = 7);

} // namespace fracmateq
