#pragma once

#include <iosfwd>

namespace oscillab {

// Fast internal consistency battery: exact predictor identities, symbolic
// round-trips, partition telescoping, and closed-form norm cases. Prints one
// line per check; returns true when everything passed. The verdict does not
// depend on the seed (it only shuffles the random draws).
bool run_selftest(std::ostream& out, unsigned long long seed);

}  // namespace oscillab
