#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace sforge {

using Rat = mpq_class;
using Int = mpz_class;

// Parses "p", "-p" or "p/q"; throws std::invalid_argument on malformed input.
Rat parse_rat(const std::string& s);

// Canonical form: "p" for integers, "p/q" otherwise.
std::string rat_to_string(const Rat& r);

using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;  // row-major

// Rank over Q by Gaussian elimination. Does not modify the input.
int rat_rank(RatMat m);

// Given rows, returns indices of a maximal linearly independent subset,
// scanning in order.
std::vector<int> independent_rows(const RatMat& m);

// Least common multiple of denominators; 1 for an empty vector.
Int common_denominator(const RatVec& v);

inline bool is_integral(const Rat& r) { return r.get_den() == 1; }

}  // namespace sforge
