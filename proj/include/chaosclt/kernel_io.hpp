#pragma once

#include <string>
#include <string_view>

#include "chaosclt/kernels.hpp"

namespace chaosclt {

// Line-oriented text format (see docs/kernel-format.md):
//
//   chaosclt-kernel 1
//   order 2
//   dim 3
//   representation dense        # or rank-one
//   values                      # dense: n^p numbers, row-major
//   1 0 0  0 1 0  0 0 1
//   end
//
// Rank-one sums replace `values` with an optional `stationary 0|1` line,
// `terms T`, and T lines `term <coefficient> <v_1> ... <v_n>`.
// Numbers are written in the shortest form that round-trips exactly.

std::string serialize_kernel(const Kernel& kernel);

/// Throws ParseError carrying the line and column of the first problem.
Kernel parse_kernel(std::string_view text, std::size_t guard = kDefaultEntryGuard);

}  // namespace chaosclt
