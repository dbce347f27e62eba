#pragma once

#include <iosfwd>
#include <string>

#include "ctmdp/model.hpp"

namespace ctmdp {

// Instance text format. '#' starts a comment; blank lines are ignored.
//
//   [meta]
//   S 2
//   A 2
//   H 1
//   x0 0
//   lambda_min 2
//   lambda_max 7
//   [reward]        S rows of A numbers
//   [rate]          S rows of A numbers
//   [transition]    S*A rows of S numbers, row (x,a) at position x*A + a
//
// States and actions are zero-indexed. Numbers are written so they parse
// back to the identical double.

void write_instance(std::ostream& out, const CtmdpModel& m);

/// Parses and validates an instance. Throws InvalidInput naming the
/// offending section or field.
CtmdpModel read_instance(std::istream& in);

CtmdpModel load_instance_file(const std::string& path);
void save_instance_file(const std::string& path, const CtmdpModel& m);

/// Resolves a built-in name or a file path:
///   machine-repair
///   single-absorbing
///   hard:S:A:j:gap[:lambda_max[:H]]   (lambda_max defaults to 7, H to 1)
/// Anything else is read as an instance file.
CtmdpModel resolve_instance(const std::string& spec);

}  // namespace ctmdp
