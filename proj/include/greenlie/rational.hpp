#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace greenlie {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "7", "-3/2", "0.125", "1e-3" exactly. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Exact conversion of a finite double through its shortest round-trip decimal.
Rational rational_from_double(double value);

std::string to_string(const Rational& q);

inline double to_double(const Rational& q) { return q.get_d(); }

}  // namespace greenlie
