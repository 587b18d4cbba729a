#pragma once

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace ainfty {

using Int = boost::multiprecision::cpp_int;

/// Representative of `value` in [0, order). An order of 0 stands for the
/// infinite cyclic group and leaves the value untouched.
Int reduce_mod(const Int& value, const Int& order);

/// gcd where 0 acts as the identity (gcd(0, k) = k), which is exactly the
/// order rule for tensor products of cyclic groups.
Int order_gcd(const Int& a, const Int& b);

/// Floor division for a positive divisor.
Int floor_div(const Int& a, const Int& b);

struct ExtendedGcd {
  Int g;  // nonnegative
  Int s;
  Int t;  // g == s*a + t*b
};

ExtendedGcd extended_gcd(const Int& a, const Int& b);

inline bool is_odd(int k) { return (k % 2) != 0; }

/// (-1)^k as an integer.
inline int koszul_sign(long long k) { return (k % 2 == 0) ? 1 : -1; }

std::string to_string(const Int& value);

}  // namespace ainfty
