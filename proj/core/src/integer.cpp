#include "ainfty/integer.hpp"

namespace ainfty {

Int reduce_mod(const Int& value, const Int& order) {
  if (order == 0) {
    return value;
  }
  Int r = value % order;
  if (r < 0) {
    r += order;
  }
  return r;
}

Int order_gcd(const Int& a, const Int& b) {
  return boost::multiprecision::gcd(a, b);
}

Int floor_div(const Int& a, const Int& b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) {
    q -= 1;
  }
  return q;
}

ExtendedGcd extended_gcd(const Int& a, const Int& b) {
  Int old_r = a, r = b;
  Int old_s = 1, s = 0;
  Int old_t = 0, t = 1;
  while (r != 0) {
    Int q = old_r / r;
    Int tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) {
    return {-old_r, -old_s, -old_t};
  }
  return {old_r, old_s, old_t};
}

std::string to_string(const Int& value) { return value.str(); }

}  // namespace ainfty
