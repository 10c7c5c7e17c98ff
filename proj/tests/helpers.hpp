#pragma once

#include <doctest.h>

#include "triality/error.hpp"
#include "triality/states.hpp"

namespace testing {

inline triality::Matrix mat2(triality::cplx a, triality::cplx b, triality::cplx c, triality::cplx d) {
  triality::Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

template <class Fn>
triality::ErrorCode error_code_of(Fn&& fn) {
  try {
    fn();
  } catch (const triality::Error& e) {
    return e.code();
  }
  FAIL("expected triality::Error");
  return triality::ErrorCode::BadFormat;
}

}  // namespace testing
