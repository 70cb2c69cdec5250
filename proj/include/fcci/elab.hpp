#pragma once

// Whole-program elaboration: replace every ascription by its resolved
// witness and rewrite every implicit binder form to explicit. The result is
// a core term, checkable by the independent plain checker in fomega.hpp.

#include "fcci/core.hpp"
#include "fcci/typing.hpp"

namespace fcci {

inline TermPtr elaborate_unit(const TypedTerm& typed) {
  return to_core(typed.term, typed.asc_images);
}

}  // namespace fcci
