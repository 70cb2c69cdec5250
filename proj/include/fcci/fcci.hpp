#pragma once

// Umbrella header for the whole library.

#include "fcci/core.hpp"
#include "fcci/diag.hpp"
#include "fcci/elab.hpp"
#include "fcci/eval.hpp"
#include "fcci/fomega.hpp"
#include "fcci/kinds.hpp"
#include "fcci/meta.hpp"
#include "fcci/oracle.hpp"
#include "fcci/parse.hpp"
#include "fcci/pretty.hpp"
#include "fcci/resolve.hpp"
#include "fcci/syntax.hpp"
#include "fcci/typing.hpp"
#include "fcci/unify.hpp"
