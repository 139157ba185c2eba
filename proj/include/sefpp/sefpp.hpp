#pragma once

#include "sefpp/applications.hpp"
#include "sefpp/baselines.hpp"
#include "sefpp/convex_set.hpp"
#include "sefpp/diagnostics.hpp"
#include "sefpp/errors.hpp"
#include "sefpp/linalg.hpp"
#include "sefpp/mapping.hpp"
#include "sefpp/normalized.hpp"
#include "sefpp/problem.hpp"
#include "sefpp/prox.hpp"
#include "sefpp/schedule.hpp"
#include "sefpp/solvers.hpp"
