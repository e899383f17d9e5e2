#pragma once

#include "curvedirac/errors.hpp"
#include "curvedirac/quadrature.hpp"
#include "curvedirac/geometry.hpp"
#include "curvedirac/specialfn.hpp"
#include "curvedirac/grid.hpp"
#include "curvedirac/analytic.hpp"
#include "curvedirac/tridiagonal.hpp"
#include "curvedirac/solver.hpp"
#include "curvedirac/postproc.hpp"
#include "curvedirac/run.hpp"
