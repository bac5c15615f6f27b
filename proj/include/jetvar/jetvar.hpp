#pragma once

// Symbolic variational calculus on higher-order jet bundles: Euler-Lagrange
// systems, velocity-momentum (unified) equation systems with constraints,
// multiplier elimination, constraint prolongation and regularity analysis.

#include "cli.hpp"
#include "equations.hpp"
#include "expr.hpp"
#include "fixtures.hpp"
#include "jetspace.hpp"
#include "jsonio.hpp"
#include "lemmas.hpp"
#include "multiindex.hpp"
#include "parse.hpp"
#include "problem.hpp"
#include "prolong.hpp"
#include "rational.hpp"
#include "render.hpp"
#include "skinnerrusk.hpp"
#include "symbols.hpp"
#include "variational.hpp"
