// Umbrella header: the full library.
#pragma once

#include "aritylab/combinators.hpp"
#include "aritylab/core.hpp"
#include "aritylab/engine.hpp"
#include "aritylab/formula.hpp"
#include "aritylab/generators.hpp"
#include "aritylab/io.hpp"
#include "aritylab/structure.hpp"
#include "aritylab/symmetry.hpp"
