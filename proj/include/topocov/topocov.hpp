#pragma once

#include "errors.hpp"
#include "graph.hpp"
#include "index.hpp"
#include "moments.hpp"
#include "montecarlo.hpp"
#include "oracle.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "version.hpp"
#include "vertex_function.hpp"
