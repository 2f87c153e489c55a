#pragma once

#include "bounds.hpp"
#include "csv.hpp"
#include "discrete.hpp"
#include "error.hpp"
#include "geometry.hpp"
#include "harness.hpp"
#include "parallel.hpp"
#include "random.hpp"
#include "sampler.hpp"
#include "stats.hpp"
#include "validation.hpp"
#include "vec3.hpp"
#include "walker.hpp"
