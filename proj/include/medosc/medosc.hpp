#pragma once

#include "cube_table.hpp"
#include "decomposition.hpp"
#include "errors.hpp"
#include "grid.hpp"
#include "maximal.hpp"
#include "median.hpp"
#include "operators.hpp"
#include "rng.hpp"
#include "trend.hpp"
#include "weights.hpp"
#include "young.hpp"
#include "harness/corpus.hpp"
#include "harness/report.hpp"
#include "harness/suites.hpp"
