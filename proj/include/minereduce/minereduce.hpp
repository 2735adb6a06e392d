#pragma once

#include "minereduce/construct.hpp"
#include "minereduce/experiment.hpp"
#include "minereduce/generator.hpp"
#include "minereduce/instance_io.hpp"
#include "minereduce/itemsets.hpp"
#include "minereduce/local_search.hpp"
#include "minereduce/mining.hpp"
#include "minereduce/model.hpp"
#include "minereduce/reduce.hpp"
#include "minereduce/rng.hpp"
#include "minereduce/solver.hpp"
#include "minereduce/stats.hpp"
