#pragma once

#include "homdens/atlas.hpp"
#include "homdens/bench.hpp"
#include "homdens/edge_oracle.hpp"
#include "homdens/embed.hpp"
#include "homdens/erdos_renyi.hpp"
#include "homdens/error.hpp"
#include "homdens/exact.hpp"
#include "homdens/graph.hpp"
#include "homdens/io.hpp"
#include "homdens/random.hpp"
#include "homdens/sampler.hpp"
