#pragma once

#include "averages.hpp"
#include "cocycle.hpp"
#include "cuts.hpp"
#include "error.hpp"
#include "families.hpp"
#include "flows.hpp"
#include "graph.hpp"
#include "io.hpp"
#include "lab/config.hpp"
#include "lab/finitizing.hpp"
#include "lab/models.hpp"
#include "lab/report.hpp"
#include "lab/tiling.hpp"
#include "partition.hpp"
#include "prepartitions.hpp"
#include "visibility.hpp"
