#pragma once

#include "dynlsf/error.hpp"
#include "dynlsf/graph.hpp"
#include "dynlsf/random.hpp"
#include "dynlsf/shift_clustering.hpp"
#include "dynlsf/es_tree.hpp"
#include "dynlsf/dynamic_ldd.hpp"
#include "dynlsf/forest.hpp"
#include "dynlsf/hierarchy.hpp"
#include "dynlsf/spanner.hpp"
#include "dynlsf/oracle.hpp"
#include "dynlsf/stream.hpp"
#include "dynlsf/experiment.hpp"
