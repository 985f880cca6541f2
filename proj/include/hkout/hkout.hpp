#pragma once

#include "hkout/analytics.hpp"
#include "hkout/connectivity.hpp"
#include "hkout/experiment.hpp"
#include "hkout/graph.hpp"
#include "hkout/graph_io.hpp"
#include "hkout/model.hpp"
#include "hkout/oracle.hpp"
#include "hkout/params.hpp"
#include "hkout/rng.hpp"
#include "hkout/validation.hpp"
