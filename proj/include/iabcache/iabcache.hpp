#pragma once

#include "channel.hpp"
#include "config.hpp"
#include "constraints.hpp"
#include "error.hpp"
#include "instance.hpp"
#include "metrics.hpp"
#include "optimizer.hpp"
#include "oracle.hpp"
#include "parallel.hpp"
#include "params.hpp"
#include "pareto.hpp"
#include "report.hpp"
#include "scenario.hpp"
#include "topology.hpp"
#include "traffic.hpp"
#include "units.hpp"
