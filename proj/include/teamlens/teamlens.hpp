#pragma once

#include "teamlens/analysis.hpp"
#include "teamlens/config.hpp"
#include "teamlens/congruence.hpp"
#include "teamlens/core.hpp"
#include "teamlens/diagnostics.hpp"
#include "teamlens/graph.hpp"
#include "teamlens/ingest.hpp"
#include "teamlens/metrics.hpp"
#include "teamlens/report.hpp"
#include "teamlens/stats.hpp"
