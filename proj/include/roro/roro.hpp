#pragma once

#include "roro/backtest.hpp"
#include "roro/config.hpp"
#include "roro/csv.hpp"
#include "roro/date.hpp"
#include "roro/digest.hpp"
#include "roro/errors.hpp"
#include "roro/fixtures.hpp"
#include "roro/ids.hpp"
#include "roro/ingestion.hpp"
#include "roro/metrics.hpp"
#include "roro/perf_table.hpp"
#include "roro/report.hpp"
#include "roro/signals.hpp"
#include "roro/strategies.hpp"
#include "roro/ts_core.hpp"
