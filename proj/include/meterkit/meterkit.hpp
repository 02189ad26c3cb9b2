#pragma once

#include "meterkit/backfill.hpp"
#include "meterkit/calendar.hpp"
#include "meterkit/csv.hpp"
#include "meterkit/evaluation.hpp"
#include "meterkit/features.hpp"
#include "meterkit/kmeans.hpp"
#include "meterkit/quality.hpp"
#include "meterkit/readings.hpp"
#include "meterkit/slots.hpp"
#include "meterkit/tariff.hpp"
