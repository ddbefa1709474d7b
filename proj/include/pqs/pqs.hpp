#pragma once

// Everything at once.

#include "pqs/bareiss.hpp"
#include "pqs/bigint.hpp"
#include "pqs/classifier.hpp"
#include "pqs/cli.hpp"
#include "pqs/error.hpp"
#include "pqs/json_io.hpp"
#include "pqs/padic_analytic.hpp"
#include "pqs/padic_core.hpp"
#include "pqs/probe.hpp"
#include "pqs/recurrence.hpp"
