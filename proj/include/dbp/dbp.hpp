#pragma once

#include "dbp/bounds.hpp"
#include "dbp/checks.hpp"
#include "dbp/combined.hpp"
#include "dbp/events.hpp"
#include "dbp/first_fit.hpp"
#include "dbp/instance.hpp"
#include "dbp/intersecting.hpp"
#include "dbp/load_vector.hpp"
#include "dbp/offline.hpp"
#include "dbp/online_covering.hpp"
#include "dbp/oracle.hpp"
#include "dbp/packers.hpp"
#include "dbp/predictions.hpp"
#include "dbp/rational.hpp"
#include "dbp/schedule.hpp"
#include "dbp/transform.hpp"
#include "dbp/harness/experiment.hpp"
#include "dbp/harness/generators.hpp"
#include "dbp/harness/trace.hpp"
