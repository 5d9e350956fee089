#pragma once

#include "iim/cascade.hpp"
#include "iim/entity_set.hpp"
#include "iim/eqparse.hpp"
#include "iim/geo.hpp"
#include "iim/milp.hpp"
#include "iim/model.hpp"
#include "iim/random_system.hpp"
#include "iim/reductions.hpp"
#include "iim/vuln.hpp"
