#pragma once

// Umbrella header.

#include "roumieu/core.hpp"
#include "roumieu/function.hpp"
#include "roumieu/jet.hpp"
#include "roumieu/komatsu.hpp"
#include "roumieu/profile.hpp"
#include "roumieu/quadrature.hpp"
#include "roumieu/rclass.hpp"
#include "roumieu/seminorm.hpp"
#include "roumieu/ultradiffop.hpp"
#include "roumieu/ultradist.hpp"
#include "roumieu/units.hpp"
#include "roumieu/weights.hpp"
