#pragma once

#include "topokin/errors.hpp"
#include "topokin/expr.hpp"
#include "topokin/interval_set.hpp"
#include "topokin/kinematics.hpp"
#include "topokin/measure.hpp"
#include "topokin/scalar_jet.hpp"
#include "topokin/scene.hpp"
#include "topokin/surface.hpp"
#include "topokin/trajectory.hpp"
#include "topokin/vec3.hpp"
